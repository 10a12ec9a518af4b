//! Distance fields and the morphology they induce.
//!
//! Dilation keeps cells within distance `<= r` of the set; erosion keeps
//! cells at distance `> r` from the complement. Both use the same integer
//! threshold, so they are adjoint for the digital disc
//! `{v in Z²: |v|² <= (r/h)²}`: closing is then extensive and idempotent, and
//! `dilate(close(E)) == dilate(E)` holds cellwise.

mod edt;
mod exterior;

use std::io::Write;

use crate::error::{Error, Result};
use crate::grid::{GridSet, Point, RADIUS_GUARD};

pub use edt::squared_edt;
pub use exterior::{exterior_ball_check, exterior_ball_fraction, ExteriorBallReport};

/// Per-cell squared distance, in index units, to the nearest occupied cell.
#[derive(Clone, Debug)]
pub struct DistanceField {
    h: f64,
    origin: Point,
    nx: usize,
    ny: usize,
    values: Vec<u64>,
}

/// How the dilation radius is compared against cell distances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Threshold {
    /// `dist <= r`.
    #[default]
    Closed,
    /// `dist < r`. Breaks adjunction with erosion; kept for mutation checks.
    Open,
}

impl Threshold {
    /// Largest squared index distance admitted for radius `r`.
    pub fn max_squared(self, r: f64, h: f64) -> u64 {
        let q = (r / h) * (r / h);
        match self {
            Threshold::Closed => (q * (1.0 + RADIUS_GUARD)).floor() as u64,
            Threshold::Open => {
                let c = (q * (1.0 - RADIUS_GUARD)).ceil() as u64;
                c.saturating_sub(1)
            }
        }
    }
}

impl DistanceField {
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> u64 {
        self.values[j * self.nx + i]
    }

    /// Distance (length units) at the cell containing `p`, or `None` off-grid.
    pub fn distance_at(&self, p: Point) -> Option<f64> {
        let i = ((p.x - self.origin.x) / self.h + 0.5).floor();
        let j = ((p.y - self.origin.y) / self.h + 0.5).floor();
        if i < 0.0 || j < 0.0 || i >= self.nx as f64 || j >= self.ny as f64 {
            return None;
        }
        Some((self.value(i as usize, j as usize) as f64).sqrt() * self.h)
    }

    /// Cells at distance `<= r` (closed threshold), on this field's grid.
    pub fn within(&self, r: f64) -> GridSet {
        self.within_threshold(Threshold::Closed.max_squared(r, self.h))
    }

    fn within_threshold(&self, thr: u64) -> GridSet {
        let cells = self.values.iter().map(|&v| v <= thr).collect();
        GridSet::from_raw(self.h, self.origin, self.nx, self.ny, cells).expect("field dims are valid")
    }

    /// `h²` times the number of cells at distance `<= r`.
    pub fn area_within(&self, r: f64) -> f64 {
        let thr = Threshold::Closed.max_squared(r, self.h);
        self.values.iter().filter(|&&v| v <= thr).count() as f64 * self.h * self.h
    }

    /// Debug export: one `i,j,d2` row per cell.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "i,j,d2")?;
        for j in 0..self.ny {
            for i in 0..self.nx {
                writeln!(w, "{i},{j},{}", self.value(i, j))?;
            }
        }
        Ok(())
    }
}

/// Exact squared Euclidean distance transform of `e` on its own grid.
pub fn edt(e: &GridSet) -> Result<DistanceField> {
    if e.is_empty() {
        return Err(Error::EmptySet);
    }
    let (nx, ny) = e.dims();
    let values = squared_edt(e.cells(), &[ny, nx]);
    Ok(DistanceField {
        h: e.h(),
        origin: e.origin(),
        nx,
        ny,
        values: values.into_iter().map(|v| v as u64).collect(),
    })
}

fn growth(r: f64, h: f64) -> usize {
    (r / h).ceil() as usize + 1
}

/// `I_r(E)`, grown by `ceil(r/h) + 1` cells per side.
pub fn dilate(e: &GridSet, r: f64) -> Result<GridSet> {
    dilate_with(e, r, Threshold::Closed)
}

pub fn dilate_with(e: &GridSet, r: f64, threshold: Threshold) -> Result<GridSet> {
    check_radius(r)?;
    let grown = e.padded(growth(r, e.h()));
    let field = edt(&grown)?;
    Ok(field.within_threshold(threshold.max_squared(r, e.h())))
}

/// Cells whose distance to the complement exceeds `r`. May be empty.
pub fn erode(e: &GridSet, r: f64) -> Result<GridSet> {
    check_radius(r)?;
    let base = e.with_margin();
    let (nx, ny) = base.dims();
    let comp: Vec<bool> = base.cells().iter().map(|&c| !c).collect();
    let dist = squared_edt(&comp, &[ny, nx]);
    let thr = Threshold::Closed.max_squared(r, e.h()) as i64;
    let cells = dist.iter().map(|&v| v > thr).collect();
    GridSet::from_raw(e.h(), base.origin(), nx, ny, cells)
}

/// The r-envelope `co_r(E)`, computed as the closing `erode(dilate(E, r), r)`
/// and cropped to its support plus a one-cell margin.
pub fn envelope(e: &GridSet, r: f64) -> Result<GridSet> {
    envelope_with(e, r, Threshold::Closed)
}

pub fn envelope_with(e: &GridSet, r: f64, threshold: Threshold) -> Result<GridSet> {
    let d = dilate_with(e, r, threshold)?;
    Ok(erode(&d, r)?.cropped(1))
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("radius must be positive, got {r}")))
    }
}

/// One distance transform serving dilations of `E` at every radius up to `r_max`.
#[derive(Clone, Debug)]
pub struct DilationProfile {
    field: DistanceField,
    r_max: f64,
}

impl DilationProfile {
    pub fn new(e: &GridSet, r_max: f64) -> Result<Self> {
        let r_max = r_max.max(0.0);
        let grown = e.padded(growth(r_max, e.h()));
        Ok(DilationProfile { field: edt(&grown)?, r_max })
    }

    pub fn field(&self) -> &DistanceField {
        &self.field
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// `|I_r(E)|`; `r = 0` gives `|E|`.
    pub fn area(&self, r: f64) -> f64 {
        debug_assert!(r <= self.r_max * (1.0 + 1e-12));
        self.field.area_within(r)
    }

    /// `I_r(E)` (cellwise identical to [`dilate`]), cropped to support plus margin.
    pub fn dilation(&self, r: f64) -> GridSet {
        debug_assert!(r <= self.r_max * (1.0 + 1e-12));
        self.field.within(r).cropped(1)
    }
}
