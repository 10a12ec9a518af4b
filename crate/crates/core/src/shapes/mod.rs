//! Analytic test shapes and the fixed verification corpora.
//!
//! Every shape is center-rasterized on the lattice anchored at the coordinate
//! origin, so generation is a pure function of the spec.

mod halton;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSet, Point};

pub const MAX_BLOB_MODES: usize = 8;
pub const MAX_BLOB_AMPLITUDE: f64 = 0.3;

fn one() -> f64 {
    1.0
}

/// Kind-specific parameters; serialized as `{"kind": ..., "parameters": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "parameters", rename_all = "snake_case")]
pub enum Shape {
    Disc {
        radius: f64,
        #[serde(default)]
        center: Point,
    },
    /// `diag(1 + ε, 1/(1 + ε))` applied to the disc of the given radius.
    Ellipse {
        epsilon: f64,
        #[serde(default = "one")]
        radius: f64,
    },
    /// Discs centered at `(0, 0)` and `(separation, 0)`.
    TwoDiscs {
        separation: f64,
        #[serde(default = "one")]
        radius: f64,
    },
    Annulus { inner: f64, outer: f64 },
    /// A disc with `holes` round holes placed by a seeded Halton sequence.
    PerforatedDisc { radius: f64, holes: usize, hole_radius: f64 },
    /// Points within `radius` of the segment `[-half_length, half_length] × {0}`.
    Stadium { half_length: f64, radius: f64 },
    /// Axis-aligned, centered at the origin.
    Square { side: f64 },
    /// Radial Fourier perturbation of a disc: `R (1 + Σ a_k cos(kθ + φ_k))`.
    Blob {
        #[serde(default = "one")]
        radius: f64,
        modes: usize,
        amplitude: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(flatten)]
    pub shape: Shape,
    pub h: f64,
    #[serde(default)]
    pub seed: u64,
}

impl ShapeSpec {
    pub fn new(shape: Shape, h: f64) -> Self {
        ShapeSpec { id: None, shape, h, seed: 0 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_h(&self, h: f64) -> Self {
        ShapeSpec { h, ..self.clone() }
    }

    /// The explicit id, or one derived from kind and parameters.
    pub fn label(&self) -> String {
        if let Some(id) = &self.id {
            return id.clone();
        }
        match &self.shape {
            Shape::Disc { radius, .. } => format!("disc_r{radius}"),
            Shape::Ellipse { epsilon, .. } => format!("ellipse_eps{epsilon}"),
            Shape::TwoDiscs { separation, .. } => format!("two_discs_d{separation}"),
            Shape::Annulus { inner, outer } => format!("annulus_{inner}_{outer}"),
            Shape::PerforatedDisc { holes, hole_radius, .. } => {
                format!("perforated_{holes}x{hole_radius}_s{}", self.seed)
            }
            Shape::Stadium { half_length, radius } => format!("stadium_{half_length}_{radius}"),
            Shape::Square { side } => format!("square_{side}"),
            Shape::Blob { modes, amplitude, .. } => format!("blob_m{modes}_a{amplitude}_s{}", self.seed),
        }
    }

    pub fn is_ellipse(&self) -> bool {
        matches!(self.shape, Shape::Ellipse { .. })
    }

    /// `true` for shapes that are convex in the continuum.
    pub fn is_convex(&self) -> bool {
        matches!(
            self.shape,
            Shape::Disc { .. } | Shape::Ellipse { .. } | Shape::Stadium { .. } | Shape::Square { .. }
        )
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadParameters(msg.into())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Hole centers of a perforated disc.
pub fn hole_centers(radius: f64, holes: usize, hole_radius: f64, seed: u64) -> Result<Vec<Point>> {
    // keep holes 3 hole radii apart (edge to edge) and one hole radius inside the rim
    let reach = radius - 2.0 * hole_radius;
    let min_sep = 5.0 * hole_radius;
    if reach <= 0.0 {
        return Err(bad("holes do not fit inside the disc"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift = (rng.gen::<f64>(), rng.gen::<f64>());
    let mut centers: Vec<Point> = Vec::with_capacity(holes);
    let mut index = 1u64;
    let limit = 1000 + 1000 * holes as u64;
    while centers.len() < holes {
        if index > limit {
            return Err(bad(format!("could not place {holes} holes of radius {hole_radius}")));
        }
        let u = (halton::radical_inverse(index, 2) + shift.0).fract();
        let v = (halton::radical_inverse(index, 3) + shift.1).fract();
        index += 1;
        let p = Point::new((2.0 * u - 1.0) * reach, (2.0 * v - 1.0) * reach);
        if p.norm() <= reach && centers.iter().all(|c| c.dist(p) >= min_sep) {
            centers.push(p);
        }
    }
    Ok(centers)
}

/// Fourier coefficients `(k, a_k, φ_k)` of a blob, `Σ |a_k| = amplitude`.
pub fn blob_modes(modes: usize, amplitude: f64, seed: u64) -> Vec<(usize, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<(usize, f64, f64)> = (0..modes)
        .map(|m| {
            let k = m + 2;
            (k, rng.gen_range(0.2..1.0) / k as f64, rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    let total: f64 = raw.iter().map(|m| m.1).sum();
    raw.into_iter().map(|(k, w, phi)| (k, amplitude * w / total, phi)).collect()
}

fn raster<F>(h: f64, lo: Point, hi: Point, inside: F) -> Result<GridSet>
where
    F: Fn(Point) -> bool + Sync,
{
    let g = GridSet::rasterize(h, Point::default(), lo, hi, inside)?;
    if g.is_empty() {
        return Err(bad("shape covers no cell center at this spacing"));
    }
    Ok(g)
}

/// Center-rasterizes the shape described by `spec`.
pub fn generate(spec: &ShapeSpec) -> Result<GridSet> {
    let h = spec.h;
    positive("h", h)?;
    match spec.shape {
        Shape::Disc { radius, center } => {
            positive("radius", radius)?;
            let d = Point::new(radius, radius);
            let r2 = radius * radius;
            raster(h, center - d, center + d, |p| (p - center).norm_sq() <= r2)
        }
        Shape::Ellipse { epsilon, radius } => {
            positive("radius", radius)?;
            if !(epsilon > -1.0 && epsilon.is_finite()) {
                return Err(bad(format!("epsilon must exceed -1, got {epsilon}")));
            }
            let a = radius * (1.0 + epsilon);
            let b = radius / (1.0 + epsilon);
            raster(h, Point::new(-a, -b), Point::new(a, b), |p| (p.x / a).powi(2) + (p.y / b).powi(2) <= 1.0)
        }
        Shape::TwoDiscs { separation, radius } => {
            positive("radius", radius)?;
            positive("separation", separation)?;
            let r2 = radius * radius;
            let c2 = Point::new(separation, 0.0);
            raster(h, Point::new(-radius, -radius), Point::new(separation + radius, radius), |p| {
                p.norm_sq() <= r2 || (p - c2).norm_sq() <= r2
            })
        }
        Shape::Annulus { inner, outer } => {
            positive("outer", outer)?;
            if !(inner >= 0.0 && inner < outer) {
                return Err(bad(format!("need 0 <= inner < outer, got {inner}, {outer}")));
            }
            let d = Point::new(outer, outer);
            raster(h, d * -1.0, d, |p| {
                let n2 = p.norm_sq();
                n2 <= outer * outer && n2 >= inner * inner
            })
        }
        Shape::PerforatedDisc { radius, holes, hole_radius } => {
            positive("radius", radius)?;
            positive("hole_radius", hole_radius)?;
            let centers = hole_centers(radius, holes, hole_radius, spec.seed)?;
            let d = Point::new(radius, radius);
            let (r2, q2) = (radius * radius, hole_radius * hole_radius);
            raster(h, d * -1.0, d, |p| p.norm_sq() <= r2 && centers.iter().all(|c| (p - *c).norm_sq() > q2))
        }
        Shape::Stadium { half_length, radius } => {
            positive("radius", radius)?;
            if !(half_length >= 0.0 && half_length.is_finite()) {
                return Err(bad(format!("half_length must be nonnegative, got {half_length}")));
            }
            let r2 = radius * radius;
            raster(h, Point::new(-half_length - radius, -radius), Point::new(half_length + radius, radius), |p| {
                let dx = (p.x.abs() - half_length).max(0.0);
                dx * dx + p.y * p.y <= r2
            })
        }
        Shape::Square { side } => {
            positive("side", side)?;
            let s = side / 2.0;
            raster(h, Point::new(-s, -s), Point::new(s, s), |p| p.x.abs() <= s && p.y.abs() <= s)
        }
        Shape::Blob { radius, modes, amplitude } => {
            positive("radius", radius)?;
            if modes == 0 || modes > MAX_BLOB_MODES {
                return Err(bad(format!("blob modes must be in 1..={MAX_BLOB_MODES}, got {modes}")));
            }
            if !(0.0..=MAX_BLOB_AMPLITUDE).contains(&amplitude) {
                return Err(bad(format!("blob amplitude must be in [0, {MAX_BLOB_AMPLITUDE}], got {amplitude}")));
            }
            let coeffs = blob_modes(modes, amplitude, spec.seed);
            let rmax = radius * (1.0 + amplitude);
            let d = Point::new(rmax, rmax);
            raster(h, d * -1.0, d, |p| {
                let theta = p.y.atan2(p.x);
                let rho = radius * (1.0 + coeffs.iter().map(|&(k, a, phi)| a * (k as f64 * theta + phi).cos()).sum::<f64>());
                p.norm() <= rho
            })
        }
    }
}

/// A named, versioned list of shape specs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub name: String,
    pub version: u32,
    pub specs: Vec<ShapeSpec>,
}

const SMOKE_JSON: &str = include_str!("../../corpus/smoke.json");
const FULL_JSON: &str = include_str!("../../corpus/full.json");

/// The published corpus `smoke` or `full`.
pub fn corpus(name: &str) -> Result<Corpus> {
    let text = match name {
        "smoke" => SMOKE_JSON,
        "full" => FULL_JSON,
        other => return Err(Error::UnknownCorpus(other.to_string())),
    };
    Ok(serde_json::from_str(text)?)
}

/// Number of 4-connected components of occupied cells.
pub fn component_count(e: &GridSet) -> usize {
    let (nx, ny) = e.dims();
    let mut seen = vec![false; nx * ny];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..nx * ny {
        if !e.cells()[start] || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(k) = stack.pop() {
            let (i, j) = ((k % nx) as i64, (k / nx) as i64);
            for (a, b) in [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)] {
                if e.get(a, b) {
                    let q = b as usize * nx + a as usize;
                    if !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
    }
    count
}
