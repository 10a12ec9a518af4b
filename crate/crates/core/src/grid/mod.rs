//! Binary sets on a uniform square grid.
//!
//! A [`GridSet`] stores occupancy of cells whose centers sit at
//! `origin + (i, j) * h`. Every measure is a cell count scaled by `h²`, so
//! areas and symmetric differences are exact for the represented set.

mod gset;

use std::ops::{Add, Mul, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gset::{read_gset, write_gset};

/// Relative guard used whenever a squared length is compared against a squared radius.
pub const RADIUS_GUARD: f64 = 1e-9;

/// A point (or vector) in the plane, in length units.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Rotation by +90°.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    /// Lexicographic order on (x, y), used for deterministic tie-breaking.
    pub fn lex_lt(self, other: Point) -> bool {
        self.x < other.x || (self.x == other.x && self.y < other.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Point::new(v[0], v[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// A closed Euclidean ball `B_s(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    pub center: Point,
    pub radius: f64,
}

impl BallSpec {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("ball radius must be positive, got {radius}")));
        }
        Ok(BallSpec { center, radius })
    }
}

/// Binary occupancy on a uniform square grid.
///
/// Cells are stored row-major: cell `(i, j)` (column `i`, row `j`) lives at
/// index `j * nx + i` and has center `origin + (i h, j h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSet {
    h: f64,
    origin: Point,
    nx: usize,
    ny: usize,
    cells: Vec<bool>,
}

impl GridSet {
    /// Builds a grid from raw parts, exactly as given (no margin is added).
    pub fn from_raw(h: f64, origin: Point, nx: usize, ny: usize, cells: Vec<bool>) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument(format!("spacing must be positive, got {h}")));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidArgument("grid dimensions must be at least 1".into()));
        }
        if cells.len() != nx * ny {
            return Err(Error::InvalidArgument(format!(
                "occupancy has {} entries, expected {}",
                cells.len(),
                nx * ny
            )));
        }
        if !(origin.x.is_finite() && origin.y.is_finite()) {
            return Err(Error::InvalidArgument("origin must be finite".into()));
        }
        Ok(GridSet { h, origin, nx, ny, cells })
    }

    /// An all-empty grid whose origin is the lattice point `(i0 h, j0 h)`.
    pub fn empty(h: f64, i0: i64, j0: i64, nx: usize, ny: usize) -> Result<Self> {
        let origin = Point::new(i0 as f64 * h, j0 as f64 * h);
        GridSet::from_raw(h, origin, nx, ny, vec![false; nx * ny])
    }

    /// Center-rasterizes a region: a cell is occupied iff `inside(center)`.
    ///
    /// Cell centers lie on the lattice `anchor + k h`. The region must be
    /// contained in the box `[lo, hi]`; one empty cell of margin is added on
    /// every side of that box.
    pub fn rasterize<F>(h: f64, anchor: Point, lo: Point, hi: Point, inside: F) -> Result<Self>
    where
        F: Fn(Point) -> bool + Sync,
    {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument(format!("spacing must be positive, got {h}")));
        }
        if !(lo.x <= hi.x && lo.y <= hi.y) {
            return Err(Error::InvalidArgument("empty bounding box".into()));
        }
        let i_lo = ((lo.x - anchor.x) / h).floor() as i64 - 1;
        let i_hi = ((hi.x - anchor.x) / h).ceil() as i64 + 1;
        let j_lo = ((lo.y - anchor.y) / h).floor() as i64 - 1;
        let j_hi = ((hi.y - anchor.y) / h).ceil() as i64 + 1;
        let nx = (i_hi - i_lo + 1) as usize;
        let ny = (j_hi - j_lo + 1) as usize;
        let origin = Point::new(anchor.x + i_lo as f64 * h, anchor.y + j_lo as f64 * h);
        let mut cells = vec![false; nx * ny];
        cells.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
            let y = origin.y + j as f64 * h;
            for (i, c) in row.iter_mut().enumerate() {
                *c = inside(Point::new(origin.x + i as f64 * h, y));
            }
        });
        let mut g = GridSet { h, origin, nx, ny, cells };
        g.clear_frame();
        Ok(g)
    }

    /// Builds a set from lattice cell indices `(i, j)` (centers at `(i h, j h)`),
    /// with a one-cell empty margin.
    pub fn from_cells(h: f64, cells: &[(i64, i64)]) -> Result<Self> {
        if cells.is_empty() {
            return GridSet::empty(h, 0, 0, 3, 3);
        }
        let i_lo = cells.iter().map(|c| c.0).min().unwrap() - 1;
        let i_hi = cells.iter().map(|c| c.0).max().unwrap() + 1;
        let j_lo = cells.iter().map(|c| c.1).min().unwrap() - 1;
        let j_hi = cells.iter().map(|c| c.1).max().unwrap() + 1;
        let mut g = GridSet::empty(h, i_lo, j_lo, (i_hi - i_lo + 1) as usize, (j_hi - j_lo + 1) as usize)?;
        for &(i, j) in cells {
            g.set((i - i_lo) as usize, (j - j_lo) as usize, true);
        }
        Ok(g)
    }

    fn clear_frame(&mut self) {
        // rasterize() pads its box by one cell, so a predicate that honors the
        // box leaves the frame empty; enforce it regardless.
        if self.frame_occupied() {
            *self = self.padded(1);
        }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Occupancy of cell `(i, j)`; cells outside the grid are empty.
    #[inline]
    pub fn get(&self, i: i64, j: i64) -> bool {
        if i < 0 || j < 0 || i >= self.nx as i64 || j >= self.ny as i64 {
            return false;
        }
        self.cells[j as usize * self.nx + i as usize]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let k = self.index(i, j);
        self.cells[k] = v;
    }

    #[inline]
    pub fn cell_center(&self, i: i64, j: i64) -> Point {
        Point::new(self.origin.x + i as f64 * self.h, self.origin.y + j as f64 * self.h)
    }

    /// The cell whose square contains `p` (possibly outside the grid).
    pub fn cell_of(&self, p: Point) -> (i64, i64) {
        (
            ((p.x - self.origin.x) / self.h + 0.5).floor() as i64,
            ((p.y - self.origin.y) / self.h + 0.5).floor() as i64,
        )
    }

    /// Membership of an arbitrary point, by the cell containing it.
    pub fn contains_point(&self, p: Point) -> bool {
        let (i, j) = self.cell_of(p);
        self.get(i, j)
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.cells.iter().any(|&c| c)
    }

    /// `h²` times the number of occupied cells.
    pub fn area(&self) -> f64 {
        self.count() as f64 * self.h * self.h
    }

    pub fn occupied(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let nx = self.nx;
        self.cells.iter().enumerate().filter(|(_, &c)| c).map(move |(k, _)| (k % nx, k / nx))
    }

    /// Centroid of occupied cell centers.
    pub fn centroid(&self) -> Result<Point> {
        let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
        for (i, j) in self.occupied() {
            sx += i as f64;
            sy += j as f64;
            n += 1;
        }
        if n == 0 {
            return Err(Error::EmptySet);
        }
        Ok(self.cell_center(0, 0) + Point::new(sx / n as f64, sy / n as f64) * self.h)
    }

    /// Index bounding box `(i_min, j_min, i_max, j_max)` of occupied cells.
    pub fn support_box(&self) -> Option<(usize, usize, usize, usize)> {
        let mut b: Option<(usize, usize, usize, usize)> = None;
        for (i, j) in self.occupied() {
            b = Some(match b {
                None => (i, j, i, j),
                Some((a, c, d, e)) => (a.min(i), c.min(j), d.max(i), e.max(j)),
            });
        }
        b
    }

    pub fn frame_occupied(&self) -> bool {
        let (nx, ny) = (self.nx, self.ny);
        (0..nx).any(|i| self.cells[i] || self.cells[(ny - 1) * nx + i])
            || (0..ny).any(|j| self.cells[j * nx] || self.cells[j * nx + nx - 1])
    }

    /// Grows the grid by `k` empty cells on every side.
    pub fn padded(&self, k: usize) -> GridSet {
        let nx = self.nx + 2 * k;
        let ny = self.ny + 2 * k;
        let mut cells = vec![false; nx * ny];
        for j in 0..self.ny {
            let src = &self.cells[j * self.nx..(j + 1) * self.nx];
            let dst = (j + k) * nx + k;
            cells[dst..dst + self.nx].copy_from_slice(src);
        }
        GridSet {
            h: self.h,
            origin: self.origin - Point::new(k as f64 * self.h, k as f64 * self.h),
            nx,
            ny,
            cells,
        }
    }

    /// Returns the set itself if its frame is empty, otherwise a copy padded by one cell.
    pub fn with_margin(&self) -> std::borrow::Cow<'_, GridSet> {
        if self.frame_occupied() {
            std::borrow::Cow::Owned(self.padded(1))
        } else {
            std::borrow::Cow::Borrowed(self)
        }
    }

    /// Shrinks the grid to the occupied support plus `margin` empty cells per side.
    pub fn cropped(&self, margin: usize) -> GridSet {
        let Some((i0, j0, i1, j1)) = self.support_box() else {
            return self.clone();
        };
        let nx = i1 - i0 + 1 + 2 * margin;
        let ny = j1 - j0 + 1 + 2 * margin;
        let mut cells = vec![false; nx * ny];
        for j in j0..=j1 {
            let src = &self.cells[j * self.nx + i0..j * self.nx + i1 + 1];
            let dst = (j - j0 + margin) * nx + margin;
            cells[dst..dst + src.len()].copy_from_slice(src);
        }
        let origin = self.cell_center(i0 as i64 - margin as i64, j0 as i64 - margin as i64);
        GridSet { h: self.h, origin, nx, ny, cells }
    }

    /// Complement within the grid frame.
    pub fn complement(&self) -> GridSet {
        let mut g = self.clone();
        g.cells.iter_mut().for_each(|c| *c = !*c);
        g
    }

    /// Same cells, physically scaled by `lambda` about the coordinate origin.
    pub fn rescaled(&self, lambda: f64) -> GridSet {
        let mut g = self.clone();
        g.h *= lambda;
        g.origin = g.origin * lambda;
        g
    }

    /// Offset of `other`'s cell (0, 0) in this grid's index frame.
    pub fn lattice_offset(&self, other: &GridSet) -> Result<(i64, i64)> {
        if (self.h - other.h).abs() > 1e-12 * self.h {
            return Err(Error::SpacingMismatch(self.h, other.h));
        }
        let dx = (other.origin.x - self.origin.x) / self.h;
        let dy = (other.origin.y - self.origin.y) / self.h;
        let (kx, ky) = (dx.round(), dy.round());
        if (dx - kx).abs() > 1e-9 || (dy - ky).abs() > 1e-9 {
            return Err(Error::MisalignedOrigins);
        }
        Ok((kx as i64, ky as i64))
    }

    /// Cellwise combination of two aligned sets over the union of their frames.
    pub fn zip_with<F>(&self, other: &GridSet, op: F) -> Result<GridSet>
    where
        F: Fn(bool, bool) -> bool,
    {
        let (ox, oy) = self.lattice_offset(other)?;
        let i0 = 0.min(ox);
        let j0 = 0.min(oy);
        let i1 = (self.nx as i64).max(ox + other.nx as i64);
        let j1 = (self.ny as i64).max(oy + other.ny as i64);
        let nx = (i1 - i0) as usize;
        let ny = (j1 - j0) as usize;
        let mut cells = vec![false; nx * ny];
        for j in 0..ny as i64 {
            for i in 0..nx as i64 {
                let a = self.get(i + i0, j + j0);
                let b = other.get(i + i0 - ox, j + j0 - oy);
                cells[j as usize * nx + i as usize] = op(a, b);
            }
        }
        Ok(GridSet { h: self.h, origin: self.cell_center(i0, j0), nx, ny, cells })
    }

    fn count_zip<F>(&self, other: &GridSet, op: F) -> Result<usize>
    where
        F: Fn(bool, bool) -> bool,
    {
        let (ox, oy) = self.lattice_offset(other)?;
        let i0 = 0.min(ox);
        let j0 = 0.min(oy);
        let i1 = (self.nx as i64).max(ox + other.nx as i64);
        let j1 = (self.ny as i64).max(oy + other.ny as i64);
        let mut n = 0;
        for j in j0..j1 {
            for i in i0..i1 {
                if op(self.get(i, j), other.get(i - ox, j - oy)) {
                    n += 1;
                }
            }
        }
        Ok(n)
    }

    pub fn union(&self, other: &GridSet) -> Result<GridSet> {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &GridSet) -> Result<GridSet> {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &GridSet) -> Result<GridSet> {
        self.zip_with(other, |a, b| a && !b)
    }

    /// `true` iff every occupied cell of `self` is occupied in `other`.
    pub fn is_subset_of(&self, other: &GridSet) -> Result<bool> {
        Ok(self.count_zip(other, |a, b| a && !b)? == 0)
    }

    /// Cellwise equality of the represented sets, independent of grid extents.
    pub fn same_cells(&self, other: &GridSet) -> Result<bool> {
        Ok(self.count_zip(other, |a, b| a != b)? == 0)
    }

    /// Number of cells occupied in exactly one of the two sets.
    pub fn sym_diff_count(&self, other: &GridSet) -> Result<usize> {
        self.count_zip(other, |a, b| a != b)
    }
}

/// `|E|`: `h²` times the occupied-cell count.
pub fn area(e: &GridSet) -> f64 {
    e.area()
}

/// `|A Δ B|` for two sets on the same lattice.
pub fn sym_diff_area(a: &GridSet, b: &GridSet) -> Result<f64> {
    Ok(a.sym_diff_count(b)? as f64 * a.h * a.h)
}

/// `|E ∩ B_s(x)|`, counting occupied cells whose centers lie in the closed ball.
pub fn ball_overlap_area(e: &GridSet, b: &BallSpec) -> f64 {
    let counter = OverlapCounter::new(e);
    counter.count(b.center, b.radius) as f64 * e.h * e.h
}

/// Splits each cell into `factor²` sub-cells of spacing `h / factor`.
pub fn resample(e: &GridSet, factor: usize) -> Result<GridSet> {
    if factor == 0 {
        return Err(Error::InvalidArgument("resample factor must be >= 1".into()));
    }
    if factor == 1 {
        return Ok(e.clone());
    }
    let h2 = e.h / factor as f64;
    let nx = e.nx * factor;
    let ny = e.ny * factor;
    let mut cells = vec![false; nx * ny];
    cells.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
        let src = j / factor;
        for (i, c) in row.iter_mut().enumerate() {
            *c = e.cells[src * e.nx + i / factor];
        }
    });
    let shift = -0.5 * e.h + 0.5 * h2;
    Ok(GridSet { h: h2, origin: e.origin + Point::new(shift, shift), nx, ny, cells })
}

/// Row prefix sums for fast counting of occupied cells inside discs.
#[derive(Clone, Debug)]
pub struct OverlapCounter {
    h: f64,
    origin: Point,
    nx: usize,
    ny: usize,
    prefix: Vec<u32>,
}

impl OverlapCounter {
    pub fn new(e: &GridSet) -> Self {
        let stride = e.nx + 1;
        let mut prefix = vec![0u32; stride * e.ny];
        for j in 0..e.ny {
            let mut acc = 0u32;
            for i in 0..e.nx {
                acc += e.cells[j * e.nx + i] as u32;
                prefix[j * stride + i + 1] = acc;
            }
        }
        OverlapCounter { h: e.h, origin: e.origin, nx: e.nx, ny: e.ny, prefix }
    }

    /// Number of occupied cells with center at distance `<= s` from `x`.
    pub fn count(&self, x: Point, s: f64) -> u64 {
        let h = self.h;
        let s2 = s * s * (1.0 + RADIUS_GUARD);
        let stride = self.nx + 1;
        let fx = (x.x - self.origin.x) / h;
        let fy = (x.y - self.origin.y) / h;
        let sh = s / h;
        let j_lo = ((fy - sh).floor() as i64 - 1).max(0);
        let j_hi = ((fy + sh).ceil() as i64 + 1).min(self.ny as i64 - 1);
        let mut total = 0u64;
        for j in j_lo..=j_hi {
            let dy = (j as f64 - fy) * h;
            let rem = s2 - dy * dy;
            if rem < 0.0 {
                continue;
            }
            let w = rem.sqrt() / h;
            let inside = |i: i64| {
                let dx = (i as f64 - fx) * h;
                dx * dx + dy * dy <= s2
            };
            let mut lo = (fx - w).ceil() as i64;
            let mut hi = (fx + w).floor() as i64;
            // settle the endpoints against the exact predicate
            while inside(lo - 1) {
                lo -= 1;
            }
            while lo <= hi && !inside(lo) {
                lo += 1;
            }
            while inside(hi + 1) {
                hi += 1;
            }
            while hi >= lo && !inside(hi) {
                hi -= 1;
            }
            let lo = lo.max(0);
            let hi = hi.min(self.nx as i64 - 1);
            if lo > hi {
                continue;
            }
            let row = j as usize * stride;
            total += (self.prefix[row + hi as usize + 1] - self.prefix[row + lo as usize]) as u64;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(h: f64, c: Point, r: f64) -> GridSet {
        GridSet::rasterize(h, Point::default(), c - Point::new(r, r), c + Point::new(r, r), |p| {
            p.dist(c) <= r
        })
        .unwrap()
    }

    #[test]
    fn empty_area_is_zero() {
        let g = GridSet::empty(0.1, 0, 0, 5, 4).unwrap();
        assert_eq!(area(&g), 0.0);
    }

    #[test]
    fn full_block_area_is_exact() {
        let cells: Vec<_> = (0..10).flat_map(|i| (0..10).map(move |j| (i, j))).collect();
        let g = GridSet::from_cells(0.1, &cells).unwrap();
        assert!((area(&g) - 1.0).abs() < 1e-12);
        assert!(!g.frame_occupied());
    }

    #[test]
    fn unit_disc_area() {
        let g = disc(0.005, Point::default(), 1.0);
        assert!((area(&g) / std::f64::consts::PI - 1.0).abs() < 0.005);
        assert!(!g.frame_occupied());
    }

    #[test]
    fn sym_diff_identity_and_disjoint() {
        let a = disc(0.02, Point::default(), 0.5);
        let b = disc(0.02, Point::new(3.0, 0.0), 0.5);
        assert_eq!(sym_diff_area(&a, &a).unwrap(), 0.0);
        let d = sym_diff_area(&a, &b).unwrap();
        assert!((d - (area(&a) + area(&b))).abs() < 1e-12);
    }

    #[test]
    fn sym_diff_lens() {
        let h = 0.005;
        let a = disc(h, Point::default(), 1.0);
        let b = disc(h, Point::new(1.0, 0.0), 1.0);
        let d: f64 = 1.0;
        let lens = 2.0 * (d / 2.0).acos() - (d / 2.0) * (4.0 - d * d).sqrt();
        let expect = 2.0 * std::f64::consts::PI - 2.0 * lens;
        let got = sym_diff_area(&a, &b).unwrap();
        assert!((got / expect - 1.0).abs() < 0.01, "{got} vs {expect}");
    }

    #[test]
    fn sym_diff_errors() {
        let a = disc(0.02, Point::default(), 0.5);
        let b = disc(0.01, Point::default(), 0.5);
        assert!(matches!(sym_diff_area(&a, &b), Err(Error::SpacingMismatch(..))));
        let c = GridSet::rasterize(0.02, Point::new(0.007, 0.0), Point::new(-0.5, -0.5), Point::new(0.5, 0.5), |p| {
            p.norm() <= 0.5
        })
        .unwrap();
        assert!(matches!(sym_diff_area(&a, &c), Err(Error::MisalignedOrigins)));
    }

    #[test]
    fn overlap_matches_direct_count() {
        let h = 0.01;
        let e = disc(h, Point::new(0.1, -0.2), 0.7);
        let counter = OverlapCounter::new(&e);
        for &(cx, cy, s) in &[(0.0, 0.0, 0.5), (0.3, 0.1, 0.33), (0.12, -0.2, 0.25), (2.0, 2.0, 0.4), (0.0, 0.0, 0.05)] {
            let x = Point::new(cx, cy);
            let direct = e
                .occupied()
                .filter(|&(i, j)| {
                    let c = e.cell_center(i as i64, j as i64);
                    (c - x).norm_sq() <= s * s * (1.0 + RADIUS_GUARD)
                })
                .count() as u64;
            assert_eq!(counter.count(x, s), direct);
        }
    }

    #[test]
    fn overlap_inside_and_disjoint() {
        let h = 0.005;
        let e = disc(h, Point::default(), 1.0);
        let s = 0.4;
        let inside = ball_overlap_area(&e, &BallSpec::new(Point::new(0.2, 0.1), s).unwrap());
        assert!((inside - std::f64::consts::PI * s * s).abs() < 2.0 * h * s * 2.0 * std::f64::consts::PI);
        let out = ball_overlap_area(&e, &BallSpec::new(Point::new(5.0, 0.0), s).unwrap());
        assert_eq!(out, 0.0);
        let same = ball_overlap_area(&e, &BallSpec::new(Point::default(), 1.0).unwrap());
        assert!((same - area(&e)).abs() < 2.0 * std::f64::consts::PI * h);
    }

    #[test]
    fn resample_preserves_area() {
        let e = disc(0.03, Point::new(0.1, 0.0), 0.6);
        let r1 = resample(&e, 1).unwrap();
        assert_eq!(r1, e);
        let r3 = resample(&e, 3).unwrap();
        assert_eq!(r3.count(), 9 * e.count());
        assert!((area(&r3) - area(&e)).abs() < 1e-12);
        // odd factors keep the origin on the refined lattice
        let k = r3.origin().x / r3.h();
        assert!((k - k.round()).abs() < 1e-9);
    }

    #[test]
    fn resample_against_direct_rasterization() {
        let h = 0.01;
        let e = disc(h, Point::default(), 1.0);
        let fine = resample(&e, 2).unwrap();
        // even factors shift the lattice by half a fine cell
        let direct = GridSet::rasterize(h / 2.0, fine.origin(), Point::new(-1.0, -1.0), Point::new(1.0, 1.0), |p| {
            p.norm() <= 1.0
        })
        .unwrap();
        let d = sym_diff_area(&fine, &direct).unwrap();
        assert!(d <= 2.0 * 2.0 * std::f64::consts::PI * h, "{d}");
    }

    #[test]
    fn crop_and_pad_keep_cells() {
        let e = disc(0.05, Point::default(), 0.5);
        let big = e.padded(7);
        assert!(big.same_cells(&e).unwrap());
        let c = big.cropped(1);
        assert!(c.same_cells(&e).unwrap());
        assert_eq!(c.dims(), e.dims());
    }
}
