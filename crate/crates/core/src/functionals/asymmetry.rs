//! Fraenkel asymmetry: the best-placed equal-area disc.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSet, OverlapCounter, Point};

/// Minimum coarse stride, in cells.
const MIN_COARSE_CELLS: f64 = 8.0;
/// Coarse stride as a fraction of `r_E`.
const COARSE_FRACTION: f64 = 1.0 / 20.0;
const MAX_REFINEMENTS: usize = 64;

/// Result of the asymmetry search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Asymmetry {
    pub alpha: f64,
    pub center: Point,
    /// Occupied cells inside the optimal disc.
    pub overlap_cells: u64,
    pub trace: SearchTrace,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub evaluations: usize,
    pub coarse_stride: f64,
    pub refinement_rounds: usize,
}

/// A lattice candidate ordered by overlap, ties broken towards smaller `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Candidate {
    count: u64,
    i: i64,
    j: i64,
}

impl Candidate {
    fn better_than(self, o: Candidate) -> bool {
        self.count > o.count || (self.count == o.count && (self.i, self.j) < (o.i, o.j))
    }

    fn best(self, o: Candidate) -> Candidate {
        if o.better_than(self) {
            o
        } else {
            self
        }
    }
}

/// `α(E) = min_x |E Δ B_{r_E}(x)| / |B_{r_E}|`, over centers on the cell-center lattice.
///
/// The search evaluates the lattice point nearest the centroid, scans a coarse
/// sublattice over the occupied bounding box inflated by `r_E`, then searches
/// exhaustively at stride `h` in a window around the incumbent, recentring the
/// window until the incumbent stops moving.
pub fn fraenkel_asymmetry(e: &GridSet) -> Result<Asymmetry> {
    let (i0, j0, i1, j1) = e.support_box().ok_or(Error::EmptySet)?;
    let h = e.h();
    let n = e.count() as u64;
    let area = n as f64 * h * h;
    let s = (area / std::f64::consts::PI).sqrt();
    let counter = OverlapCounter::new(e);
    let eval = |i: i64, j: i64| Candidate { count: counter.count(e.cell_center(i, j), s), i, j };

    let k = ((MIN_COARSE_CELLS * h).max(s * COARSE_FRACTION) / h).ceil() as i64;
    let m = (s / h).ceil() as i64;
    let (lo_i, hi_i) = (i0 as i64 - m, i1 as i64 + m);
    let (lo_j, hi_j) = (j0 as i64 - m, j1 as i64 + m);
    let mut evaluations = 0;

    let c = e.centroid()?;
    let (ci, cj) = e.cell_of(c);
    let mut best = eval(ci, cj);
    evaluations += 1;

    let coarse: Vec<(i64, i64)> = (lo_j..=hi_j)
        .step_by(k as usize)
        .flat_map(|j| (lo_i..=hi_i).step_by(k as usize).map(move |i| (i, j)))
        .collect();
    evaluations += coarse.len();
    best = coarse.par_iter().map(|&(i, j)| eval(i, j)).reduce(|| best, Candidate::best);

    let mut rounds = 0;
    loop {
        rounds += 1;
        let (bi, bj) = (best.i, best.j);
        let window: Vec<(i64, i64)> =
            (bj - k..=bj + k).flat_map(|j| (bi - k..=bi + k).map(move |i| (i, j))).collect();
        evaluations += window.len();
        let next = window.par_iter().map(|&(i, j)| eval(i, j)).reduce(|| best, Candidate::best);
        if next == best || rounds >= MAX_REFINEMENTS {
            best = next;
            break;
        }
        best = next;
    }

    Ok(Asymmetry {
        alpha: 2.0 * (n - best.count) as f64 / n as f64,
        center: e.cell_center(best.i, best.j),
        overlap_cells: best.count,
        trace: SearchTrace { evaluations, coarse_stride: k as f64 * h, refinement_rounds: rounds },
    })
}

/// `|E Δ B_{r_E}(x)| / |E|` at an arbitrary center.
pub fn asymmetry_at(e: &GridSet, counter: &OverlapCounter, x: Point) -> f64 {
    let n = e.count() as f64;
    let s = (n * e.h() * e.h() / std::f64::consts::PI).sqrt();
    2.0 * (n - counter.count(x, s) as f64) / n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(h: f64, c: Point, r: f64) -> GridSet {
        GridSet::rasterize(h, Point::default(), c - Point::new(r, r), c + Point::new(r, r), |p| p.dist(c) <= r)
            .unwrap()
    }

    #[test]
    fn disc_is_symmetric() {
        let h = 0.005;
        let c = Point::new(0.3, -0.2);
        let a = fraenkel_asymmetry(&disc(h, c, 1.0)).unwrap();
        assert!(a.alpha <= 3.0 * h, "{a:?}");
        assert!(a.center.dist(c) <= 2.0 * h, "{a:?}");
    }

    #[test]
    fn empty_set_errors() {
        let g = GridSet::empty(0.1, 0, 0, 4, 4).unwrap();
        assert!(matches!(fraenkel_asymmetry(&g), Err(Error::EmptySet)));
    }

    #[test]
    fn single_cell_set() {
        let g = GridSet::from_cells(0.1, &[(3, 4)]).unwrap();
        let a = fraenkel_asymmetry(&g).unwrap();
        assert_eq!(a.alpha, 0.0);
        assert!(a.center.dist(Point::new(0.3, 0.4)) < 1e-9);
    }
}
