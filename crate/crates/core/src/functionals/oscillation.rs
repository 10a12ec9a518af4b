//! Oscillation indices: how far boundary normals are from radial about a center.

use serde::{Deserialize, Serialize};

use super::asymmetry::asymmetry_at;
use super::simplex::nelder_mead;
use crate::boundary::{extract_boundary, Sample};
use crate::error::{Error, Result};
use crate::grid::{GridSet, OverlapCounter, Point};

const MAX_ITER: usize = 200;
const START_FRACTION: f64 = 0.25;
const STOP_FRACTION: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Oscillation {
    pub beta: f64,
    pub beta_star: f64,
    /// Minimizer of the combined oscillation-plus-asymmetry objective.
    pub center: Point,
    /// Minimizer of the oscillation term alone.
    pub beta_only_center: Point,
    pub iterations: usize,
}

/// Discretized boundary integral `Σ |ν − (m − x)/|m − x||² len / √|E|`.
pub struct OscillationIntegral {
    samples: Vec<Sample>,
    sqrt_area: f64,
    guard2: f64,
}

impl OscillationIntegral {
    pub fn new(e: &GridSet) -> Result<Self> {
        let curve = extract_boundary(e)?;
        Ok(OscillationIntegral { samples: curve.normal_samples(), sqrt_area: e.area().sqrt(), guard2: e.h() * e.h() })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    /// `true` when `x` is at distance >= h from every segment midpoint.
    pub fn admissible(&self, x: Point) -> bool {
        self.samples.iter().all(|s| (s.midpoint - x).norm_sq() >= self.guard2)
    }

    /// The integral at `x`; `+∞` where the center is inadmissible.
    pub fn value(&self, x: Point) -> f64 {
        let mut total = 0.0;
        for s in &self.samples {
            let d = s.midpoint - x;
            let n2 = d.norm_sq();
            if n2 < self.guard2 {
                return f64::INFINITY;
            }
            let u = d * (1.0 / n2.sqrt());
            total += (s.normal - u).norm_sq() * s.length;
        }
        total / self.sqrt_area
    }
}

/// `β(E)` and `β*(E)` by simplex descent from the asymmetry center and the centroid.
///
/// `β` is reported as the smaller of its own search and the oscillation term at
/// the `β*` center, so `β ≤ β*` holds by construction.
pub fn oscillation_index(e: &GridSet, alpha_center: Point) -> Result<Oscillation> {
    if e.is_empty() {
        return Err(Error::EmptySet);
    }
    let integral = OscillationIntegral::new(e)?;
    let counter = OverlapCounter::new(e);
    let r_e = (e.area() / std::f64::consts::PI).sqrt();
    let step = START_FRACTION * r_e;
    let xtol = STOP_FRACTION * r_e;
    let seeds = [alpha_center, e.centroid()?];
    if !seeds.iter().any(|&x| integral.admissible(x)) {
        return Err(Error::CenterOnBoundary);
    }

    let osc = |x: Point| integral.value(x);
    let combined = |x: Point| {
        let o = integral.value(x);
        if o.is_finite() {
            let a = asymmetry_at(e, &counter, x);
            o + a * a
        } else {
            o
        }
    };

    let mut iterations = 0;
    let mut run = |f: &dyn Fn(Point) -> f64, seeds: &[Point]| {
        let mut best: Option<(Point, f64)> = None;
        for &x in seeds {
            let m = nelder_mead(f, x, step, xtol, MAX_ITER);
            iterations += m.iterations;
            if best.is_none_or(|(_, v)| m.value < v) {
                best = Some((m.x, m.value));
            }
        }
        best.expect("at least one seed")
    };

    let (star_x, star_v) = run(&combined, &seeds);
    let (beta_x, beta_v) = run(&osc, &[seeds[0], seeds[1], star_x]);
    let at_star = osc(star_x);
    let (beta_x, beta_sq) = if at_star < beta_v { (star_x, at_star) } else { (beta_x, beta_v) };
    if !star_v.is_finite() || !beta_sq.is_finite() {
        return Err(Error::CenterOnBoundary);
    }
    Ok(Oscillation {
        beta: beta_sq.sqrt(),
        beta_star: star_v.sqrt(),
        center: star_x,
        beta_only_center: beta_x,
        iterations,
    })
}
