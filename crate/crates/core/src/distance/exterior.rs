//! Exterior ball test: can a ball of radius `r` touch each boundary point from outside?

use serde::{Deserialize, Serialize};

use super::{edt, envelope};
use crate::boundary::extract_boundary;
use crate::error::{Error, Result};
use crate::grid::{GridSet, Point};

/// Half-width of the cone of directions searched around each estimated normal.
const CONE_DEG: f64 = 30.0;
const STEP_DEG: f64 = 3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExteriorBallReport {
    pub vertices: usize,
    pub passing: usize,
    pub passing_fraction: f64,
    /// Largest `r - dist(y + r u, E)` over vertices, for the best direction `u` at each.
    pub worst_deficit: f64,
}

/// Exterior ball condition on an r-convex set.
///
/// Fails with [`Error::NotRConvex`] unless `e` equals its r-envelope cellwise.
pub fn exterior_ball_check(e: &GridSet, r: f64, tol: f64) -> Result<ExteriorBallReport> {
    let env = envelope(e, r)?;
    if !env.same_cells(e)? {
        return Err(Error::NotRConvex(r));
    }
    exterior_ball_fraction(e, r, tol)
}

/// The same test without the r-convexity precondition.
///
/// Each boundary vertex `y` passes if some direction `u` within 30° of the
/// estimated outward normal gives `dist(y + r u, E) >= r - tol`.
pub fn exterior_ball_fraction(e: &GridSet, r: f64, tol: f64) -> Result<ExteriorBallReport> {
    if !(r > 0.0 && tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("need r > 0 and tol >= 0 (r = {r}, tol = {tol})")));
    }
    let curve = extract_boundary(e)?;
    let pad = (r / e.h()).ceil() as usize + 2;
    let field = edt(&e.padded(pad))?;
    let steps = (CONE_DEG / STEP_DEG).round() as i32;
    let verts = curve.vertex_normals();
    let mut passing = 0;
    let mut worst = f64::NEG_INFINITY;
    for &(y, nu) in &verts {
        let mut best = f64::NEG_INFINITY;
        for k in -steps..=steps {
            let (s, c) = (k as f64 * STEP_DEG).to_radians().sin_cos();
            let u = Point::new(c * nu.x - s * nu.y, s * nu.x + c * nu.y);
            let d = field.distance_at(y + u * r).unwrap_or(f64::INFINITY);
            best = best.max(d);
        }
        let deficit = r - best;
        if deficit <= tol {
            passing += 1;
        }
        worst = worst.max(deficit);
    }
    Ok(ExteriorBallReport {
        vertices: verts.len(),
        passing,
        passing_fraction: passing as f64 / verts.len() as f64,
        worst_deficit: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_passes_everywhere() {
        let h = 0.01;
        let e = GridSet::rasterize(h, Point::default(), Point::new(-1.0, -1.0), Point::new(1.0, 1.0), |p| {
            p.norm() <= 1.0
        })
        .unwrap();
        for r in [0.1, 0.5, 2.0] {
            let rep = exterior_ball_check(&e, r, 3.0 * h).unwrap();
            assert_eq!(rep.passing_fraction, 1.0, "r = {r}: {rep:?}");
        }
    }

    #[test]
    fn plus_sign_fails_at_reentrant_corners() {
        let h = 0.02;
        let arm = 0.5;
        let plus = GridSet::rasterize(h, Point::default(), Point::new(-1.5, -1.5), Point::new(1.5, 1.5), |p| {
            (p.x.abs() <= arm && p.y.abs() <= 1.5) || (p.y.abs() <= arm && p.x.abs() <= 1.5)
        })
        .unwrap();
        let rep = exterior_ball_fraction(&plus, 0.3, 3.0 * h).unwrap();
        assert!(rep.passing_fraction < 1.0);
        assert!(rep.worst_deficit > 3.0 * h);
        assert!(matches!(exterior_ball_check(&plus, 0.3, 3.0 * h), Err(Error::NotRConvex(_))));
        let env = envelope(&plus, 0.3).unwrap();
        let fixed = exterior_ball_check(&env, 0.3, 3.0 * h).unwrap();
        assert!(fixed.passing_fraction >= 0.99, "{fixed:?}");
    }
}
