//! Perimeter growth under dilation, Steiner polynomial fits, and the
//! polynomial-integral constant used for large radii.

mod poly;
mod polylem;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::boundary::perimeter;
use crate::distance::DilationProfile;
use crate::error::{Error, Result};
use crate::functionals::{
    deficit_from_volumes, equivalent_radius, fraenkel_asymmetry, tol_disc, Reference, ReferenceVolume, GUARD_FACTOR,
};
use crate::grid::GridSet;

pub use poly::{sign_changes, RatPoly};
pub use polylem::{
    check_polylem, default_divisions, polylem_constant, polylem_constant_with, polylem_objective, PolyLemCheck,
    PolyLemResult, PolyLemTrace, MAX_DEGREE, RESOLUTION,
};

/// Degree of the growth polynomial in the plane (`n − 1`).
pub const STEINER_DEGREE: usize = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteinerFit {
    pub s_samples: Vec<f64>,
    pub perimeters: Vec<f64>,
    /// `a₀ + a₁ s + …`, ascending.
    pub coefficients: Vec<f64>,
    /// RMS of the fit residual over the standard deviation of the samples.
    pub relative_rms_residual: f64,
    pub rms_residual: f64,
    pub degree_used: usize,
}

impl SteinerFit {
    pub fn eval(&self, s: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &a| acc * s + a)
    }
}

/// Least-squares polynomial of degree `degree` through `(x, y)`.
///
/// Solved through the normal equations on `x` rescaled to `[-1, 1]`, which is
/// well conditioned for the low degrees used here.
pub fn fit_polynomial(x: &[f64], y: &[f64], degree: usize) -> Result<Vec<f64>> {
    if x.len() != y.len() || x.len() <= degree {
        return Err(Error::InvalidArgument("need more samples than the degree".into()));
    }
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let mid = 0.5 * (lo + hi);
    let half = if hi > lo { 0.5 * (hi - lo) } else { 1.0 };
    let m = degree + 1;
    let mut a = vec![vec![0.0; m + 1]; m];
    for (&xi, &yi) in x.iter().zip(y) {
        let t = (xi - mid) / half;
        let pw: Vec<f64> = (0..m).map(|k| t.powi(k as i32)).collect();
        for r in 0..m {
            for c in 0..m {
                a[r][c] += pw[r] * pw[c];
            }
            a[r][m] += pw[r] * yi;
        }
    }
    // Gaussian elimination with partial pivoting
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        if a[col][col].abs() < 1e-300 {
            return Err(Error::InvalidArgument("degenerate sample abscissae".into()));
        }
        for r in 0..m {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=m {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let u: Vec<f64> = (0..m).map(|k| a[k][m] / a[k][k]).collect();
    // expand Σ u_k ((s − mid)/half)^k into powers of s
    let mut out = vec![0.0; m];
    for (k, &uk) in u.iter().enumerate() {
        for j in 0..=k {
            let binom = (0..j).fold(1.0, |b, i| b * (k - i) as f64 / (i + 1) as f64);
            out[j] += uk * binom * (-mid).powi((k - j) as i32) / half.powi(k as i32);
        }
    }
    Ok(out)
}

/// Samples `P(E + B_s)` at `s_i = i s_max / count`, `i = 1..=count`, and fits a line.
pub fn sample_growth(e: &GridSet, s_max: f64, count: usize) -> Result<SteinerFit> {
    if count < 4 {
        return Err(Error::InvalidArgument(format!("need at least 4 samples, got {count}")));
    }
    if !(s_max > 0.0 && s_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("s_max must be positive, got {s_max}")));
    }
    let profile = DilationProfile::new(e, s_max)?;
    let s: Vec<f64> = (1..=count).map(|i| s_max * i as f64 / count as f64).collect();
    let p = s.iter().map(|&si| perimeter(&profile.dilation(si))).collect::<Result<Vec<f64>>>()?;
    let degree = STEINER_DEGREE.min(count - 1);
    let coefficients = fit_polynomial(&s, &p, degree)?;
    let eval = |x: f64| coefficients.iter().rev().fold(0.0, |acc, &a| acc * x + a);
    let n = count as f64;
    let rms = (s.iter().zip(&p).map(|(&x, &y)| (y - eval(x)).powi(2)).sum::<f64>() / n).sqrt();
    let mean = p.iter().sum::<f64>() / n;
    let std = (p.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / n).sqrt();
    Ok(SteinerFit {
        s_samples: s,
        perimeters: p,
        coefficients,
        relative_rms_residual: if std > 0.0 { rms / std } else { 0.0 },
        rms_residual: rms,
        degree_used: degree,
    })
}

/// Both links of the large-radius chain for a set with `r_E = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LargeRChain {
    pub r: f64,
    pub alpha: f64,
    /// `|E + B_1| − |B_2|`.
    pub lhs1: f64,
    /// `α(E)²`.
    pub rhs1: f64,
    /// `δ_r(E)`.
    pub lhs2: f64,
    /// `r/(1 + r) α(E)²`.
    pub rhs2: f64,
    /// `lhs1 / rhs1`, when both sides clear the deficit guard.
    pub ratio1: Option<f64>,
    /// `lhs2 / rhs2`, when both sides clear the deficit guard.
    pub ratio2: Option<f64>,
}

/// Tolerated relative deviation of `r_E` from 1.
pub const NORMALIZATION_TOL: f64 = 0.02;

pub fn large_r_chain(e: &GridSet, r: f64, reference: Reference) -> Result<LargeRChain> {
    let r_e = equivalent_radius(e)?;
    if (r_e - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(r_e));
    }
    if !(r >= 2.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("r must be at least 2, got {r}")));
    }
    let profile = DilationProfile::new(e, r)?;
    let refs = ReferenceVolume::new(e, reference, r)?;
    let alpha = fraenkel_asymmetry(e)?.alpha;
    let guard = GUARD_FACTOR * tol_disc(e)?;
    // |B_2| is the r_E = 1 reference volume at radius 1
    let lhs1 = profile.area(1.0) - refs.volume(1.0) * (4.0 * PI) / (PI * (r_e + 1.0).powi(2));
    let rhs1 = alpha * alpha;
    let lhs2 = deficit_from_volumes(r_e, r, profile.area(r), refs.volume(r));
    let rhs2 = r / (1.0 + r) * rhs1;
    let guarded = lhs2 > guard && rhs1 > 0.0;
    Ok(LargeRChain {
        r,
        alpha,
        lhs1,
        rhs1,
        lhs2,
        rhs2,
        ratio1: guarded.then(|| lhs1 / rhs1),
        ratio2: guarded.then(|| lhs2 / rhs2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Point;

    #[test]
    fn fit_recovers_exact_polynomials() {
        let x: Vec<f64> = (0..10).map(|i| 0.3 + i as f64 * 0.7).collect();
        let y: Vec<f64> = x.iter().map(|&t| 1.5 - 2.0 * t + 0.25 * t * t).collect();
        let c = fit_polynomial(&x, &y, 2).unwrap();
        assert!((c[0] - 1.5).abs() < 1e-9 && (c[1] + 2.0).abs() < 1e-9 && (c[2] - 0.25).abs() < 1e-9, "{c:?}");
        assert!(fit_polynomial(&x[..2], &y[..2], 2).is_err());
    }

    #[test]
    fn disc_growth_is_linear() {
        let h = 0.01;
        let e = GridSet::rasterize(h, Point::default(), Point::new(-1.0, -1.0), Point::new(1.0, 1.0), |p| {
            p.norm() <= 1.0
        })
        .unwrap();
        let f = sample_growth(&e, 1.0, 8).unwrap();
        assert_eq!(f.degree_used, 1);
        assert_eq!(f.coefficients.len(), 2);
        let two_pi = 2.0 * PI;
        assert!((f.coefficients[0] / two_pi - 1.0).abs() < 0.02, "{f:?}");
        assert!((f.coefficients[1] / two_pi - 1.0).abs() < 0.02, "{f:?}");
        assert!(f.relative_rms_residual < 0.02);
        assert!(sample_growth(&e, 1.0, 3).is_err());
    }

    #[test]
    fn chain_requires_normalization() {
        let e = GridSet::rasterize(0.02, Point::default(), Point::new(-2.0, -2.0), Point::new(2.0, 2.0), |p| {
            p.norm() <= 2.0
        })
        .unwrap();
        assert!(matches!(large_r_chain(&e, 5.0, Reference::Analytic), Err(Error::NotNormalized(_))));
    }
}
