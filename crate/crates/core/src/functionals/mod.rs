//! Scalar functionals of a set: equivalent radius, concentration and
//! isoperimetric deficits, Fraenkel asymmetry, oscillation indices, perimeter
//! gap and the envelope reduction ratios.
//!
//! The dimension is fixed to n = 2: `|B_1| = π`, exponents `(n − 1)/n = 1/2`
//! and the isoperimetric constant `n |B_1|^{1/n} = 2√π`.

mod asymmetry;
mod oscillation;
mod simplex;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::boundary::{perimeter, raw_perimeter, edge_perimeter};
use crate::distance::{dilate, envelope, DilationProfile};
use crate::error::{Error, Result};
use crate::grid::{GridSet, Point};

pub use asymmetry::{asymmetry_at, fraenkel_asymmetry, Asymmetry, SearchTrace};
pub use oscillation::{oscillation_index, Oscillation, OscillationIntegral};

/// Ratios are reported only when their denominator exceeds this multiple of `tol_disc`.
pub const GUARD_FACTOR: f64 = 10.0;
/// Cap on the branch indicator `α²/δ_r` of [`reduction_check`].
pub const BRANCH_CAP: f64 = 1e6;

/// `r_E = √(|E|/π)`.
pub fn equivalent_radius(e: &GridSet) -> Result<f64> {
    if e.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok((e.area() / PI).sqrt())
}

/// Discretization slack `3 h P(E) / |E|` used by every near-zero comparison.
pub fn tol_disc(e: &GridSet) -> Result<f64> {
    Ok(3.0 * e.h() * perimeter(e)? / e.area())
}

/// How `|I_r(B_{r_E})|` is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// `π (r_E + r)²`.
    #[default]
    Analytic,
    /// `π (r_E + r)²` times the dilation bias of a rasterized disc on the same
    /// lattice, measured at the same `r`. Cancels the systematic inward shift
    /// of grid dilations, which otherwise dominates deficits below about `h`.
    GridCalibrated,
}

/// Reference volumes `|I_r(B_{r_E})|` for one set and many radii.
pub struct ReferenceVolume {
    r_e: f64,
    calibration: Option<(DilationProfile, f64)>,
}

impl ReferenceVolume {
    pub fn new(e: &GridSet, reference: Reference, r_max: f64) -> Result<Self> {
        let r_e = equivalent_radius(e)?;
        let calibration = match reference {
            Reference::Analytic => None,
            Reference::GridCalibrated => {
                let disc = reference_disc(e)?;
                let rho = (disc.area() / PI).sqrt();
                Some((DilationProfile::new(&disc, r_max)?, rho))
            }
        };
        Ok(ReferenceVolume { r_e, calibration })
    }

    pub fn volume(&self, r: f64) -> f64 {
        let exact = PI * (self.r_e + r).powi(2);
        match &self.calibration {
            None => exact,
            Some((profile, rho)) => exact * profile.area(r) / (PI * (rho + r).powi(2)),
        }
    }
}

/// The rasterized disc of radius `r_E` centered at the lattice point nearest the centroid of `e`.
pub fn reference_disc(e: &GridSet) -> Result<GridSet> {
    let r_e = equivalent_radius(e)?;
    let (i, j) = e.cell_of(e.centroid()?);
    let c = e.cell_center(i, j);
    let d = Point::new(r_e, r_e);
    GridSet::rasterize(e.h(), e.origin(), c - d, c + d, |p| (p - c).norm_sq() <= r_e * r_e)
}

/// `max{r/r_E, r_E/r} (|I_r(E)| / |I_r(B_{r_E})| − 1)` from precomputed volumes.
pub fn deficit_from_volumes(r_e: f64, r: f64, dilated: f64, reference: f64) -> f64 {
    (r / r_e).max(r_e / r) * (dilated / reference - 1.0)
}

/// `δ_r(E)` with the analytic reference volume.
pub fn concentration_deficit(e: &GridSet, r: f64) -> Result<f64> {
    concentration_deficit_with(e, r, Reference::Analytic)
}

pub fn concentration_deficit_with(e: &GridSet, r: f64, reference: Reference) -> Result<f64> {
    let r_e = equivalent_radius(e)?;
    let dilated = dilate(e, r)?.area();
    let vol = ReferenceVolume::new(e, reference, r)?.volume(r);
    Ok(deficit_from_volumes(r_e, r, dilated, vol))
}

/// Which polygon length feeds the isoperimetric deficit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerimeterKind {
    /// Smoothed marching-squares length.
    #[default]
    Corrected,
    /// Unsmoothed marching-squares length.
    Raw,
    /// Cell-edge (crack) length.
    Edges,
}

pub fn perimeter_of(e: &GridSet, kind: PerimeterKind) -> Result<f64> {
    match kind {
        PerimeterKind::Corrected => perimeter(e),
        PerimeterKind::Raw => raw_perimeter(e),
        PerimeterKind::Edges => edge_perimeter(e),
    }
}

/// `δ_iso(E) = P(E) / (2√(π |E|)) − 1`.
pub fn iso_deficit(e: &GridSet) -> Result<f64> {
    iso_deficit_with(e, PerimeterKind::Corrected)
}

pub fn iso_deficit_with(e: &GridSet, kind: PerimeterKind) -> Result<f64> {
    let p = perimeter_of(e, kind)?;
    Ok(p / (2.0 * (PI * e.area()).sqrt()) - 1.0)
}

/// `γ_E(s) = P(E + B_s) − 2π (r_E + s)`; `s = 0` uses `E` itself.
pub fn perimeter_gap(e: &GridSet, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::InvalidArgument(format!("s must be nonnegative, got {s}")));
    }
    let r_e = equivalent_radius(e)?;
    let p = if s == 0.0 { perimeter(e)? } else { perimeter(&dilate(e, s)?)? };
    Ok(p - 2.0 * PI * (r_e + s))
}

/// Asymmetry and deficit of a set and of its r-envelope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub r: f64,
    pub alpha: f64,
    pub alpha_envelope: f64,
    pub delta_r: f64,
    pub delta_r_envelope: f64,
    /// `α(E) / α(co_r E)`, when `α(co_r E)` clears the guard.
    pub alpha_ratio: Option<f64>,
    /// `δ_r(co_r E) / δ_r(E)`, when `δ_r(E)` clears the guard.
    pub delta_ratio: Option<f64>,
    /// `min(α(E)² / δ_r(E), BRANCH_CAP)`.
    pub branch: f64,
    pub tol_disc: f64,
}

pub fn reduction_check(e: &GridSet, r: f64, reference: Reference) -> Result<ReductionReport> {
    let env = envelope(e, r)?;
    let tol = tol_disc(e)?;
    let guard = GUARD_FACTOR * tol;
    let alpha = fraenkel_asymmetry(e)?.alpha;
    let alpha_env = fraenkel_asymmetry(&env)?.alpha;
    let delta = concentration_deficit_with(e, r, reference)?;
    let delta_env = concentration_deficit_with(&env, r, reference)?;
    let branch = if delta > 0.0 { (alpha * alpha / delta).min(BRANCH_CAP) } else { BRANCH_CAP };
    Ok(ReductionReport {
        r,
        alpha,
        alpha_envelope: alpha_env,
        delta_r: delta,
        delta_r_envelope: delta_env,
        alpha_ratio: (alpha_env > guard).then(|| alpha / alpha_env),
        delta_ratio: (delta > guard).then(|| delta_env / delta),
        branch,
        tol_disc: tol,
    })
}

/// Search and discretization details attached to a [`DeficitReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub area: f64,
    pub perimeter: f64,
    pub tol_disc: f64,
    pub reference: Reference,
    pub alpha_search: SearchTrace,
    pub beta_only_center: Point,
    pub beta_iterations: usize,
}

/// Every scalar functional of one set at one radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeficitReport {
    #[serde(rename = "r_E")]
    pub r_e: f64,
    pub r: f64,
    pub delta_r: f64,
    pub alpha: f64,
    pub alpha_center: Point,
    pub delta_iso: f64,
    pub beta: f64,
    pub beta_star: f64,
    pub beta_center: Point,
    pub h: f64,
    pub diagnostics: Diagnostics,
}

/// The radius-independent functionals of a set, computed once.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeFunctionals {
    pub h: f64,
    pub r_e: f64,
    pub area: f64,
    pub perimeter: f64,
    pub tol_disc: f64,
    pub delta_iso: f64,
    pub asymmetry: Asymmetry,
    pub oscillation: Oscillation,
}

impl ShapeFunctionals {
    pub fn compute(e: &GridSet) -> Result<Self> {
        let r_e = equivalent_radius(e)?;
        let area = e.area();
        let p = perimeter(e)?;
        let asymmetry = fraenkel_asymmetry(e)?;
        let oscillation = oscillation_index(e, asymmetry.center)?;
        Ok(ShapeFunctionals {
            h: e.h(),
            r_e,
            area,
            perimeter: p,
            tol_disc: 3.0 * e.h() * p / area,
            delta_iso: p / (2.0 * (PI * area).sqrt()) - 1.0,
            asymmetry,
            oscillation,
        })
    }

    pub fn report(&self, r: f64, delta_r: f64, reference: Reference) -> DeficitReport {
        DeficitReport {
            r_e: self.r_e,
            r,
            delta_r,
            alpha: self.asymmetry.alpha,
            alpha_center: self.asymmetry.center,
            delta_iso: self.delta_iso,
            beta: self.oscillation.beta,
            beta_star: self.oscillation.beta_star,
            beta_center: self.oscillation.center,
            h: self.h,
            diagnostics: Diagnostics {
                area: self.area,
                perimeter: self.perimeter,
                tol_disc: self.tol_disc,
                reference,
                alpha_search: self.asymmetry.trace.clone(),
                beta_only_center: self.oscillation.beta_only_center,
                beta_iterations: self.oscillation.iterations,
            },
        }
    }
}

/// Full report for `e` at radius `r`.
pub fn compute_report(e: &GridSet, r: f64, reference: Reference) -> Result<DeficitReport> {
    let f = ShapeFunctionals::compute(e)?;
    let delta = concentration_deficit_with(e, r, reference)?;
    Ok(f.report(r, delta, reference))
}
