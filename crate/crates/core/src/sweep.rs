//! Corpus sweeps: every functional for every shape over a grid of radii.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance::DilationProfile;
use crate::error::{Error, Result};
use crate::format::g12;
use crate::functionals::{deficit_from_volumes, Reference, ReferenceVolume, ShapeFunctionals, GUARD_FACTOR};
use crate::shapes::{corpus, generate, Shape, ShapeSpec};

/// Radii as multiples of `r_E`, spanning bounded and large `r / r_E`.
pub const DEFAULT_R_GRID: [f64; 9] = [0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0];

pub const CSV_HEADER: &str =
    "shape_id,h,r,r_E,delta_r,alpha,alpha_cx,alpha_cy,delta_iso,beta,beta_star,ratio_alpha2_over_delta";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub shape_id: String,
    pub h: f64,
    pub r: f64,
    pub r_multiple: f64,
    #[serde(rename = "r_E")]
    pub r_e: f64,
    pub delta_r: f64,
    pub alpha: f64,
    pub alpha_cx: f64,
    pub alpha_cy: f64,
    pub delta_iso: f64,
    pub beta: f64,
    pub beta_star: f64,
    pub tol_disc: f64,
    /// `δ_r > GUARD_FACTOR · tol_disc`.
    pub guarded: bool,
    /// `α² / δ_r` on guarded rows.
    pub ratio_alpha2_over_delta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub corpus: String,
    pub corpus_version: u32,
    pub h: Option<f64>,
    pub r_grid: Vec<f64>,
    pub reference: Reference,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub empirical_C_main: Option<f64>,
    pub empirical_K_osc: Option<f64>,
    pub ellipse_slope: Option<f64>,
    pub metadata: SweepMetadata,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOptions {
    /// Overrides the spacing of every spec when set.
    pub h: Option<f64>,
    pub r_grid: Vec<f64>,
    pub reference: Reference,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { h: None, r_grid: DEFAULT_R_GRID.to_vec(), reference: Reference::Analytic }
    }
}

/// Rows for one shape, in r-grid order.
pub fn shape_rows(spec: &ShapeSpec, r_grid: &[f64], reference: Reference) -> Result<Vec<SweepRow>> {
    if r_grid.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
        return Err(Error::InvalidArgument("r-grid multiples must be positive".into()));
    }
    let e = generate(spec)?;
    let f = ShapeFunctionals::compute(&e)?;
    let r_max = r_grid.iter().fold(0.0f64, |m, &x| m.max(x)) * f.r_e;
    let profile = DilationProfile::new(&e, r_max)?;
    let refs = ReferenceVolume::new(&e, reference, r_max)?;
    let id = spec.label();
    Ok(r_grid
        .iter()
        .map(|&m| {
            let r = m * f.r_e;
            let delta = deficit_from_volumes(f.r_e, r, profile.area(r), refs.volume(r));
            let guarded = delta > GUARD_FACTOR * f.tol_disc;
            let alpha = f.asymmetry.alpha;
            SweepRow {
                shape_id: id.clone(),
                h: f.h,
                r,
                r_multiple: m,
                r_e: f.r_e,
                delta_r: delta,
                alpha,
                alpha_cx: f.asymmetry.center.x,
                alpha_cy: f.asymmetry.center.y,
                delta_iso: f.delta_iso,
                beta: f.oscillation.beta,
                beta_star: f.oscillation.beta_star,
                tol_disc: f.tol_disc,
                guarded,
                ratio_alpha2_over_delta: guarded.then(|| alpha * alpha / delta),
            }
        })
        .collect())
}

/// Sweeps a list of specs; shapes run in parallel, rows come back in input order.
pub fn sweep_specs(name: &str, version: u32, specs: &[ShapeSpec], opts: &SweepOptions) -> Result<SweepResult> {
    let specs: Vec<ShapeSpec> = specs.iter().map(|s| opts.h.map_or_else(|| s.clone(), |h| s.with_h(h))).collect();
    let per_shape = specs
        .par_iter()
        .map(|s| shape_rows(s, &opts.r_grid, opts.reference))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<SweepRow> = per_shape.into_iter().flatten().collect();
    let guarded = || rows.iter().filter(|r| r.guarded);
    let sup = |it: &mut dyn Iterator<Item = f64>| it.fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
    let empirical_c = sup(&mut guarded().filter_map(|r| r.ratio_alpha2_over_delta));
    let empirical_k = sup(&mut guarded().filter(|r| r.beta > 0.0).map(|r| r.beta_star / r.beta));
    let ellipse_slope = ellipse_slope(&specs, &rows, &opts.r_grid);
    Ok(SweepResult {
        rows,
        empirical_C_main: empirical_c,
        empirical_K_osc: empirical_k,
        ellipse_slope,
        metadata: SweepMetadata {
            corpus: name.to_string(),
            corpus_version: version,
            h: opts.h,
            r_grid: opts.r_grid.clone(),
            reference: opts.reference,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })
}

pub fn sweep(corpus_name: &str, opts: &SweepOptions) -> Result<SweepResult> {
    let c = corpus(corpus_name)?;
    sweep_specs(&c.name, c.version, &c.specs, opts)
}

/// Log-log slope of `δ_r` against `ε` over the ellipse specs, at the grid
/// radius closest to `r = r_E`. Needs at least three ellipses with `δ_r > 0`.
fn ellipse_slope(specs: &[ShapeSpec], rows: &[SweepRow], r_grid: &[f64]) -> Option<f64> {
    let k = r_grid
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1.ln()).abs().total_cmp(&(b.1.ln()).abs()))?
        .0;
    let n = r_grid.len();
    let points: Vec<(f64, f64)> = specs
        .iter()
        .enumerate()
        .filter_map(|(i, s)| match s.shape {
            Shape::Ellipse { epsilon, .. } if epsilon > 0.0 => {
                let row = &rows[i * n + k];
                (row.delta_r > 0.0).then(|| (epsilon.ln(), row.delta_r.ln()))
            }
            _ => None,
        })
        .collect();
    if points.len() < 3 {
        return None;
    }
    Some(log_slope(&points))
}

/// Least-squares slope of `y` on `x`.
pub fn log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn write_csv<W: Write>(result: &SweepResult, mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in &result.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.shape_id,
            g12(r.h),
            g12(r.r),
            g12(r.r_e),
            g12(r.delta_r),
            g12(r.alpha),
            g12(r.alpha_cx),
            g12(r.alpha_cy),
            g12(r.delta_iso),
            g12(r.beta),
            g12(r.beta_star),
            r.ratio_alpha2_over_delta.map(g12).unwrap_or_default(),
        )?;
    }
    Ok(())
}

/// The JSON summary: everything except the rows.
pub fn summary_json(result: &SweepResult) -> serde_json::Value {
    serde_json::json!({
        "empirical_C_main": result.empirical_C_main,
        "empirical_K_osc": result.empirical_K_osc,
        "ellipse_slope": result.ellipse_slope,
        "rows": result.rows.len(),
        "guarded_rows": result.rows.iter().filter(|r| r.guarded).count(),
        "metadata": result.metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Point;

    #[test]
    fn slope_of_exact_power() {
        let pts: Vec<(f64, f64)> = [0.1f64, 0.2, 0.4].iter().map(|&e| (e.ln(), (3.0 * e * e).ln())).collect();
        assert!((log_slope(&pts) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn small_sweep_is_deterministic() {
        let specs = vec![
            ShapeSpec::new(Shape::Disc { radius: 1.0, center: Point::default() }, 0.04),
            ShapeSpec::new(Shape::TwoDiscs { separation: 10.0, radius: 1.0 }, 0.04),
        ];
        let opts = SweepOptions { h: None, r_grid: vec![0.5, 20.0], reference: Reference::Analytic };
        let a = sweep_specs("test", 1, &specs, &opts).unwrap();
        assert_eq!(a.rows.len(), 4);
        assert!(!a.rows[0].guarded);
        assert!(a.rows[3].guarded);
        assert!(a.empirical_C_main.is_some());
        assert!(a.ellipse_slope.is_none());
        let (mut x, mut y) = (Vec::new(), Vec::new());
        write_csv(&a, &mut x).unwrap();
        write_csv(&sweep_specs("test", 1, &specs, &opts).unwrap(), &mut y).unwrap();
        assert_eq!(x, y);
        let text = String::from_utf8(x).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(text.lines().count(), 5);
    }
}
