//! Self-check suite: runs the structural invariants of every module on a
//! corpus and reports each one by name.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::perimeter;
use crate::distance::{
    dilate_with, envelope_with, exterior_ball_fraction, squared_edt, DilationProfile, Threshold,
};
use crate::error::{Error, Result};
use crate::functionals::equivalent_radius;
use crate::grid::GridSet;
use crate::shapes::{corpus, generate, Shape, ShapeSpec};
use crate::steiner::{check_polylem, polylem_constant, sample_growth};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Smoke,
    Full,
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smoke" => Ok(Level::Smoke),
            "full" => Ok(Level::Full),
            other => Err(Error::InvalidArgument(format!("unknown level `{other}` (expected smoke or full)"))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Smoke => "smoke",
            Level::Full => "full",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub level: Level,
    /// Dilation threshold used by the morphology checks; `Open` exists to
    /// demonstrate that the suite catches a broken closing.
    pub threshold: Threshold,
}

impl VerifyOptions {
    pub fn new(level: Level) -> Self {
        VerifyOptions { level, threshold: Threshold::Closed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub level: Level,
    pub results: Vec<InvariantResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.results.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect()
    }
}

struct Plan {
    h: f64,
    corpus: &'static str,
    edt_grids: usize,
    edt_max: usize,
    polynomials: usize,
    max_degree: usize,
}

fn plan(level: Level) -> Plan {
    match level {
        Level::Smoke => Plan { h: 0.02, corpus: "smoke", edt_grids: 50, edt_max: 32, polynomials: 200, max_degree: 4 },
        Level::Full => Plan { h: 0.01, corpus: "full", edt_grids: 200, edt_max: 64, polynomials: 1000, max_degree: 6 },
    }
}

/// Outcome of one invariant: pass flag and a one-line explanation.
type Check = Result<(bool, String)>;

pub fn run_verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    let p = plan(opts.level);
    let specs: Vec<ShapeSpec> = corpus(p.corpus)?.specs.iter().map(|s| s.with_h(p.h)).collect();
    let shapes: Vec<(String, GridSet)> =
        specs.iter().map(|s| Ok((s.label(), generate(s)?))).collect::<Result<_>>()?;

    let mut results = Vec::new();
    let mut run = |name: &str, f: &dyn Fn() -> Check| -> Result<()> {
        let t = Instant::now();
        let (passed, detail) = f()?;
        results.push(InvariantResult { name: name.into(), passed, detail, seconds: t.elapsed().as_secs_f64() });
        Ok(())
    };

    run("edt brute force", &|| edt_brute_force(p.edt_grids, p.edt_max))?;
    let t = opts.threshold;
    run("envelope extensivity", &|| morphology(&shapes, t, Morph::Extensive))?;
    run("closing idempotence", &|| morphology(&shapes, t, Morph::Idempotent))?;
    run("dilation of envelope", &|| morphology(&shapes, t, Morph::SameDilation))?;
    run("exterior ball", &|| exterior(&shapes, t))?;
    run("coarea consistency", &|| coarea(&shapes))?;
    run("steiner residuals", &|| steiner(&specs, p.h))?;
    run("polylem", &|| polylem(p.polynomials, p.max_degree))?;
    Ok(VerifyReport { level: opts.level, results })
}

fn brute_edt(src: &[bool], nx: usize, ny: usize) -> Vec<i64> {
    let pts: Vec<(i64, i64)> =
        (0..nx * ny).filter(|&k| src[k]).map(|k| ((k % nx) as i64, (k / nx) as i64)).collect();
    (0..nx * ny)
        .map(|k| {
            let (i, j) = ((k % nx) as i64, (k / nx) as i64);
            pts.iter().map(|&(a, b)| (a - i).pow(2) + (b - j).pow(2)).min().unwrap_or(i64::MAX)
        })
        .collect()
}

fn edt_brute_force(grids: usize, max: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for g in 0..grids {
        let nx = rng.gen_range(1..=max);
        let ny = rng.gen_range(1..=max);
        let density = rng.gen_range(0.001..0.3);
        let mut src: Vec<bool> = (0..nx * ny).map(|_| rng.gen_bool(density)).collect();
        if !src.iter().any(|&b| b) {
            let k = rng.gen_range(0..nx * ny);
            src[k] = true;
        }
        if squared_edt(&src, &[ny, nx]) != brute_edt(&src, nx, ny) {
            return Ok((false, format!("grid {g} ({nx}x{ny}) differs from brute force")));
        }
    }
    Ok((true, format!("{grids} random grids up to {max}x{max} match exactly")))
}

#[derive(Clone, Copy)]
enum Morph {
    Extensive,
    Idempotent,
    SameDilation,
}

/// Runs one cellwise morphology identity over every shape at `r ∈ {5h, r_E/5, r_E/2}`.
fn morphology(shapes: &[(String, GridSet)], threshold: Threshold, which: Morph) -> Check {
    let mut bad = Vec::new();
    let mut cases = 0;
    for (id, e) in shapes {
        let h = e.h();
        let r_e = equivalent_radius(e)?;
        for r in [5.0 * h, 0.2 * r_e, 0.5 * r_e] {
            cases += 1;
            let env = envelope_with(e, r, threshold)?;
            let holds = match which {
                Morph::Extensive => e.is_subset_of(&env)?,
                Morph::Idempotent => !env.is_empty() && envelope_with(&env, r, threshold)?.same_cells(&env)?,
                Morph::SameDilation => {
                    !env.is_empty() && dilate_with(e, r, threshold)?.same_cells(&dilate_with(&env, r, threshold)?)?
                }
            };
            if !holds {
                bad.push(format!("{id}@r={r:.4}"));
            }
        }
    }
    Ok(if bad.is_empty() {
        (true, format!("{cases} cases hold cellwise"))
    } else {
        (false, format!("{} of {cases} cases fail: {}", bad.len(), bad.join(", ")))
    })
}

/// Exterior ball fraction of `co_r(E)` for `r ∈ {r_E/5, r_E/2}`.
fn exterior(shapes: &[(String, GridSet)], threshold: Threshold) -> Check {
    let mut worst = (1.0f64, String::new());
    for (id, e) in shapes {
        let h = e.h();
        let r_e = equivalent_radius(e)?;
        for r in [0.2 * r_e, 0.5 * r_e] {
            let env = envelope_with(e, r, threshold)?;
            if env.is_empty() {
                return Ok((false, format!("{id}@r={r:.4}: empty envelope")));
            }
            let rep = exterior_ball_fraction(&env, r, 3.0 * h)?;
            if rep.passing_fraction < worst.0 {
                worst = (rep.passing_fraction, format!(" ({id}@r={r:.4})"));
            }
        }
    }
    Ok((worst.0 >= 0.99, format!("minimum passing fraction {:.4}{}", worst.0, worst.1)))
}

/// Trapezoid integral of `P(E + B_s)` over `[0, t]` against `|E + B_t| − |E|`.
pub fn coarea_error(e: &GridSet, t: f64, samples: usize) -> Result<f64> {
    let profile = DilationProfile::new(e, t)?;
    let ds = t / samples as f64;
    let mut integral = 0.0;
    let mut prev = perimeter(e)?;
    for k in 1..=samples {
        let p = perimeter(&profile.dilation(k as f64 * ds))?;
        integral += 0.5 * (prev + p) * ds;
        prev = p;
    }
    let growth = profile.area(t) - e.area();
    Ok((integral - growth).abs() / growth)
}

fn coarea(shapes: &[(String, GridSet)]) -> Check {
    let mut worst = (0.0f64, String::new());
    for (id, e) in shapes {
        let err = coarea_error(e, equivalent_radius(e)?, 20)?;
        if err > worst.0 {
            worst = (err, id.clone());
        }
    }
    Ok((worst.0 < 0.03, format!("worst relative error {:.4} ({})", worst.0, worst.1)))
}

fn steiner(specs: &[ShapeSpec], h: f64) -> Check {
    let mut convex_worst = (0.0f64, String::new());
    for s in specs.iter().filter(|s| s.is_convex()) {
        let e = generate(s)?;
        let fit = sample_growth(&e, equivalent_radius(&e)?, 20)?;
        if fit.relative_rms_residual > convex_worst.0 {
            convex_worst = (fit.relative_rms_residual, s.label());
        }
    }
    let control = generate(&ShapeSpec::new(Shape::TwoDiscs { separation: 2.5, radius: 1.0 }, h))?;
    let neg = sample_growth(&control, equivalent_radius(&control)?, 20)?.relative_rms_residual;
    Ok((
        convex_worst.0 < 0.02 && neg > 0.05,
        format!("convex worst {:.4} ({}); two discs at 2.5: {neg:.4}", convex_worst.0, convex_worst.1),
    ))
}

/// A random polynomial that is nonnegative on [0, 1] by construction: a
/// product of squared factors `(x − b)²` and powers of `(1 − x)`, with `b` on
/// a dyadic grid so the expanded coefficients are exact in `f64`.
pub fn random_nonnegative_polynomial<R: Rng>(rng: &mut R, max_degree: usize) -> Vec<f64> {
    let degree = rng.gen_range(0..=max_degree);
    let mut p = vec![rng.gen_range(1..=8) as f64];
    let mut remaining = degree;
    let mul = |p: &[f64], f: &[f64]| {
        let mut out = vec![0.0; p.len() + f.len() - 1];
        for (i, a) in p.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    };
    while remaining > 0 {
        if remaining >= 2 && rng.gen_bool(0.6) {
            let b = rng.gen_range(0..=128) as f64 / 128.0;
            p = mul(&p, &[b * b, -2.0 * b, 1.0]);
            remaining -= 2;
        } else {
            p = mul(&p, &[1.0, -1.0]);
            remaining -= 1;
        }
    }
    p
}

fn polylem(count: usize, max_degree: usize) -> Check {
    let c: Vec<f64> = (0..=max_degree).map(|n| polylem_constant(n).map(|r| r.c_value)).collect::<Result<_>>()?;
    if c[0] != 1.0 {
        return Ok((false, format!("c(0) = {}", c[0])));
    }
    if (c[1] - 0.25).abs() > 1e-6 {
        return Ok((false, format!("c(1) = {}", c[1])));
    }
    if let Some(n) = (1..c.len()).find(|&n| c[n] > c[n - 1]) {
        return Ok((false, format!("c({n}) = {} exceeds c({}) = {}", c[n], n - 1, c[n - 1])));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for k in 0..count {
        let p = random_nonnegative_polynomial(&mut rng, max_degree);
        let deg = p.len() - 1;
        if !check_polylem(&p, deg)?.holds {
            return Ok((false, format!("polynomial {k} {p:?} violates the bound")));
        }
    }
    Ok((true, format!("c(0..={max_degree}) nonincreasing, c(1) = {}, {count} random polynomials hold", c[1])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoke_passes_and_open_threshold_is_caught() {
        let report = run_verify(&VerifyOptions::new(Level::Smoke)).unwrap();
        for r in &report.results {
            eprintln!("{:<24} {} {:.2}s {}", r.name, r.passed, r.seconds, r.detail);
        }
        assert!(report.passed(), "{:?}", report.failures());
        let broken = VerifyOptions { level: Level::Smoke, threshold: Threshold::Open };
        let report = run_verify(&broken).unwrap();
        for r in &report.results {
            eprintln!("{:<24} {} {}", r.name, r.passed, r.detail);
        }
        assert!(!report.passed());
    }

    #[test]
    fn levels_parse() {
        assert_eq!("smoke".parse::<Level>().unwrap(), Level::Smoke);
        assert_eq!("full".parse::<Level>().unwrap(), Level::Full);
        assert!("quick".parse::<Level>().is_err());
    }

    #[test]
    fn generated_polynomials_are_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let p = random_nonnegative_polynomial(&mut rng, 6);
            assert!(p.len() <= 7);
            for i in 0..=100 {
                let x = i as f64 / 100.0;
                let v = p.iter().rev().fold(0.0, |a, &c| a * x + c);
                assert!(v >= -1e-12, "{p:?} at {x}");
            }
        }
    }
}
