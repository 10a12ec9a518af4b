//! The constant in `∫₀¹ p ≥ c p(0)`, realized as `min f(b₁, …, b_N)` with
//! `f(b) = ∫₀¹ ∏ |x − b_i| dx`.
//!
//! Candidate points are restricted to the lattice `k / RESOLUTION`. On such
//! points `f` is a rational number with denominator dividing
//! `lcm(1..=N+1) · RESOLUTION^{N+1}`, so every comparison is done on exact
//! `i128` numerators. The minimum is located by a grid scan over sorted tuples
//! followed by a coordinate pattern search down to single lattice steps.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::poly::{sign_changes, RatPoly};
use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 6;
/// Lattice resolution of the final descent (stride `1/RESOLUTION`).
pub const RESOLUTION: i64 = 20_000;
/// Grid stride `1/DEFAULT_DIVISIONS` for small degrees.
pub const DEFAULT_DIVISIONS: usize = 200;
/// Points of the f64 pre-scan in [`check_polylem`].
const SCAN_POINTS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyLemResult {
    #[serde(rename = "N")]
    pub n: usize,
    pub c_value: f64,
    /// `c_value` as an exact reduced fraction.
    pub c_exact: String,
    pub minimizer: Vec<f64>,
    pub trace: PolyLemTrace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyLemTrace {
    pub grid_divisions: usize,
    pub grid_evaluations: u64,
    pub descent_evaluations: u64,
    pub descent_resolution: f64,
}

/// Grid divisions per coordinate used by default for degree `n`.
///
/// Stride 1/200 for `n ≤ 3`; coarser above so that the number of sorted
/// tuples stays near two million.
pub fn default_divisions(n: usize) -> usize {
    match n {
        0..=3 => DEFAULT_DIVISIONS,
        4 => 70,
        5 => 35,
        _ => 22,
    }
}

fn lcm_upto(n: usize) -> i128 {
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (1..=n as i128).fold(1, |l, k| l / gcd(l, k) * k)
}

/// Exact evaluator of `L · D^{N+1} · f(k / D)` for sorted integer `k`.
struct Evaluator {
    n: usize,
    /// `L / (j + 1)` for `j = 0..=N`.
    weights: Vec<i128>,
    denominator: BigInt,
}

impl Evaluator {
    fn new(n: usize) -> Self {
        let l = lcm_upto(n + 1);
        let weights = (0..=n).map(|j| l / (j as i128 + 1)).collect();
        let denominator = BigInt::from(l) * BigInt::from(RESOLUTION).pow(n as u32 + 1);
        Evaluator { n, weights, denominator }
    }

    fn numerator(&self, k: &[i64]) -> i128 {
        debug_assert!(k.windows(2).all(|w| w[0] <= w[1]));
        // coefficients of ∏ (y − k_i), ascending
        let mut c = [0i128; MAX_DEGREE + 1];
        c[0] = 1;
        for (deg, &ki) in k.iter().enumerate() {
            for j in (0..=deg + 1).rev() {
                let lower = if j > 0 { c[j - 1] } else { 0 };
                c[j] = lower - ki as i128 * c[j];
            }
        }
        let integral = |a: i64, b: i64| -> i128 {
            if a == b {
                return 0;
            }
            let (a, b) = (a as i128, b as i128);
            let (mut pa, mut pb) = (a, b);
            let mut s = 0i128;
            for j in 0..=self.n {
                s += c[j] * self.weights[j] * (pb - pa);
                pa *= a;
                pb *= b;
            }
            s
        };
        let mut total = 0i128;
        let mut left = 0i64;
        for m in 0..=self.n {
            let right = if m < self.n { k[m] } else { RESOLUTION };
            let piece = integral(left, right);
            // N − m roots lie to the right of this piece
            total += if (self.n - m).is_multiple_of(2) { piece } else { -piece };
            left = right;
        }
        total
    }

    fn exact(&self, num: i128) -> BigRational {
        BigRational::new(BigInt::from(num), self.denominator.clone())
    }
}

fn sorted_tuples(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for a in start..=m {
            cur.push(a);
            rec(n, m, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, m, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

/// `c(N)` with the default grid.
pub fn polylem_constant(n: usize) -> Result<PolyLemResult> {
    static CACHE: [OnceLock<PolyLemResult>; MAX_DEGREE + 1] = [const { OnceLock::new() }; MAX_DEGREE + 1];
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(n, MAX_DEGREE));
    }
    Ok(CACHE[n].get_or_init(|| search(n, default_divisions(n))).clone())
}

/// `c(N)` with an explicit number of grid divisions per coordinate.
pub fn polylem_constant_with(n: usize, divisions: usize) -> Result<PolyLemResult> {
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(n, MAX_DEGREE));
    }
    if divisions == 0 {
        return Err(Error::InvalidArgument("grid divisions must be positive".into()));
    }
    Ok(search(n, divisions))
}

fn search(n: usize, divisions: usize) -> PolyLemResult {
    let ev = Evaluator::new(n);
    let to_k = |a: usize| ((a as i128 * RESOLUTION as i128 + divisions as i128 / 2) / divisions as i128) as i64;
    let better = |a: &(i128, Vec<i64>), b: &(i128, Vec<i64>)| if (b.0, &b.1) < (a.0, &a.1) { b.clone() } else { a.clone() };

    // first coordinate in parallel, the rest enumerated serially
    let (grid_best, grid_evaluations) = if n == 0 {
        ((ev.numerator(&[]), vec![]), 1u64)
    } else {
        let heads: Vec<usize> = (0..=divisions).collect();
        let parts: Vec<((i128, Vec<i64>), u64)> = heads
            .par_iter()
            .map(|&a0| {
                let mut best: Option<(i128, Vec<i64>)> = None;
                let mut count = 0u64;
                for tail in sorted_tuples(n - 1, divisions - a0) {
                    let k: Vec<i64> = std::iter::once(a0).chain(tail.iter().map(|&t| t + a0)).map(to_k).collect();
                    let cand = (ev.numerator(&k), k);
                    count += 1;
                    best = Some(match best {
                        None => cand,
                        Some(b) => better(&b, &cand),
                    });
                }
                (best.expect("nonempty"), count)
            })
            .collect();
        let count = parts.iter().map(|p| p.1).sum();
        let best = parts.into_iter().map(|p| p.0).reduce(|a, b| better(&a, &b)).expect("nonempty");
        (best, count)
    };

    let (mut best_num, mut best_k) = grid_best;
    let mut descent_evaluations = 0u64;
    let mut step = (RESOLUTION as usize).div_ceil(divisions) as i64;
    if n > 0 {
        loop {
            let mut improved = true;
            while improved {
                improved = false;
                for i in 0..n {
                    for delta in [-step, step] {
                        let mut k = best_k.clone();
                        k[i] = (k[i] + delta).clamp(0, RESOLUTION);
                        k.sort_unstable();
                        let v = ev.numerator(&k);
                        descent_evaluations += 1;
                        if v < best_num {
                            best_num = v;
                            best_k = k;
                            improved = true;
                        }
                    }
                }
            }
            if step == 1 {
                break;
            }
            step = (step + 1) / 2;
        }
    }

    let exact = ev.exact(best_num);
    PolyLemResult {
        n,
        c_value: exact.to_f64().expect("finite"),
        c_exact: format!("{}/{}", exact.numer(), exact.denom()),
        minimizer: best_k.iter().map(|&k| k as f64 / RESOLUTION as f64).collect(),
        trace: PolyLemTrace {
            grid_divisions: divisions,
            grid_evaluations,
            descent_evaluations,
            descent_resolution: 1.0 / RESOLUTION as f64,
        },
    }
}

/// `f(b)` evaluated exactly at a lattice point `b = k / RESOLUTION`.
pub fn polylem_objective(k: &[i64]) -> Result<BigRational> {
    if k.len() > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(k.len(), MAX_DEGREE));
    }
    if k.iter().any(|&x| !(0..=RESOLUTION).contains(&x)) {
        return Err(Error::InvalidArgument("lattice points must lie in [0, RESOLUTION]".into()));
    }
    let mut k = k.to_vec();
    k.sort_unstable();
    let ev = Evaluator::new(k.len());
    Ok(ev.exact(ev.numerator(&k)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyLemCheck {
    pub holds: bool,
    pub integral: f64,
    pub integral_exact: String,
    pub p0: f64,
    pub constant: f64,
}

/// Checks `∫₀¹ p ≥ c(N) p(0)` for a polynomial given by ascending coefficients.
///
/// The coefficients are taken as exact binary rationals. Nonnegativity on
/// `[0, 1]` is screened on a uniform grid in floating point and then decided
/// exactly by isolating the roots of the square-free part.
pub fn check_polylem(coeffs: &[f64], n_bound: usize) -> Result<PolyLemCheck> {
    let p = RatPoly::from_f64(coeffs).ok_or_else(|| Error::InvalidArgument("coefficients must be finite".into()))?;
    if p.degree() > n_bound {
        return Err(Error::InvalidArgument(format!("degree {} exceeds bound {n_bound}", p.degree())));
    }
    let c = polylem_constant(n_bound)?;
    let scale = coeffs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let horner = |x: f64| coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a);
    let clearly_negative =
        (0..=SCAN_POINTS).any(|i| horner(i as f64 / SCAN_POINTS as f64) < -1e-9 * scale.max(f64::MIN_POSITIVE));
    if clearly_negative || !nonnegative_on_unit(&p) {
        return Err(Error::NotNonnegative);
    }
    let integral = p.integral_unit();
    let p0 = p.coeffs().first().cloned().unwrap_or_else(BigRational::zero);
    let c_exact = {
        let (num, den) = c.c_exact.split_once('/').expect("fraction");
        BigRational::new(num.parse().expect("integer"), den.parse().expect("integer"))
    };
    Ok(PolyLemCheck {
        holds: integral >= c_exact * &p0,
        integral: integral.to_f64().unwrap_or(f64::NAN),
        integral_exact: format!("{}/{}", integral.numer(), integral.denom()),
        p0: p0.to_f64().unwrap_or(f64::NAN),
        constant: c.c_value,
    })
}

/// Exact test of `p ≥ 0` on `[0, 1]`.
///
/// The roots of the square-free part inside `(0, 1)` are isolated by Sturm
/// bisection. A root-free interval is checked at its midpoint; an interval
/// with one root is checked at both endpoints, which lie on either side of the
/// root. `p` may vanish at 0 or 1, so such intervals are split until the
/// endpoint side is root-free.
fn nonnegative_on_unit(p: &RatPoly) -> bool {
    if p.is_zero() {
        return true;
    }
    let zero = BigRational::zero();
    let one = BigRational::from_integer(1.into());
    let two = BigRational::from_integer(2.into());
    if p.eval(&zero).is_negative() || p.eval(&one).is_negative() {
        return false;
    }
    let q = p.square_free().deflate_root(&zero).deflate_root(&one);
    if q.degree() == 0 {
        return p.eval(&(&one / &two)).is_positive();
    }
    let sturm = q.sturm();
    let mut stack = vec![(zero, one)];
    while let Some((a, b)) = stack.pop() {
        let roots = sign_changes(&sturm, &a) - sign_changes(&sturm, &b);
        if roots == 0 {
            if !p.eval(&((&a + &b) / &two)).is_positive() {
                return false;
            }
            continue;
        }
        let (pa, pb) = (p.eval(&a), p.eval(&b));
        if roots == 1 && !pa.is_zero() && !pb.is_zero() {
            if !(pa.is_positive() && pb.is_positive()) {
                return false;
            }
            continue;
        }
        let width = &b - &a;
        let mut m = &a + &width / &two;
        let mut t = 3;
        while q.eval(&m).is_zero() {
            m = &a + &width / BigRational::from_integer(t.into());
            t += 1;
        }
        stack.push((m.clone(), b));
        stack.push((a, m));
    }
    true
}
