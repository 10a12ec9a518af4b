//! Dense univariate polynomials with exact rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending order; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly(Vec<BigRational>);

impl RatPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        RatPoly(c)
    }

    /// Exact conversion of binary floating-point coefficients.
    pub fn from_f64(c: &[f64]) -> Option<Self> {
        c.iter().map(|&x| BigRational::from_float(x)).collect::<Option<Vec<_>>>().map(RatPoly::new)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.0.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(BigInt::from(k))).collect(),
        )
    }

    /// `∫₀¹ p`.
    pub fn integral_unit(&self) -> BigRational {
        self.0
            .iter()
            .enumerate()
            .map(|(k, c)| c / BigRational::from_integer(BigInt::from(k + 1)))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    /// Quotient and remainder of Euclidean division by a nonzero `d`.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.0.clone();
        let dd = d.degree();
        if r.len() < d.0.len() {
            return (RatPoly::new(vec![]), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] / d.lead();
            for (i, c) in d.0.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            q[k] = f;
        }
        (RatPoly::new(q), RatPoly::new(r))
    }

    pub fn monic(&self) -> RatPoly {
        let l = self.lead().clone();
        RatPoly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Same roots, each with multiplicity one.
    pub fn square_free(&self) -> RatPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }

    /// Divides out a linear factor `x - a` while it divides exactly.
    pub fn deflate_root(&self, a: &BigRational) -> RatPoly {
        let lin = RatPoly::new(vec![-a.clone(), BigRational::one()]);
        let mut p = self.clone();
        while !p.is_zero() && p.degree() > 0 && p.eval(a).is_zero() {
            p = p.div_rem(&lin).0;
        }
        p
    }

    /// The Sturm sequence `p, p', -rem(...)...`.
    pub fn sturm(&self) -> Vec<RatPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            seq.push(RatPoly::new(r.0.into_iter().map(|c| -c).collect()));
        }
        seq.pop();
        seq
    }
}

/// Sign changes of a Sturm sequence at `x`, zeros skipped.
pub fn sign_changes(seq: &[RatPoly], x: &BigRational) -> usize {
    let mut changes = 0;
    let mut prev = 0i8;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if prev != 0 && s != prev {
                changes += 1;
            }
            prev = s;
        }
    }
    changes
}
