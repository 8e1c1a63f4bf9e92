//! Real-root isolation by Sturm sequences over Q.

use serde::{Deserialize, Serialize};

use num_traits::Zero;

use super::univariate::{signum, UnivariatePolynomial};
use crate::error::{Error, Result};
use crate::exact::{RatInterval, Rational};

/// Sturm chain `p, p', -rem(p, p'), ...` of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<UnivariatePolynomial>,
}

impl SturmSequence {
    pub fn new(p: &UnivariatePolynomial) -> Self {
        let mut chain = vec![p.clone()];
        let mut next = p.derivative();
        while !next.is_zero() {
            let rem = chain
                .last()
                .expect("nonempty")
                .rem(&next)
                .expect("nonzero divisor");
            chain.push(next);
            next = -&rem;
        }
        SturmSequence { chain }
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Sign variations at `x`, zeros dropped.
    pub fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for q in &self.chain {
            let s = signum(&q.eval(x));
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct roots in the half-open interval `(a, b]`.
    pub fn count_half_open(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }

    /// Number of distinct roots in the open interval `(a, b)`.
    pub fn count_open(&self, a: &Rational, b: &Rational) -> usize {
        let at_b = usize::from(self.chain[0].eval(b).is_zero());
        self.count_half_open(a, b) - at_b
    }
}

/// Open interval `(lo, hi)` holding exactly one simple root of `polynomial`,
/// with nonzero values of opposite sign at both endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatingInterval {
    #[serde(with = "crate::exact::rational::as_string")]
    pub lo: Rational,
    #[serde(with = "crate::exact::rational::as_string")]
    pub hi: Rational,
    pub polynomial: UnivariatePolynomial,
}

impl IsolatingInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn as_rat_interval(&self) -> RatInterval {
        RatInterval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn midpoint_f64(&self) -> f64 {
        self.as_rat_interval().to_f64_mid()
    }

    /// Re-checks the isolation claim from scratch: sign change at the
    /// endpoints and a Sturm count of exactly one.
    pub fn verify(&self) -> bool {
        let Ok(q) = self.polynomial.square_free() else {
            return false;
        };
        let (a, b) = (q.eval(&self.lo), q.eval(&self.hi));
        signum(&a) * signum(&b) == -1 && SturmSequence::new(&q).count_open(&self.lo, &self.hi) == 1
    }

    /// Bisects until the width is at most `precision`.
    pub fn refine(&self, precision: &Rational) -> Self {
        let q = self
            .polynomial
            .square_free()
            .expect("isolating interval of a nonzero polynomial");
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        let s_lo = signum(&q.eval(&lo));
        while &(&hi - &lo) > precision {
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            let s = signum(&q.eval(&mid));
            if s == 0 {
                // exact rational root: tighten around it symmetrically
                let quarter = (&hi - &lo) / Rational::from_integer(4.into());
                lo = &mid - &quarter;
                hi = &mid + &quarter;
                continue;
            }
            if s == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        IsolatingInterval {
            lo,
            hi,
            polynomial: self.polynomial.clone(),
        }
    }
}

/// Isolates every real root of `p` in the open interval `(lo, hi)` into
/// disjoint intervals of width at most `precision`, in increasing order.
///
/// `p` is made square-free first; the Sturm count of the reduced polynomial
/// certifies that no root is missed.
pub fn isolate_real_roots(
    p: &UnivariatePolynomial,
    lo: &Rational,
    hi: &Rational,
    precision: &Rational,
) -> Result<Vec<IsolatingInterval>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(Error::InvalidArgument(
            "empty range for root isolation".into(),
        ));
    }
    if *precision <= Rational::zero() {
        return Err(Error::InvalidArgument("precision must be positive".into()));
    }
    let q = p.square_free()?;
    let sturm = SturmSequence::new(&q);
    let total = sturm.count_open(lo, hi);
    let mut out = Vec::with_capacity(total);
    if total == 0 {
        return Ok(out);
    }
    // move endpoints off any root they sit on without skipping interior roots
    let a = nudge_inward(&q, &sturm, lo, hi, true);
    let b = nudge_inward(&q, &sturm, hi, &a, false);
    debug_assert_eq!(sturm.count_open(&a, &b), total);
    split_until_isolated(&q, &sturm, a, b, total, precision, &mut |lo, hi| {
        out.push(IsolatingInterval {
            lo,
            hi,
            polynomial: p.clone(),
        })
    });
    Ok(out)
}

fn nudge_inward(
    q: &UnivariatePolynomial,
    sturm: &SturmSequence,
    end: &Rational,
    other: &Rational,
    is_lower: bool,
) -> Rational {
    if !q.eval(end).is_zero() {
        return end.clone();
    }
    let mut step = (other - end) / Rational::from_integer(2.into());
    loop {
        let cand = end + &step;
        let clear = if is_lower {
            sturm.count_half_open(end, &cand) == 0
        } else {
            sturm.count_open(&cand, end) == 0
        };
        if clear && !q.eval(&cand).is_zero() {
            return cand;
        }
        step /= Rational::from_integer(2.into());
    }
}

fn split_point(q: &UnivariatePolynomial, a: &Rational, b: &Rational) -> Rational {
    let width = b - a;
    let mut frac = Rational::new(1.into(), 2.into());
    let mut k = 2u32;
    loop {
        let m = a + &width * &frac;
        if !q.eval(&m).is_zero() {
            return m;
        }
        frac = Rational::new(1.into(), 2.into())
            + Rational::new(1.into(), num_bigint::BigInt::from(1u64 << k.min(62)));
        k += 1;
    }
}

fn split_until_isolated(
    q: &UnivariatePolynomial,
    sturm: &SturmSequence,
    a: Rational,
    b: Rational,
    n: usize,
    precision: &Rational,
    emit: &mut dyn FnMut(Rational, Rational),
) {
    if n == 0 {
        return;
    }
    if n == 1 && &(&b - &a) <= precision {
        emit(a, b);
        return;
    }
    let m = split_point(q, &a, &b);
    let left = sturm.count_open(&a, &m);
    split_until_isolated(q, sturm, a, m.clone(), left, precision, emit);
    split_until_isolated(q, sturm, m, b, n - left, precision, emit);
}
