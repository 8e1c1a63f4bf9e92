//! Floating intervals with outward rounding.
//!
//! The hardware rounds to nearest; each bound is corrected with the exact
//! rounding error (TwoSum for sums, a fused multiply-add for products) and
//! moved one ulp outward only when the rounded result is inexact. Where the
//! error term is unreliable (overflow, results near the subnormal range) both
//! bounds are pushed out unconditionally.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exact::{RatInterval, Rational};

/// Below this magnitude the fma residual may be inexact.
const TINY: f64 = 1e-290;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return if s == f64::INFINITY { f64::MAX } else { s };
    }
    if sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return if s == f64::NEG_INFINITY { f64::MIN } else { s };
    }
    if sum_err(a, b, s) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return if p == f64::INFINITY { f64::MAX } else { p };
    }
    if p.abs() < TINY {
        return if a == 0.0 || b == 0.0 {
            0.0
        } else {
            p.next_down()
        };
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return if p == f64::NEG_INFINITY { f64::MIN } else { p };
    }
    if p.abs() < TINY {
        return if a == 0.0 || b == 0.0 {
            0.0
        } else {
            p.next_up()
        };
    }
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// `q = n / 2^k` with `|n| < 2^53` and a modest `k`: exactly an f64.
fn is_short_dyadic(q: &Rational) -> bool {
    let d = q.denom();
    d.bits() <= 1000 && d.trailing_zeros() == Some(d.bits() - 1) && q.numer().bits() <= 53
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval with lo > hi: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Tightest floating enclosure of a rational, checked exactly.
    pub fn from_rational(q: &Rational) -> Self {
        if is_short_dyadic(q) {
            return Interval::point(q.to_f64().expect("short dyadic"));
        }
        let f = q.to_f64().unwrap_or(0.0);
        let exact = |x: f64| Ratio::<BigInt>::from_float(x).expect("finite");
        let (mut lo, mut hi) = (f, f);
        while exact(lo) > *q {
            lo = lo.next_down();
        }
        while exact(hi) < *q {
            hi = hi.next_up();
        }
        Interval { lo, hi }
    }

    pub fn from_rat_interval(r: &RatInterval) -> Self {
        Interval {
            lo: Self::from_rational(&r.lo).lo,
            hi: Self::from_rational(&r.hi).hi,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Whether the exact rational lies in the interval.
    pub fn contains_rational(&self, q: &Rational) -> bool {
        let exact = |x: f64| Ratio::<BigInt>::from_float(x).expect("finite");
        exact(self.lo) <= *q && *q <= exact(self.hi)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0.0
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// Range of `x^n` over the interval.
    pub fn powi(&self, n: u32) -> Interval {
        if n == 0 {
            return Interval::point(1.0);
        }
        let pow_down = |x: f64| (1..n).fold(x, |acc, _| mul_down(acc, x));
        let pow_up = |x: f64| (1..n).fold(x, |acc, _| mul_up(acc, x));
        if self.lo >= 0.0 {
            Interval {
                lo: pow_down(self.lo),
                hi: pow_up(self.hi),
            }
        } else if self.hi <= 0.0 {
            let mag = Interval {
                lo: -self.hi,
                hi: -self.lo,
            }
            .powi(n);
            if n.is_multiple_of(2) {
                mag
            } else {
                -mag
            }
        } else if n.is_multiple_of(2) {
            Interval {
                lo: 0.0,
                hi: pow_up(self.lo.abs().max(self.hi)),
            }
        } else {
            Interval {
                lo: -pow_up(-self.lo),
                hi: pow_up(self.hi),
            }
        }
    }

    /// Square root of a nonnegative interval (clamped at zero).
    pub fn sqrt(&self) -> Interval {
        let lo = self.lo.max(0.0).sqrt();
        let hi = self.hi.max(0.0).sqrt();
        Interval {
            lo: if lo > 0.0 { lo.next_down() } else { 0.0 },
            hi: hi.next_up(),
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, rhs.lo),
            hi: add_up(self.hi, rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if a >= 0.0 && c >= 0.0 {
            return Interval {
                lo: mul_down(a, c),
                hi: mul_up(b, d),
            };
        }
        let pairs = [(a, c), (a, d), (b, c), (b, d)];
        let lo = pairs
            .iter()
            .map(|&(x, y)| mul_down(x, y))
            .fold(f64::INFINITY, f64::min);
        let hi = pairs
            .iter()
            .map(|&(x, y)| mul_up(x, y))
            .fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}
