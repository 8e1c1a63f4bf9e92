//! Rational-endpoint enclosures, used for high-precision bounds on algebraic
//! constants (fourth roots, square roots of tower elements) and as the
//! independent check on exact sign decisions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{root_lower, root_upper, to_decimal, Rational};
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatInterval {
    #[serde(with = "crate::exact::rational::as_string")]
    pub lo: Rational,
    #[serde(with = "crate::exact::rational::as_string")]
    pub hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "RatInterval with lo > hi");
        RatInterval { lo, hi }
    }

    pub fn point(q: Rational) -> Self {
        RatInterval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Enclosure of the principal n-th root; requires `lo >= 0`.
    pub fn root(&self, n: u32, bits: u32) -> Result<Self> {
        if self.lo.is_negative() {
            return Err(Error::InvalidArgument(
                "root of an interval with negative part".into(),
            ));
        }
        Ok(RatInterval {
            lo: root_lower(&self.lo, n, bits),
            hi: root_upper(&self.hi, n, bits),
        })
    }

    pub fn sqrt(&self, bits: u32) -> Result<Self> {
        self.root(2, bits)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatInterval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = RatInterval::point(Rational::from_integer(1.into()));
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64_mid(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            to_decimal(&self.lo, 12),
            to_decimal(&self.hi, 12)
        )
    }
}

impl Add for &RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Neg for &RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Mul for &RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: &RatInterval) -> RatInterval {
        let c = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = c.iter().min().cloned().unwrap_or_else(Rational::zero);
        let hi = c.iter().max().cloned().unwrap_or_else(Rational::zero);
        RatInterval { lo, hi }
    }
}

impl Mul<&Rational> for &RatInterval {
    type Output = RatInterval;
    fn mul(self, k: &Rational) -> RatInterval {
        self * &RatInterval::point(k.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn arithmetic_encloses() {
        let a = RatInterval::new(rat(-1, 2), int(2));
        let b = RatInterval::new(int(-3), int(1));
        let p = &a * &b;
        assert_eq!(p, RatInterval::new(int(-6), int(2)));
        assert_eq!(&a - &b, RatInterval::new(rat(-3, 2), int(5)));
        assert!(b.recip().is_err());
    }

    #[test]
    fn fourth_root_of_two() {
        let q = RatInterval::point(int(2)).root(4, 64).unwrap();
        assert!(q.width() <= crate::exact::rational::pow2(-63));
        assert!((q.to_f64_mid() - 2f64.powf(0.25)).abs() < 1e-15);
    }
}
