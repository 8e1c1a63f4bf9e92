//! Boxes in the (w, e)-plane: floating for evaluation, exact for tiling.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::rounding::Interval;
use crate::error::{Error, Result};
use crate::exact::rational::as_string;
use crate::exact::{Rational, TowerElement};

/// Axis-aligned box with floating interval sides.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalBox {
    pub w: Interval,
    pub e: Interval,
}

impl IntervalBox {
    pub fn new(w: Interval, e: Interval) -> Self {
        IntervalBox { w, e }
    }

    pub fn point(w: f64, e: f64) -> Self {
        IntervalBox {
            w: Interval::point(w),
            e: Interval::point(e),
        }
    }
}

/// Axis-aligned box with exact rational edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactBox {
    #[serde(with = "as_string")]
    pub w_lo: Rational,
    #[serde(with = "as_string")]
    pub w_hi: Rational,
    #[serde(with = "as_string")]
    pub e_lo: Rational,
    #[serde(with = "as_string")]
    pub e_hi: Rational,
}

impl ExactBox {
    pub fn new(w_lo: Rational, w_hi: Rational, e_lo: Rational, e_hi: Rational) -> Result<Self> {
        if w_lo > w_hi || e_lo > e_hi {
            return Err(Error::InvalidArgument(format!(
                "empty box [{w_lo}, {w_hi}] x [{e_lo}, {e_hi}]"
            )));
        }
        Ok(ExactBox {
            w_lo,
            w_hi,
            e_lo,
            e_hi,
        })
    }

    pub fn width_w(&self) -> Rational {
        &self.w_hi - &self.w_lo
    }

    pub fn width_e(&self) -> Rational {
        &self.e_hi - &self.e_lo
    }

    pub fn max_side(&self) -> Rational {
        self.width_w().max(self.width_e())
    }

    /// Bisects the longer side; ties split `w`. Returns (lower, upper) halves.
    pub fn bisect(&self) -> (ExactBox, ExactBox) {
        let two = Rational::from_integer(2.into());
        if self.width_w() >= self.width_e() {
            let m = (&self.w_lo + &self.w_hi) / &two;
            (
                ExactBox {
                    w_hi: m.clone(),
                    ..self.clone()
                },
                ExactBox {
                    w_lo: m,
                    ..self.clone()
                },
            )
        } else {
            let m = (&self.e_lo + &self.e_hi) / &two;
            (
                ExactBox {
                    e_hi: m.clone(),
                    ..self.clone()
                },
                ExactBox {
                    e_lo: m,
                    ..self.clone()
                },
            )
        }
    }

    pub fn to_interval_box(&self) -> IntervalBox {
        IntervalBox {
            w: Interval {
                lo: Interval::from_rational(&self.w_lo).lo,
                hi: Interval::from_rational(&self.w_hi).hi,
            },
            e: Interval {
                lo: Interval::from_rational(&self.e_lo).lo,
                hi: Interval::from_rational(&self.e_hi).hi,
            },
        }
    }

    pub fn corners(&self) -> [(Rational, Rational); 4] {
        [
            (self.w_lo.clone(), self.e_lo.clone()),
            (self.w_lo.clone(), self.e_hi.clone()),
            (self.w_hi.clone(), self.e_lo.clone()),
            (self.w_hi.clone(), self.e_hi.clone()),
        ]
    }

    pub fn contains(&self, w: &Rational, e: &Rational) -> bool {
        &self.w_lo <= w && w <= &self.w_hi && &self.e_lo <= e && e <= &self.e_hi
    }

    /// Whether a point with tower coordinates lies in the closed box.
    pub fn contains_tower(&self, w: &TowerElement, e: &TowerElement) -> bool {
        let le = |a: &Rational, x: &TowerElement| {
            !(x - &TowerElement::from_rational(a.clone())).is_negative()
        };
        let ge = |a: &Rational, x: &TowerElement| {
            !(&TowerElement::from_rational(a.clone()) - x).is_negative()
        };
        le(&self.w_lo, w) && ge(&self.w_hi, w) && le(&self.e_lo, e) && ge(&self.e_hi, e)
    }

    pub fn area(&self) -> Rational {
        self.width_w() * self.width_e()
    }
}

impl fmt::Display for ExactBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}] x [{}, {}]",
            self.w_lo, self.w_hi, self.e_lo, self.e_hi
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn bisection_prefers_longer_side() {
        let b = ExactBox::new(int(1), int(2), int(0), int(4)).unwrap();
        let (l, u) = b.bisect();
        assert_eq!((l.e_hi.clone(), u.e_lo.clone()), (int(2), int(2)));
        let sq = ExactBox::new(int(0), int(1), int(0), int(1)).unwrap();
        let (l, _) = sq.bisect();
        assert_eq!(l.w_hi, rat(1, 2));
        assert_eq!(l.area() * int(2), sq.area());
    }

    #[test]
    fn tower_membership() {
        let b = ExactBox::new(int(1), int(2), int(1), int(2)).unwrap();
        assert!(b.contains_tower(&TowerElement::one(), &TowerElement::sqrt2()));
        assert!(b.contains_tower(&TowerElement::sqrt3(), &TowerElement::sqrt2()));
        assert!(!b.contains_tower(&TowerElement::sqrt6(), &TowerElement::one()));
        assert!(ExactBox::new(int(2), int(1), int(0), int(1)).is_err());
    }
}
