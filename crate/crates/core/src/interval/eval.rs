//! Interval evaluation of bivariate polynomials over boxes.

use serde::{Deserialize, Serialize};

use super::boxes::IntervalBox;
use super::rounding::Interval;
use crate::poly::BivariatePolynomial;

/// A polynomial prepared for repeated nested-Horner evaluation.
///
/// With `gw`, `ge` the gcds of the exponents, the polynomial is a polynomial
/// in `X = w^gw` and `Y = e^ge`; evaluating in those variables keeps even
/// polynomials from paying twice for the dependency of `w` and `-w`.
#[derive(Clone, Debug)]
pub struct CompiledPolynomial {
    gw: u32,
    ge: u32,
    /// `rows[j][i]` is the coefficient of `X^i Y^j`.
    rows: Vec<Vec<Interval>>,
}

impl CompiledPolynomial {
    pub fn new(p: &BivariatePolynomial) -> Self {
        let (gw, ge) = p.exponent_gcds();
        let (gw, ge) = (gw.max(1), ge.max(1));
        let mut rows: Vec<Vec<Interval>> = Vec::new();
        for (&(i, j), c) in p.terms() {
            let (i, j) = ((i / gw) as usize, (j / ge) as usize);
            if rows.len() <= j {
                rows.resize(j + 1, Vec::new());
            }
            let row = &mut rows[j];
            if row.len() <= i {
                row.resize(i + 1, Interval::point(0.0));
            }
            row[i] = Interval::from_rational(c);
        }
        CompiledPolynomial { gw, ge, rows }
    }

    pub fn eval(&self, b: &IntervalBox) -> Interval {
        let x = b.w.powi(self.gw);
        let y = b.e.powi(self.ge);
        let mut acc = Interval::point(0.0);
        for row in self.rows.iter().rev() {
            let mut r = Interval::point(0.0);
            for c in row.iter().rev() {
                r = r * x + *c;
            }
            acc = acc * y + r;
        }
        acc
    }
}

/// Sound enclosure of `{p(w, e) : (w, e) ∈ b}`.
pub fn eval_on_box(p: &BivariatePolynomial, b: &IntervalBox) -> Interval {
    CompiledPolynomial::new(p).eval(b)
}

/// Strict sign a certificate can establish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignGoal {
    StrictlyNegative,
    StrictlyPositive,
}

impl SignGoal {
    pub fn holds(self, bound: &Interval) -> bool {
        match self {
            SignGoal::StrictlyNegative => bound.is_negative(),
            SignGoal::StrictlyPositive => bound.is_positive(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoxVerdict {
    Certified(Interval),
    Inconclusive(Interval),
}

impl BoxVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, BoxVerdict::Certified(_))
    }
}

pub fn certify_sign_on_box(p: &BivariatePolynomial, b: &IntervalBox, goal: SignGoal) -> BoxVerdict {
    let bound = eval_on_box(p, b);
    if goal.holds(&bound) {
        BoxVerdict::Certified(bound)
    } else {
        BoxVerdict::Inconclusive(bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(s: &str) -> BivariatePolynomial {
        s.parse().unwrap()
    }

    fn ib(w0: f64, w1: f64, e0: f64, e1: f64) -> IntervalBox {
        IntervalBox::new(Interval::new(w0, w1), Interval::new(e0, e1))
    }

    #[test]
    fn point_box_at_figure_eight() {
        let v = eval_on_box(&bp("e*w - 1"), &IntervalBox::point(1.0, 1.0));
        assert_eq!(v, Interval::point(0.0));
    }

    #[test]
    fn y_negative_near_corner() {
        let y = bp("e^4*w^2 + w^6 - e^2*w^4 - w^2 - e^2");
        assert!(eval_on_box(&y, &ib(1.0, 1.05, 1.0, 1.1)).is_negative());
    }

    #[test]
    fn sign_certificates() {
        let upper = bp("w^4 - e^2*w^2 + 1");
        assert!(
            certify_sign_on_box(&upper, &ib(1.0, 1.1, 1.6, 2.0), SignGoal::StrictlyNegative)
                .is_certified()
        );
        let lower = bp("e*w - 1");
        assert!(
            certify_sign_on_box(&lower, &ib(1.0, 2.0, 0.2, 0.4), SignGoal::StrictlyNegative)
                .is_certified()
        );
        assert!(
            !certify_sign_on_box(&lower, &ib(1.0, 2.0, 0.2, 0.4), SignGoal::StrictlyPositive)
                .is_certified()
        );
    }

    #[test]
    fn compiled_uses_exponent_gcds() {
        let p = bp("w^4 - 3*e^6");
        let c = CompiledPolynomial::new(&p);
        assert_eq!((c.gw, c.ge), (4, 6));
        let v = c.eval(&ib(-1.0, 1.0, 0.0, 1.0));
        assert!(v.lo >= -3.0 && v.hi <= 1.0);
    }
}
