//! Eliminating a shared angle from two law-of-cosines relations.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::bivariate::BivariatePolynomial;
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Polynomial in `w, 1/w` and `e`: keys are `(deg_w, deg_e)` with `deg_w` signed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<(i32, u32), Rational>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_ints(terms: &[(i64, i32, u32)]) -> Self {
        let mut p = Self::zero();
        for &(c, i, j) in terms {
            p.add_term((i, j), Rational::from_integer(c.into()));
        }
        p
    }

    /// The monomial `c·w^i·e^j`.
    pub fn monomial(c: i64, i: i32, j: u32) -> Self {
        Self::from_ints(&[(c, i, j)])
    }

    fn add_term(&mut self, k: (i32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_w_exponent(&self) -> i32 {
        self.terms.keys().map(|k| k.0).min().unwrap_or(0)
    }

    /// `w^(-min) · self` as an ordinary polynomial, plus the shift applied.
    pub fn clear_denominators(&self) -> (BivariatePolynomial, i32) {
        let shift = -self.min_w_exponent();
        let p = BivariatePolynomial::from_terms(
            self.terms
                .iter()
                .map(|(&(i, j), c)| (((i + shift) as u32, j), c.clone())),
        );
        (p, shift)
    }

    pub fn eval_f64(&self, w: f64, e: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.to_f64().unwrap_or(f64::NAN) * w.powi(i) * e.powi(j as i32))
            .sum()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero();
        for (&m, c) in &self.terms {
            out.add_term(m, c * k);
        }
        out
    }
}

impl std::ops::Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, -c.clone());
        }
        out
    }
}

impl std::ops::Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            let mut vars = Vec::new();
            match i {
                0 => {}
                1 => vars.push("w".to_string()),
                _ => vars.push(format!("w^{i}")),
            }
            match j {
                0 => {}
                1 => vars.push("e".to_string()),
                _ => vars.push(format!("e^{j}")),
            }
            let mag = c.abs();
            let body = if vars.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                vars.join("*")
            } else {
                format!("{mag}*{}", vars.join("*"))
            };
            match (n, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Which angle the cosine in a relation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleForm {
    Theta,
    /// `π − 2θ`, whose cosine is `1 − 2cos²θ`.
    PiMinusTwoTheta,
}

/// `side_sq = sum_sq − cos_coeff · cos(angle)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosineRelation {
    pub side_sq: LaurentPolynomial,
    pub sum_sq: LaurentPolynomial,
    pub cos_coeff: LaurentPolynomial,
    pub angle: AngleForm,
}

impl fmt::Display for CosineRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let angle = match self.angle {
            AngleForm::Theta => "theta",
            AngleForm::PiMinusTwoTheta => "pi - 2*theta",
        };
        write!(
            f,
            "{} = {} - ({})*cos({angle})",
            self.side_sq, self.sum_sq, self.cos_coeff
        )
    }
}

/// Intermediate steps of an elimination, for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    /// `cos θ` solved from the first relation, as `numerator / denominator`.
    pub cos_numerator: LaurentPolynomial,
    pub cos_denominator: LaurentPolynomial,
    /// The combined relation before clearing powers of `w`.
    pub combined: LaurentPolynomial,
    /// Power of `w` multiplied through.
    pub cleared_by: i32,
    pub polynomial: BivariatePolynomial,
}

/// Solves `first` (linear in `cos θ`) for `cos θ`, substitutes into `second`
/// and returns the primitive integer polynomial with positive leading term.
pub fn eliminate_angle(
    first: &CosineRelation,
    second: &CosineRelation,
) -> Result<BivariatePolynomial> {
    Ok(eliminate_angle_traced(first, second)?.polynomial)
}

pub fn eliminate_angle_traced(
    first: &CosineRelation,
    second: &CosineRelation,
) -> Result<Elimination> {
    if first.angle != AngleForm::Theta {
        return Err(Error::RelationShape(
            "the first relation must be linear in cos(theta)".into(),
        ));
    }
    if first.cos_coeff.is_zero() || second.cos_coeff.is_zero() {
        return Err(Error::RelationShape(
            "a relation does not involve the angle".into(),
        ));
    }
    // cos θ = (sum_1 − side_1) / coeff_1
    let num = &first.sum_sq - &first.side_sq;
    let den = first.cos_coeff.clone();
    let diff2 = &second.side_sq - &second.sum_sq;
    let c2 = &second.cos_coeff;
    let combined = match second.angle {
        // side_2 − sum_2 = −c2·num/den
        AngleForm::Theta => &(&diff2 * &den) + &(c2 * &num),
        // side_2 − sum_2 = −c2·(1 − 2 num²/den²)
        AngleForm::PiMinusTwoTheta => {
            let lhs = &(&diff2 + c2) * &(&den * &den);
            let two = Rational::from_integer(2.into());
            &lhs - &(c2 * &(&num * &num)).scale(&two)
        }
    };
    if combined.is_zero() {
        return Err(Error::RelationShape("the relations are dependent".into()));
    }
    let (cleared, cleared_by) = combined.clear_denominators();
    Ok(Elimination {
        cos_numerator: num,
        cos_denominator: den,
        combined,
        cleared_by,
        polynomial: cleared.primitive(),
    })
}

/// The two relations of the 5₂ configuration: a triangle with sides
/// `w, 1/w, w²` at angle θ, and one with sides `w, 1/w³, 1/w⁴` at `π − 2θ`.
pub fn five_two_relations() -> (CosineRelation, CosineRelation) {
    let first = CosineRelation {
        side_sq: LaurentPolynomial::monomial(1, 4, 0),
        sum_sq: LaurentPolynomial::from_ints(&[(1, 2, 0), (1, -2, 0)]),
        cos_coeff: LaurentPolynomial::monomial(2, 0, 0),
        angle: AngleForm::Theta,
    };
    let second = CosineRelation {
        side_sq: LaurentPolynomial::monomial(1, -8, 0),
        sum_sq: LaurentPolynomial::from_ints(&[(1, 2, 0), (1, -6, 0)]),
        cos_coeff: LaurentPolynomial::monomial(2, -2, 0),
        angle: AngleForm::PiMinusTwoTheta,
    };
    (first, second)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_two_pair_gives_degree_fourteen() {
        let (a, b) = five_two_relations();
        let t = eliminate_angle_traced(&a, &b).unwrap();
        assert_eq!(
            t.polynomial.to_string(),
            "w^14 - 2*w^12 + 2*w^10 - 2*w^8 + 2*w^2 - 1"
        );
        assert_eq!(t.cleared_by, 8);
    }

    #[test]
    fn floating_resubstitution() {
        // cos θ from the first relation, then the residual of the second
        let w: f64 = 1.15;
        let c = (w * w + w.powi(-2) - w.powi(4)) / 2.0;
        let cos2 = 1.0 - 2.0 * c * c;
        let residual = w.powi(-8) - (w * w + w.powi(-6) - 2.0 * w.powi(-2) * cos2);
        let (a, b) = five_two_relations();
        let t = eliminate_angle_traced(&a, &b).unwrap();
        // combined = (residual) · den² up to the sign convention
        let combined = t.combined.eval_f64(w, 0.0);
        assert!((combined - 4.0 * residual).abs() < 1e-12);
        let poly = t.polynomial.eval_f64(w, 0.0);
        assert!((poly + w.powi(8) * residual).abs() < 1e-12);
    }

    #[test]
    fn right_angle_gives_upper_e_locus() {
        let first = CosineRelation {
            side_sq: LaurentPolynomial::monomial(1, 0, 2),
            sum_sq: LaurentPolynomial::from_ints(&[(1, 2, 0), (1, -2, 0)]),
            cos_coeff: LaurentPolynomial::monomial(2, 0, 0),
            angle: AngleForm::Theta,
        };
        // 0 = 0 − (−1)·cos θ
        let second = CosineRelation {
            side_sq: LaurentPolynomial::zero(),
            sum_sq: LaurentPolynomial::zero(),
            cos_coeff: LaurentPolynomial::monomial(-1, 0, 0),
            angle: AngleForm::Theta,
        };
        let p = eliminate_angle(&first, &second).unwrap();
        assert_eq!(p.to_string(), "w^4 - w^2*e^2 + 1");
    }

    #[test]
    fn wrong_shape() {
        let (a, b) = five_two_relations();
        assert!(matches!(
            eliminate_angle(&b, &a),
            Err(Error::RelationShape(_))
        ));
        let mut flat = a.clone();
        flat.cos_coeff = LaurentPolynomial::zero();
        assert!(eliminate_angle(&flat, &b).is_err());
        assert!(matches!(
            eliminate_angle(&a, &a),
            Err(Error::RelationShape(_))
        ));
    }

    #[test]
    fn laurent_display() {
        let p = LaurentPolynomial::from_ints(&[(1, 2, 0), (-3, -6, 1)]);
        assert_eq!(p.to_string(), "w^2 - 3*w^-6*e");
    }
}
