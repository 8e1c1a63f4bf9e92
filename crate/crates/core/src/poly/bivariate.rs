//! Sparse polynomials in (w, e) with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::point::ExactPoint;
use super::univariate::UnivariatePolynomial;
use crate::error::{Error, Result};
use crate::exact::{Rational, TowerElement};

/// Map from exponent pair `(deg_w, deg_e)` to a nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    /// Integer coefficients: `[(coef, deg_w, deg_e), ...]`.
    pub fn from_ints(terms: &[(i64, u32, u32)]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|&(c, i, j)| ((i, j), Rational::from_integer(c.into()))),
        )
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    pub fn w() -> Self {
        Self::from_ints(&[(1, 1, 0)])
    }

    pub fn e() -> Self {
        Self::from_ints(&[(1, 0, 1)])
    }

    fn add_term(&mut self, k: (u32, u32), c: Rational) {
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

    /// Terms in ascending `(deg_w, deg_e)` order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, deg_w: u32, deg_e: u32) -> Rational {
        self.terms
            .get(&(deg_w, deg_e))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn degree_w(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_e(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// gcd of the exponents of w and of e (0 when the variable is absent).
    pub fn exponent_gcds(&self) -> (u32, u32) {
        self.terms
            .keys()
            .fold((0, 0), |(gw, ge), &(i, j)| (gw.gcd(&i), ge.gcd(&j)))
    }

    /// Every monomial has even degree in both variables.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i % 2 == 0 && j % 2 == 0)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(&m, c)| (m, c * k)))
    }

    /// Multiplies by `w^a e^b`.
    pub fn shift(&self, a: u32, b: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i + a, j + b), c.clone()))
                .collect(),
        }
    }

    pub fn partial_w(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.0 > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c * Rational::from_integer(i.into()))),
        )
    }

    pub fn partial_e(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.1 > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c * Rational::from_integer(j.into()))),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(Rational::one()), |acc, _| &acc * self)
    }

    /// Exact value at a point. With a `Squared` point every monomial must be
    /// parity-compatible (see [`ExactPoint`]); otherwise this is an error.
    pub fn eval_exact(&self, point: &ExactPoint) -> Result<TowerElement> {
        let mut acc = TowerElement::zero();
        match point {
            ExactPoint::Plain { w, e } => {
                let mut wp = PowerCache::new(w.clone());
                let mut ep = PowerCache::new(e.clone());
                for (&(i, j), c) in &self.terms {
                    let m = wp.get(i) * ep.get(j);
                    acc += &m.scale(c);
                }
            }
            ExactPoint::Squared { w2, e2, we } => {
                let mut wp = PowerCache::new(w2.clone());
                let mut ep = PowerCache::new(e2.clone());
                for (&(i, j), c) in &self.terms {
                    let m = match (i % 2, j % 2, we) {
                        (0, 0, _) => wp.get(i / 2) * ep.get(j / 2),
                        (1, 1, Some(we)) => we * &(wp.get(i / 2) * ep.get(j / 2)),
                        _ => return Err(Error::ParityMismatch { w_exp: i, e_exp: j }),
                    };
                    acc += &m.scale(c);
                }
            }
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, w: f64, e: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(&(i, j), c)| {
                c.to_f64().unwrap_or(f64::NAN) * w.powi(i as i32) * e.powi(j as i32)
            })
            .sum()
    }

    /// Slope `de/dw = -p_w / p_e` of the zero locus through `point`, exactly.
    ///
    /// For squared points the ratio is computed as
    /// `-(w·p_w)/(e·p_e) · (e/w)`, which keeps every monomial parity-compatible
    /// when `p` is even.
    pub fn implicit_slope(&self, point: &ExactPoint) -> Result<TowerElement> {
        let (pw, pe) = (self.partial_w(), self.partial_e());
        match point {
            ExactPoint::Plain { .. } => {
                let den = pe.eval_exact(point)?;
                if den.is_zero() {
                    return Err(Error::SingularPoint);
                }
                Ok(-pw.eval_exact(point)?.checked_div(&den)?)
            }
            ExactPoint::Squared { .. } => {
                let num = pw.shift(1, 0).eval_exact(point)?;
                let den = pe.shift(0, 1).eval_exact(point)?;
                if den.is_zero() {
                    return Err(Error::SingularPoint);
                }
                let ratio = num.checked_div(&den)?;
                Ok(-(ratio * point.e_over_w()?))
            }
        }
    }

    /// Substitutes `e := u(w)`.
    pub fn substitute_e(&self, u: &UnivariatePolynomial) -> UnivariatePolynomial {
        let mut acc = UnivariatePolynomial::zero();
        let mut upow: Vec<UnivariatePolynomial> = vec![UnivariatePolynomial::one()];
        for (&(i, j), c) in &self.terms {
            while upow.len() <= j as usize {
                let next = upow.last().expect("nonempty") * u;
                upow.push(next);
            }
            let m = &UnivariatePolynomial::monomial(c.clone(), i as usize) * &upow[j as usize];
            acc = &acc + &m;
        }
        acc
    }

    /// The polynomial as univariate in `w` when `e` does not occur.
    pub fn to_univariate_w(&self) -> Option<UnivariatePolynomial> {
        if self.terms.keys().any(|k| k.1 != 0) {
            return None;
        }
        Some(self.substitute_e(&UnivariatePolynomial::zero()))
    }

    /// Divides out the rational content and makes the leading term (highest
    /// w-degree, then highest e-degree) positive.
    pub fn primitive(&self) -> Self {
        let Some((_, lead)) = self.terms.iter().next_back() else {
            return Self::zero();
        };
        let num_gcd = self
            .terms
            .values()
            .fold(num_bigint::BigInt::zero(), |g, c| g.gcd(c.numer()));
        let den_lcm = self
            .terms
            .values()
            .fold(num_bigint::BigInt::one(), |l, c| l.lcm(c.denom()));
        let mut content = Rational::new(num_gcd, den_lcm);
        if lead < &Rational::zero() {
            content = -content;
        }
        self.scale(&content.recip())
    }
}

impl From<&UnivariatePolynomial> for BivariatePolynomial {
    fn from(u: &UnivariatePolynomial) -> Self {
        Self::from_terms(
            u.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| ((k as u32, 0), c.clone())),
        )
    }
}

struct PowerCache {
    powers: Vec<TowerElement>,
}

impl PowerCache {
    fn new(x: TowerElement) -> Self {
        PowerCache {
            powers: vec![TowerElement::one(), x],
        }
    }

    fn get(&mut self, k: u32) -> TowerElement {
        while self.powers.len() <= k as usize {
            let next = &self.powers[self.powers.len() - 1] * &self.powers[1];
            self.powers.push(next);
        }
        self.powers[k as usize].clone()
    }
}

impl std::ops::Add for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, -c);
        }
        out
    }
}

impl std::ops::Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> BivariatePolynomial {
        self.scale(&-Rational::one())
    }
}

impl std::ops::Mul for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }
}

impl fmt::Display for BivariatePolynomial {
    /// Descending w-degree, then descending e-degree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self
            .terms
            .iter()
            .rev()
            .map(|(&k, c)| (k, c.clone()))
            .collect();
        f.write_str(&super::text::render_terms(&terms))
    }
}

impl FromStr for BivariatePolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(Self::from_terms(super::text::parse_terms(s)?))
    }
}

impl Serialize for BivariatePolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BivariatePolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}
