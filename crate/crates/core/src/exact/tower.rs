//! The biquadratic field Q(√2, √3), stored on the basis {1, √2, √3, √6}.
//!
//! Every named corner of the (w, e)-plane lands here once coordinates are
//! squared, so this is the only algebraic extension the crate needs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::enclosure::RatInterval;
use super::rational::{int, parse_rational, Rational};
use super::Sign;
use crate::error::{Error, Result};

/// `a + b·√2 + c·√3 + d·√6` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TowerElement {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

/// Element of Q(√2) as `(r, s)` meaning `r + s·√2`. Internal helper.
type Q2 = (Rational, Rational);

fn q2_mul(x: &Q2, y: &Q2) -> Q2 {
    (
        &x.0 * &y.0 + int(2) * &x.1 * &y.1,
        &x.0 * &y.1 + &x.1 * &y.0,
    )
}

fn q2_sub(x: &Q2, y: &Q2) -> Q2 {
    (&x.0 - &y.0, &x.1 - &y.1)
}

fn sign_of(q: &Rational) -> Sign {
    if q.is_positive() {
        Sign::Positive
    } else if q.is_negative() {
        Sign::Negative
    } else {
        Sign::Zero
    }
}

/// Exact sign of `r + s·√2`.
fn q2_sign(x: &Q2) -> Sign {
    let (sr, ss) = (sign_of(&x.0), sign_of(&x.1));
    match (sr, ss) {
        (_, Sign::Zero) => sr,
        (Sign::Zero, _) => ss,
        _ if sr == ss => sr,
        _ => {
            // opposite signs: the larger magnitude wins; r² = 2s² is impossible
            let lhs = &x.0 * &x.0;
            let rhs = int(2) * &x.1 * &x.1;
            if lhs > rhs {
                sr
            } else {
                ss
            }
        }
    }
}

impl TowerElement {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        TowerElement { a, b, c, d }
    }

    pub fn from_rational(q: Rational) -> Self {
        TowerElement {
            a: q,
            ..Default::default()
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn sqrt2() -> Self {
        TowerElement {
            b: int(1),
            ..Default::default()
        }
    }

    pub fn sqrt3() -> Self {
        TowerElement {
            c: int(1),
            ..Default::default()
        }
    }

    pub fn sqrt6() -> Self {
        TowerElement {
            d: int(1),
            ..Default::default()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        TowerElement {
            a: &self.a * k,
            b: &self.b * k,
            c: &self.c * k,
            d: &self.d * k,
        }
    }

    /// Splits as `P + Q·√3` with `P, Q ∈ Q(√2)`.
    fn split(&self) -> (Q2, Q2) {
        (
            (self.a.clone(), self.b.clone()),
            (self.c.clone(), self.d.clone()),
        )
    }

    /// Exact sign, decided by conjugate squaring. Never consults floating point.
    pub fn sign(&self) -> Sign {
        let (p, q) = self.split();
        let (sp, sq) = (q2_sign(&p), q2_sign(&q));
        match (sp, sq) {
            (_, Sign::Zero) => sp,
            (Sign::Zero, _) => sq,
            _ if sp == sq => sp,
            _ => {
                // P² − 3Q² decides which part dominates; it is nonzero since √3 ∉ Q(√2)
                let p2 = q2_mul(&p, &p);
                let q2 = q2_mul(&q, &q);
                let norm = q2_sub(&p2, &(int(3) * &q2.0, int(3) * &q2.1));
                if q2_sign(&norm) == Sign::Positive {
                    sp
                } else {
                    sq
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Sign::Negative
    }

    /// Multiplicative inverse via the two conjugations √3 ↦ −√3 and √2 ↦ −√2.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (p, q) = self.split();
        // 1/(P + Q√3) = (P − Q√3) / (P² − 3Q²)
        let p2 = q2_mul(&p, &p);
        let q2 = q2_mul(&q, &q);
        let n = q2_sub(&p2, &(int(3) * &q2.0, int(3) * &q2.1));
        // 1/(r + s√2) = (r − s√2) / (r² − 2s²)
        let den = &n.0 * &n.0 - int(2) * &n.1 * &n.1;
        let n_inv = (&n.0 / &den, -(&n.1 / &den));
        let num_p = q2_mul(&p, &n_inv);
        let num_q = q2_mul(&q, &n_inv);
        Ok(TowerElement {
            a: num_p.0,
            b: num_p.1,
            c: -num_q.0,
            d: -num_q.1,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = TowerElement::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Rational enclosure with each surd bounded to `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> RatInterval {
        let surd = |n: i64| {
            RatInterval::point(int(n))
                .sqrt(bits)
                .expect("positive radicand")
        };
        let (r2, r3, r6) = (surd(2), surd(3), surd(6));
        let mut acc = RatInterval::point(self.a.clone());
        for (coef, root) in [(&self.b, &r2), (&self.c, &r3), (&self.d, &r6)] {
            if !coef.is_zero() {
                acc = &acc + &(root * coef);
            }
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure(64).to_f64_mid()
    }

    /// Total order through exact signs.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

impl fmt::Display for TowerElement {
    /// Canonical text `a + b*r2 + c*r3 + d*r6`, zero terms omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (coef, surd) in [
            (&self.a, ""),
            (&self.b, "r2"),
            (&self.c, "r3"),
            (&self.d, "r6"),
        ] {
            if coef.is_zero() {
                continue;
            }
            let body = if surd.is_empty() {
                coef.abs().to_string()
            } else {
                format!("{}*{surd}", coef.abs())
            };
            if out.is_empty() {
                if coef.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if coef.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl FromStr for TowerElement {
    type Err = Error;

    /// Accepts sums of terms such as `1/2`, `-3*r2`, `r6`, `2/3*r3`.
    fn from_str(s: &str) -> Result<Self> {
        let mut acc = TowerElement::zero();
        for (negative, term) in split_signed_terms(s)? {
            let (coef_text, surd) = match term.rsplit_once('*') {
                Some((c, r)) if r.trim().starts_with('r') => (c.trim(), r.trim()),
                _ if term.trim().starts_with('r') => ("1", term.trim()),
                _ => (term.trim(), ""),
            };
            let mut coef = parse_rational(coef_text)?;
            if negative {
                coef = -coef;
            }
            match surd {
                "" => acc.a += coef,
                "r2" => acc.b += coef,
                "r3" => acc.c += coef,
                "r6" => acc.d += coef,
                other => return Err(Error::Parse(format!("unknown surd `{other}`"))),
            }
        }
        Ok(acc)
    }
}

/// Splits `a - b + c` into signed terms at top-level `+`/`-` signs. Signs that
/// follow an exponent marker (`1e-3`) stay with their term.
pub(crate) fn split_signed_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let mut terms = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        if ch.is_whitespace() {
            continue;
        }
        let is_exp_sign = matches!(prev, Some('e') | Some('E'))
            && current
                .chars()
                .rev()
                .nth(1)
                .is_some_and(|c| c.is_ascii_digit() || c == '.');
        if (ch == '+' || ch == '-') && !is_exp_sign {
            if !current.is_empty() {
                terms.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else {
                // leading sign or a sign directly after another one
                if ch == '-' {
                    negative = !negative;
                }
            }
        } else {
            current.push(ch);
        }
        prev = Some(ch);
    }
    if !current.is_empty() {
        terms.push((negative, current));
    }
    if terms.is_empty() {
        return Err(Error::Parse(format!("empty expression `{s}`")));
    }
    Ok(terms)
}

impl Serialize for TowerElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TowerElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<Rational> for TowerElement {
    fn from(q: Rational) -> Self {
        TowerElement::from_rational(q)
    }
}

impl From<i64> for TowerElement {
    fn from(n: i64) -> Self {
        TowerElement::from_int(n)
    }
}

impl Add for &TowerElement {
    type Output = TowerElement;
    fn add(self, rhs: &TowerElement) -> TowerElement {
        TowerElement {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            c: &self.c + &rhs.c,
            d: &self.d + &rhs.d,
        }
    }
}

impl Sub for &TowerElement {
    type Output = TowerElement;
    fn sub(self, rhs: &TowerElement) -> TowerElement {
        TowerElement {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            c: &self.c - &rhs.c,
            d: &self.d - &rhs.d,
        }
    }
}

impl Neg for &TowerElement {
    type Output = TowerElement;
    fn neg(self) -> TowerElement {
        TowerElement {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

impl Mul for &TowerElement {
    type Output = TowerElement;
    fn mul(self, y: &TowerElement) -> TowerElement {
        let x = self;
        // √2√2 = 2, √3√3 = 3, √6√6 = 6, √2√3 = √6, √2√6 = 2√3, √3√6 = 3√2
        let a = &x.a * &y.a + int(2) * &x.b * &y.b + int(3) * &x.c * &y.c + int(6) * &x.d * &y.d;
        let b = &x.a * &y.b + &x.b * &y.a + int(3) * (&x.c * &y.d + &x.d * &y.c);
        let c = &x.a * &y.c + &x.c * &y.a + int(2) * (&x.b * &y.d + &x.d * &y.b);
        let d = &x.a * &y.d + &x.d * &y.a + &x.b * &y.c + &x.c * &y.b;
        TowerElement { a, b, c, d }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TowerElement {
            type Output = TowerElement;
            fn $m(self, rhs: TowerElement) -> TowerElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&TowerElement> for TowerElement {
            type Output = TowerElement;
            fn $m(self, rhs: &TowerElement) -> TowerElement {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for TowerElement {
    type Output = TowerElement;
    fn neg(self) -> TowerElement {
        -&self
    }
}

impl AddAssign<&TowerElement> for TowerElement {
    fn add_assign(&mut self, rhs: &TowerElement) {
        *self = &*self + rhs;
    }
}

impl Zero for TowerElement {
    fn zero() -> Self {
        TowerElement::default()
    }
    fn is_zero(&self) -> bool {
        TowerElement::is_zero(self)
    }
}

impl One for TowerElement {
    fn one() -> Self {
        TowerElement::from_int(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn t(s: &str) -> TowerElement {
        s.parse().unwrap()
    }

    #[test]
    fn defining_relations() {
        let r2 = TowerElement::sqrt2();
        assert_eq!(&r2 * &r2, TowerElement::from_int(2));
        let one = TowerElement::one();
        assert_eq!((&one + &r2) * (&one - &r2), TowerElement::from_int(-1));
        assert_eq!(&r2 * &TowerElement::sqrt3(), TowerElement::sqrt6());
        assert_eq!(
            &TowerElement::sqrt6() * &TowerElement::sqrt6(),
            TowerElement::from_int(6)
        );
        assert_eq!(&TowerElement::sqrt3() * &TowerElement::sqrt6(), t("3*r2"));
    }

    #[test]
    fn signs() {
        assert_eq!(t("0").sign(), Sign::Zero);
        assert_eq!(t("-1 + 4*r2").sign(), Sign::Positive);
        // 2√2 + 2√2 − 2√2 − √2 − √2 collapses to zero
        let r2 = TowerElement::sqrt2();
        let two_r2 = r2.scale(&int(2));
        let sum = &(&(&(&two_r2 + &two_r2) - &two_r2) - &r2) - &r2;
        assert_eq!(sum.sign(), Sign::Zero);
        // √2 + √3 − √6 − 1/2 ≈ 0.196 > 0
        assert_eq!(t("-1/2 + r2 + r3 - r6").sign(), Sign::Positive);
        // 5 − 2√6 ≈ 0.101 > 0 and its negative
        assert_eq!(t("5 - 2*r6").sign(), Sign::Positive);
        assert_eq!(t("-5 + 2*r6").sign(), Sign::Negative);
        // √3 − √2 − 0.3178 straddles in low precision only
        assert_eq!(t("r3 - r2 - 3178/10000").sign(), Sign::Positive);
    }

    #[test]
    fn division() {
        let x = t("1 + r2 - 2*r3 + 1/3*r6");
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, TowerElement::one());
        assert_eq!(TowerElement::zero().inverse(), Err(Error::DivisionByZero));
        assert_eq!(
            TowerElement::one().checked_div(&TowerElement::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn text_form() {
        let x = TowerElement::new(rat(1, 2), rat(-3, 1), int(0), rat(2, 7));
        assert_eq!(x.to_string(), "1/2 - 3*r2 + 2/7*r6");
        assert_eq!(t(&x.to_string()), x);
        assert_eq!(TowerElement::zero().to_string(), "0");
        assert_eq!(t("-r2").to_string(), "-1*r2");
        assert_eq!(t("r3 + r3"), t("2*r3"));
        assert!("1 + 2*r5".parse::<TowerElement>().is_err());
    }
}
