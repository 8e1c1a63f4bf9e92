//! Helpers around `BigRational`, the coefficient field for everything exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n / d` as a rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^exp` for any integer exponent.
pub fn pow2(exp: i32) -> Rational {
    let p = BigInt::one() << exp.unsigned_abs();
    if exp >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Parses `p/q`, an integer, or a plain decimal such as `-1.25` or `1e-3`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in `{s}`")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in `{s}`")))?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational::new(n, d));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad number `{s}`"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let n: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| bad())?
    };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Floor of `sqrt(q)` scaled: returns `m` with `m / 2^bits <= sqrt(q) < (m+1) / 2^bits`.
fn scaled_floor_root(q: &Rational, bits: u32, n: u32) -> BigInt {
    // floor(q * 2^(n*bits)) then integer n-th root, rounding toward -inf stays a lower bound.
    let scaled = q * Rational::from_integer(BigInt::one() << (n * bits) as usize);
    let fl = scaled.floor().to_integer();
    fl.nth_root(n)
}

/// Lower bound for `q^(1/n)` with error at most `2^-bits`. Requires `q >= 0`.
pub fn root_lower(q: &Rational, n: u32, bits: u32) -> Rational {
    debug_assert!(!q.is_negative());
    Rational::new(
        scaled_floor_root(q, bits, n),
        BigInt::one() << bits as usize,
    )
}

/// Upper bound for `q^(1/n)` with error at most `2^-bits`. Requires `q >= 0`.
pub fn root_upper(q: &Rational, n: u32, bits: u32) -> Rational {
    debug_assert!(!q.is_negative());
    let m = scaled_floor_root(q, bits, n);
    let candidate = Rational::new(m.clone(), BigInt::one() << bits as usize);
    if num_traits::pow(candidate.clone(), n as usize) == *q {
        candidate
    } else {
        Rational::new(m + 1, BigInt::one() << bits as usize)
    }
}

/// Smallest dyadic `k / 2^bits` that is `>= q`.
pub fn dyadic_ceil(q: &Rational, bits: u32) -> Rational {
    let scale = Rational::from_integer(BigInt::one() << bits as usize);
    Rational::new(
        (q * &scale).ceil().to_integer(),
        BigInt::one() << bits as usize,
    )
}

/// Largest dyadic `k / 2^bits` that is `<= q`.
pub fn dyadic_floor(q: &Rational, bits: u32) -> Rational {
    let scale = Rational::from_integer(BigInt::one() << bits as usize);
    Rational::new(
        (q * &scale).floor().to_integer(),
        BigInt::one() << bits as usize,
    )
}

/// Decimal rendering truncated to `digits` fractional digits (for display only).
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    let neg = q.is_negative();
    let a = q.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (a * Rational::from_integer(scale.clone()))
        .floor()
        .to_integer();
    let int_part = &scaled / &scale;
    let frac = &scaled % &scale;
    let frac = format!("{:0>width$}", frac.to_string(), width = digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// Serde adapter storing a rational as its `p/q` string.
pub mod as_string {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        parse_rational(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// [`as_string`] for optional rationals.
pub mod as_string_opt {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&q.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("1.25").unwrap(), rat(5, 4));
        assert_eq!(parse_rational("-0.001").unwrap(), rat(-1, 1000));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn roots_bracket() {
        let two = int(2);
        let lo = root_lower(&two, 2, 60);
        let hi = root_upper(&two, 2, 60);
        assert!(&lo * &lo < two && &hi * &hi > two);
        assert!(&hi - &lo <= pow2(-60));
        let lo4 = root_lower(&two, 4, 40);
        let hi4 = root_upper(&two, 4, 40);
        assert!(num_traits::pow(lo4, 4) < two && num_traits::pow(hi4, 4) > two);
        // exact roots are returned exactly
        assert_eq!(root_upper(&int(9), 2, 10), int(3));
        assert_eq!(root_lower(&int(16), 4, 10), int(2));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rat(-1, 8), 3), "-0.125");
        assert_eq!(to_decimal(&rat(2, 3), 4), "0.6666");
        assert_eq!(to_decimal(&int(7), 0), "7");
    }
}
