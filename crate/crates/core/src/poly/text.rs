//! Canonical sparse text form `c*w^i*e^j + ...` shared by both polynomial types.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::tower::split_signed_terms;
use crate::exact::{parse_rational, Rational};

fn factor(var: char, exp: u32) -> Option<String> {
    match exp {
        0 => None,
        1 => Some(var.to_string()),
        k => Some(format!("{var}^{k}")),
    }
}

/// Renders terms in the order given. Unit coefficients are omitted in front of
/// variables; zero renders as `0`.
pub(crate) fn render_terms(terms: &[((u32, u32), Rational)]) -> String {
    let mut out = String::new();
    for ((i, j), c) in terms {
        if c.is_zero() {
            continue;
        }
        let vars: Vec<String> = factor('w', *i).into_iter().chain(factor('e', *j)).collect();
        let mag = c.abs();
        let body = if vars.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            vars.join("*")
        } else {
            format!("{}*{}", mag, vars.join("*"))
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parses a sum of monomials in `w` and `e`. Repeated monomials are returned
/// as separate entries; callers accumulate.
pub(crate) fn parse_terms(s: &str) -> Result<Vec<((u32, u32), Rational)>> {
    let mut out = Vec::new();
    for (negative, term) in split_signed_terms(s)? {
        let mut coef = Rational::one();
        let (mut i, mut j) = (0u32, 0u32);
        for f in term.split('*') {
            let f = f.trim();
            if f.is_empty() {
                return Err(Error::Parse(format!("empty factor in `{term}`")));
            }
            let (base, exp) = match f.split_once('^') {
                Some((b, e)) => {
                    let e: u32 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{f}`")))?;
                    (b, e)
                }
                None => (f, 1),
            };
            match base {
                "w" => i += exp,
                "e" => j += exp,
                _ => {
                    if f.contains('^') {
                        return Err(Error::Parse(format!("exponent on a constant in `{f}`")));
                    }
                    coef *= parse_rational(f)?;
                }
            }
        }
        if negative {
            coef = -coef;
        }
        out.push(((i, j), coef));
    }
    Ok(out)
}
