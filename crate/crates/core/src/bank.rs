//! The eight disjointness inequalities on (w, e), as data.
//!
//! Each entry is a polynomial that must be nonnegative whenever the segment
//! it describes has nonzero length. The table reports values; deciding which
//! segments degenerate at a given point is left to the caller.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Sign, TowerElement};
use crate::interval::{CompiledPolynomial, Interval, IntervalBox};
use crate::poly::{BivariatePolynomial, ExactPoint, UnivariatePolynomial};

/// Lower bound on a center distance, or on the angle for `upper-e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MinDistance {
    /// Centers at least `1 / (w^w_exp · e^e_exp)` apart.
    Reciprocal { w_exp: u32, e_exp: u32 },
    /// The angle θ between the two shortest translations is at most π/2.
    RightAngle,
}

impl MinDistance {
    /// The bound at a point; `None` for the angle condition.
    pub fn eval_f64(&self, w: f64, e: f64) -> Option<f64> {
        match *self {
            MinDistance::Reciprocal { w_exp, e_exp } => {
                Some(1.0 / (w.powi(w_exp as i32) * e.powi(e_exp as i32)))
            }
            MinDistance::RightAngle => None,
        }
    }
}

impl fmt::Display for MinDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MinDistance::Reciprocal { w_exp, e_exp } => {
                let mut parts = Vec::new();
                match w_exp {
                    0 => {}
                    1 => parts.push("w".to_string()),
                    k => parts.push(format!("w^{k}")),
                }
                match e_exp {
                    0 => {}
                    1 => parts.push("e".to_string()),
                    k => parts.push(format!("e^{k}")),
                }
                if parts.len() > 1 {
                    write!(f, "1/({})", parts.join("*"))
                } else {
                    write!(f, "1/{}", parts.join("*"))
                }
            }
            MinDistance::RightAngle => f.write_str("theta <= pi/2"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityDef {
    pub name: &'static str,
    pub lhs: BivariatePolynomial,
    pub min_distance: MinDistance,
    /// The two horoball families the constraint keeps apart.
    pub pair: &'static str,
    pub applicability: &'static str,
}

pub const NAMES: [&str; 8] = ["lower-e", "upper-e", "v", "y", "s", "m", "p", "k"];

const SEGMENT_NONZERO: &str = "segment length nonzero";

fn build() -> Vec<InequalityDef> {
    let poly = |s: &str| {
        s.parse::<BivariatePolynomial>()
            .expect("bank polynomial parses")
    };
    let recip = |w_exp, e_exp| MinDistance::Reciprocal { w_exp, e_exp };
    vec![
        InequalityDef {
            name: "lower-e",
            lhs: poly("e*w - 1"),
            min_distance: recip(1, 0),
            pair: "1/w-ball and the translated full-sized ball",
            applicability: SEGMENT_NONZERO,
        },
        InequalityDef {
            name: "upper-e",
            lhs: poly("w^4 - e^2*w^2 + 1"),
            min_distance: MinDistance::RightAngle,
            pair: "angle between the shortest and second shortest translations",
            applicability: "always",
        },
        InequalityDef {
            name: "v",
            lhs: poly(
                "w^12 - w^8 - e^4*w^8 + e^6*w^6 - e^2*w^6 + 2*w^4 - 2*e^4*w^4 + 3*e^2*w^2 - 2",
            ),
            min_distance: recip(4, 1),
            pair: "1/w^3-ball and 1/e-ball",
            applicability: SEGMENT_NONZERO,
        },
        InequalityDef {
            name: "y",
            lhs: poly("e^4*w^2 + w^6 - e^2*w^4 - w^2 - e^2"),
            min_distance: recip(2, 1),
            pair: "1/e-ball and translated 1/w-ball",
            applicability: SEGMENT_NONZERO,
        },
        InequalityDef {
            name: "s",
            lhs: poly("w^14 - 2*e^2*w^12 + 2*e^4*w^10 - 2*w^10 + 2*w^6 - 1"),
            min_distance: recip(6, 0),
            pair: "two 1/w^3-balls",
            applicability: SEGMENT_NONZERO,
        },
        InequalityDef {
            name: "m",
            lhs: poly("e^4*w^2 + w^6 - e^2*w^4 - w^2 - e^2"),
            min_distance: recip(3, 0),
            pair: "two balls whose diameters multiply to 1/w^6",
            applicability: SEGMENT_NONZERO,
        },
        InequalityDef {
            name: "p",
            lhs: poly("2*w^10 + 2*w^2 + e^4*w^6 - 2*e^2*w^4 - 2*e^2*w^8 - 1"),
            min_distance: recip(4, 0),
            pair: "1/w-ball and 1/w^3-ball",
            applicability: SEGMENT_NONZERO,
        },
        InequalityDef {
            name: "k",
            lhs: poly("3*w^14 - 4*e^2*w^12 + 2*e^4*w^10 - 4*e^2*w^8 + 6*w^6 - 1"),
            min_distance: recip(6, 0),
            pair: "1/w^3-balls on either side of a translate",
            applicability: SEGMENT_NONZERO,
        },
    ]
}

/// All eight definitions, in a fixed order.
pub fn bank() -> &'static [InequalityDef] {
    static BANK: OnceLock<Vec<InequalityDef>> = OnceLock::new();
    BANK.get_or_init(build)
}

pub fn by_name(name: &str) -> Result<&'static InequalityDef> {
    bank()
        .iter()
        .find(|d| d.name == name)
        .ok_or_else(|| Error::UnknownName {
            name: name.to_string(),
            known: NAMES.join(", "),
        })
}

/// Exact three-way classification of an inequality at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Violated,
    Equality,
    Strict,
}

impl From<Sign> for Membership {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Negative => Membership::Violated,
            Sign::Zero => Membership::Equality,
            Sign::Positive => Membership::Strict,
        }
    }
}

/// Sign of an interval enclosure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalSign {
    Negative,
    ContainsZero,
    Positive,
}

impl From<&Interval> for IntervalSign {
    fn from(i: &Interval) -> Self {
        if i.is_negative() {
            IntervalSign::Negative
        } else if i.is_positive() {
            IntervalSign::Positive
        } else {
            IntervalSign::ContainsZero
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum EntryValue {
    Exact {
        value: TowerElement,
        approx: f64,
        membership: Membership,
    },
    Interval {
        lo: f64,
        hi: f64,
        sign: IntervalSign,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BankEntry {
    pub name: &'static str,
    #[serde(flatten)]
    pub value: EntryValue,
    pub min_distance: String,
    pub applicability: &'static str,
}

/// Exact value of one inequality's left-hand side.
pub fn eval_exact(def: &InequalityDef, point: &ExactPoint) -> Result<TowerElement> {
    def.lhs.eval_exact(point).map_err(|e| match e {
        Error::ParityMismatch { w_exp, e_exp } => Error::NotRepresentable(format!(
            "`{}` at this point (monomial w^{w_exp}*e^{e_exp} needs w*e)",
            def.name
        )),
        other => other,
    })
}

pub fn locus_membership(name: &str, point: &ExactPoint) -> Result<Membership> {
    Ok(eval_exact(by_name(name)?, point)?.sign().into())
}

/// Every left-hand side at an exact point.
pub fn evaluate_exact(point: &ExactPoint) -> Result<Vec<BankEntry>> {
    bank()
        .iter()
        .map(|def| {
            let value = eval_exact(def, point)?;
            Ok(BankEntry {
                name: def.name,
                value: EntryValue::Exact {
                    approx: value.to_f64(),
                    membership: value.sign().into(),
                    value,
                },
                min_distance: def.min_distance.to_string(),
                applicability: def.applicability,
            })
        })
        .collect()
}

/// Every left-hand side enclosed over a box (a point box for plain floats).
pub fn evaluate_interval(b: &IntervalBox) -> Vec<BankEntry> {
    bank()
        .iter()
        .map(|def| {
            let v = CompiledPolynomial::new(&def.lhs).eval(b);
            BankEntry {
                name: def.name,
                value: EntryValue::Interval {
                    lo: v.lo,
                    hi: v.hi,
                    sign: (&v).into(),
                },
                min_distance: def.min_distance.to_string(),
                applicability: def.applicability,
            }
        })
        .collect()
}

/// Reduces `p(w, e)` modulo `e − subst(w)` and `modulus(w)`.
pub fn reduce_modulo(
    p: &BivariatePolynomial,
    subst: &UnivariatePolynomial,
    modulus: &UnivariatePolynomial,
) -> Result<UnivariatePolynomial> {
    p.substitute_e(subst).rem(modulus)
}
