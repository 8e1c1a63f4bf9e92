//! Cusps realizing the three smallest waist sizes, the audit of the
//! degree-14 factorization, and the unknotting-tunnel length bounds.

use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{as_string, int, pow2, rat};
use crate::exact::{RatInterval, Rational, TowerElement};
use crate::poly::{
    eliminate_angle, expand_product, five_two_relations, isolate_real_roots, IsolatingInterval,
    UnivariatePolynomial,
};

pub const CATALOG_VERSION: u32 = 1;

/// Waist enclosures are refined to this width.
const WAIST_BITS: i32 = 30;

const SHIPPED: &str = include_str!("../data/catalog.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WaistValue {
    Exact {
        #[serde(with = "as_string")]
        value: Rational,
    },
    Algebraic {
        #[serde(skip_serializing_if = "Option::is_none", default)]
        closed_form: Option<String>,
        enclosure: IsolatingInterval,
    },
}

impl WaistValue {
    pub fn enclosure(&self) -> RatInterval {
        match self {
            WaistValue::Exact { value } => RatInterval::point(value.clone()),
            WaistValue::Algebraic { enclosure, .. } => enclosure.as_rat_interval(),
        }
    }

    pub fn approx(&self) -> f64 {
        self.enclosure().to_f64_mid()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterPoint {
    pub w: String,
    pub e: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldRecord {
    pub name: String,
    pub aliases: Vec<String>,
    pub defining_polynomial: UnivariatePolynomial,
    pub waist: WaistValue,
    pub parameter_point: Option<ParameterPoint>,
    pub note: String,
}

impl ManifoldRecord {
    /// Re-checks that the stored waist is a root of the defining polynomial.
    pub fn verify(&self) -> bool {
        match &self.waist {
            WaistValue::Exact { value } => self.defining_polynomial.eval(value).is_zero(),
            WaistValue::Algebraic { enclosure, .. } => {
                enclosure.polynomial == self.defining_polynomial && enclosure.verify()
            }
        }
    }

    fn matches(&self, name: &str) -> bool {
        self.name.eq_ignore_ascii_case(name)
            || self.aliases.iter().any(|a| a.eq_ignore_ascii_case(name))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub manifolds: Vec<ManifoldRecord>,
}

impl Catalog {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }
}

fn unique_root(p: &UnivariatePolynomial, lo: i64, hi: i64) -> IsolatingInterval {
    let mut roots =
        isolate_real_roots(p, &int(lo), &int(hi), &pow2(-WAIST_BITS)).expect("nonzero polynomial");
    assert_eq!(roots.len(), 1, "{p} must have one root in ({lo}, {hi})");
    roots.remove(0)
}

/// Builds the catalog from its defining polynomials.
pub fn build_catalog() -> Catalog {
    let five_two: UnivariatePolynomial = "w^6 - w^2 - 1".parse().expect("literal");
    let m009: UnivariatePolynomial = "w^4 - 2".parse().expect("literal");
    Catalog {
        version: CATALOG_VERSION,
        manifolds: vec![
            ManifoldRecord {
                name: "4_1".into(),
                aliases: vec!["m004".into(), "figure-eight".into()],
                defining_polynomial: "w - 1".parse().expect("literal"),
                waist: WaistValue::Exact { value: Rational::one() },
                parameter_point: Some(ParameterPoint { w: "1".into(), e: "1".into() }),
                note: "smallest waist size; the two 1/w-balls identified by the shortest translation are tangent".into(),
            },
            ManifoldRecord {
                name: "5_2".into(),
                aliases: vec!["m015".into()],
                waist: WaistValue::Algebraic { closed_form: None, enclosure: unique_root(&five_two, 1, 2) },
                defining_polynomial: five_two,
                parameter_point: Some(ParameterPoint { w: "root of w^6 - w^2 - 1".into(), e: "w^2".into() }),
                note: "the 1/e-ball coincides with a 1/w^3-ball, forcing e = w^2; the squared waist is the plastic number"
                    .into(),
            },
            ManifoldRecord {
                name: "m009".into(),
                aliases: vec!["whitehead(2,1)".into()],
                waist: WaistValue::Algebraic { closed_form: Some("2^(1/4)".into()), enclosure: unique_root(&m009, 1, 2) },
                defining_polynomial: m009,
                parameter_point: Some(ParameterPoint { w: "2^(1/4)".into(), e: "2^(1/4)".into() }),
                note: "(2,1)-filling of the Whitehead link; the y, v and m inequalities are equalities".into(),
            },
        ],
    }
}

pub fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

/// The catalog file shipped with the crate.
pub fn shipped_catalog() -> Result<Catalog> {
    serde_json::from_str(SHIPPED).map_err(|e| Error::Parse(format!("shipped catalog: {e}")))
}

pub fn waist(name: &str) -> Result<&'static ManifoldRecord> {
    let cat = catalog();
    cat.manifolds
        .iter()
        .find(|m| m.matches(name))
        .ok_or_else(|| Error::UnknownName {
            name: name.to_string(),
            known: cat
                .manifolds
                .iter()
                .map(|m| m.name.as_str())
                .collect::<Vec<_>>()
                .join(", "),
        })
}

/// Checks that the squared 5_2 waist encloses a root of `x³ − x − 1`.
pub fn plastic_number_check() -> (RatInterval, RatInterval) {
    let w = waist("5_2").expect("catalog entry").waist.enclosure();
    let x = w.pow(2);
    let value = &(&x.pow(3) - &x) - &RatInterval::point(Rational::one());
    (x, value)
}

/// Decides `1 < w(5_2) < ∜2` exactly: the 5_2 polynomial, read as a cubic in
/// `t = w²`, is negative at `t = 1` and positive at `t = √2`, and increasing
/// for `t ≥ 1`.
pub fn ordering_is_strict() -> bool {
    let cubic = UnivariatePolynomial::from_ints(&[-1, -1, 0, 1]);
    let at_one = cubic.eval_tower(&TowerElement::one());
    let at_sqrt2 = cubic.eval_tower(&TowerElement::sqrt2());
    // derivative 3t² − 1 > 0 for t ≥ 1, so the sign change pins the root
    at_one.is_negative() && at_sqrt2.is_positive()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorAudit {
    pub target: UnivariatePolynomial,
    pub printed_factors: Vec<UnivariatePolynomial>,
    pub printed_product: UnivariatePolynomial,
    pub printed_degree: usize,
    pub target_degree: usize,
    pub printed_cubic_divides: bool,
    /// `target / printed_product`, when the division is exact.
    pub missing_factor: Option<UnivariatePolynomial>,
    pub divisor: UnivariatePolynomial,
    pub quotient: UnivariatePolynomial,
    pub remainder: UnivariatePolynomial,
    /// Roots of the target in (1, 2).
    pub roots_above_one: Vec<IsolatingInterval>,
}

impl FactorAudit {
    pub fn exact(&self) -> bool {
        self.remainder.is_zero() && &self.divisor * &self.quotient == self.target
    }
}

/// Checks the printed factorization of the degree-14 elimination polynomial
/// and derives the correct cofactor of `(w − 1)(w + 1)(w⁶ − w² − 1)`.
pub fn factor_audit() -> Result<FactorAudit> {
    let (first, second) = five_two_relations();
    let target = eliminate_angle(&first, &second)?
        .to_univariate_w()
        .ok_or_else(|| Error::RelationShape("elimination left `e` in the result".into()))?;
    let parse = |s: &str| s.parse::<UnivariatePolynomial>().expect("literal");
    let printed_factors: Vec<_> = ["w - 1", "w + 1", "w^3 - w^2 + 1", "w^6 - w^2 - 1"]
        .into_iter()
        .map(parse)
        .collect();
    let printed_product = expand_product(&printed_factors);
    let printed_cubic_divides = target.rem(&printed_factors[2])?.is_zero();
    let (missing, rest) = target.div_rem(&printed_product)?;
    let missing_factor = rest.is_zero().then_some(missing);
    let divisor = expand_product(&[
        printed_factors[0].clone(),
        printed_factors[1].clone(),
        printed_factors[3].clone(),
    ]);
    let (quotient, remainder) = target.div_rem(&divisor)?;
    let roots_above_one = isolate_real_roots(&target, &int(1), &int(2), &pow2(-WAIST_BITS))?;
    Ok(FactorAudit {
        printed_degree: printed_product.degree().unwrap_or(0),
        target_degree: target.degree().unwrap_or(0),
        target,
        printed_factors,
        printed_product,
        printed_cubic_divides,
        missing_factor,
        divisor,
        quotient,
        remainder,
        roots_above_one,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TunnelBound {
    pub a0: f64,
    pub b0: f64,
    /// Rescaling at which both cusps have equal waist.
    pub h: f64,
    /// The common waist `√(a0·b0)`.
    pub w: f64,
    /// `ln(4/w²)`.
    pub bound: f64,
}

/// Tunnel-length bound from the waist sizes of two cusps, `a0 ≥ b0 > 0`,
/// after equalizing them.
pub fn tunnel_bound(a0: f64, b0: f64) -> Result<TunnelBound> {
    if !(a0.is_finite() && b0.is_finite()) || b0 <= 0.0 || a0 < b0 {
        return Err(Error::InvalidArgument(format!(
            "need a0 >= b0 > 0, got a0 = {a0}, b0 = {b0}"
        )));
    }
    let product = a0 * b0;
    Ok(TunnelBound {
        a0,
        b0,
        h: (a0 / b0).sqrt(),
        w: product.sqrt(),
        bound: (4.0 / product).ln(),
    })
}

/// `ln 2 = 2·atanh(1/3)`, enclosed by partial sums of the series and a
/// geometric tail bound.
pub fn ln2_enclosure(terms: u32) -> RatInterval {
    let ninth = rat(1, 9);
    let mut power = rat(1, 3);
    let mut sum = Rational::zero();
    for k in 0..terms {
        sum += &power / int(2 * i64::from(k) + 1);
        power *= &ninth;
    }
    // the remaining terms are below power/(2n+1) · 9/8 in total
    let tail = &power / int(2 * i64::from(terms) + 1) * rat(9, 8);
    let two = int(2);
    RatInterval::new(&sum * &two, (&sum + &tail) * &two)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniversalTunnelBound {
    pub formula: &'static str,
    pub ln2: RatInterval,
    pub bound: RatInterval,
    pub approx: f64,
    pub prior_bound: RatInterval,
    pub prior_approx: f64,
}

/// The bound `ln(2^{7/4}) = (7/4)·ln 2` for one-tunnel two-cusped manifolds,
/// and the earlier bound `ln 4` for comparison.
pub fn universal_tunnel_bound() -> UniversalTunnelBound {
    let ln2 = ln2_enclosure(24);
    let scale = |k: Rational| RatInterval::new(&ln2.lo * &k, &ln2.hi * &k);
    let bound = scale(rat(7, 4));
    let prior = scale(int(2));
    UniversalTunnelBound {
        formula: "ln(2^(7/4)) = (7/4) ln 2",
        approx: bound.to_f64_mid(),
        prior_approx: prior.to_f64_mid(),
        ln2,
        bound,
        prior_bound: prior,
    }
}
