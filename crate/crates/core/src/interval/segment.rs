//! Strict-sign certification along straight segments of the (w, e)-plane.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::boxes::IntervalBox;
use super::eval::{CompiledPolynomial, SignGoal};
use super::rounding::Interval;
use crate::error::{Error, Result};
use crate::exact::rational::{as_string, dyadic_floor, pow2, root_upper};
use crate::exact::{RatInterval, Rational, Sign, TowerElement};
use crate::poly::{BivariatePolynomial, ExactPoint};

/// Pieces narrower than this in the segment parameter are not split further.
const MIN_PIECE_BITS: i32 = 40;

/// A segment endpoint: exact coordinates plus rational enclosures of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentEndpoint {
    pub exact: ExactPoint,
    pub w: RatInterval,
    pub e: RatInterval,
}

/// How an endpoint where the polynomial vanishes is handled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndpointPolicy {
    /// Drop the part of the segment within this distance of the endpoint.
    /// A radius of zero asks for the closed segment.
    ExcludeRadius(#[serde(with = "as_string")] Rational),
    /// Bound the directional derivative near the endpoint instead.
    GradientBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EndpointTreatment {
    /// The polynomial is nonzero there and the endpoint is included.
    Closed,
    /// Parameters within `t` of the endpoint are excluded.
    Excluded {
        #[serde(with = "as_string")]
        t: Rational,
    },
    /// The derivative along the segment has a certified sign within `t`.
    Gradient {
        #[serde(with = "as_string")]
        t: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentCertificate {
    pub goal: SignGoal,
    pub start: EndpointTreatment,
    pub end: EndpointTreatment,
    pub endpoint_values: [TowerElement; 2],
    /// Parameter pieces certified by direct enclosure.
    pub pieces: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum SegmentVerdict {
    Certified(SegmentCertificate),
    Inconclusive { reason: String },
}

impl SegmentVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, SegmentVerdict::Certified(_))
    }
}

struct Segment {
    w0: Interval,
    e0: Interval,
    dw: Interval,
    de: Interval,
}

impl Segment {
    fn piece_box(&self, t0: &Rational, t1: &Rational) -> IntervalBox {
        let t = Interval {
            lo: Interval::from_rational(t0).lo,
            hi: Interval::from_rational(t1).hi,
        };
        IntervalBox::new(self.w0 + t * self.dw, self.e0 + t * self.de)
    }
}

/// Certifies the strict sign `goal` of `p` on the open segment from `p0` to
/// `p1` (closed at endpoints where `p` is nonzero).
pub fn certify_sign_on_segment(
    p: &BivariatePolynomial,
    p0: &SegmentEndpoint,
    p1: &SegmentEndpoint,
    goal: SignGoal,
    policy: &EndpointPolicy,
) -> Result<SegmentVerdict> {
    if p0.exact == p1.exact {
        return Err(Error::InvalidArgument("segment endpoints coincide".into()));
    }
    if let EndpointPolicy::ExcludeRadius(r) = policy {
        if r.is_negative() {
            return Err(Error::InvalidArgument(
                "exclusion radius must be nonnegative".into(),
            ));
        }
    }
    let w0 = Interval::from_rat_interval(&p0.w);
    let e0 = Interval::from_rat_interval(&p0.e);
    let seg = Segment {
        w0,
        e0,
        dw: Interval::from_rat_interval(&p1.w) - w0,
        de: Interval::from_rat_interval(&p1.e) - e0,
    };
    let compiled = CompiledPolynomial::new(p);
    let v0 = p.eval_exact(&p0.exact)?;
    let v1 = p.eval_exact(&p1.exact)?;

    let mut treatments = Vec::with_capacity(2);
    for (value, at_start) in [(&v0, true), (&v1, false)] {
        match treat_endpoint(p, &seg, value, at_start, goal, policy, (p0, p1))? {
            Ok(t) => treatments.push(t),
            Err(reason) => return Ok(SegmentVerdict::Inconclusive { reason }),
        }
    }
    let end_t = |t: &EndpointTreatment| match t {
        EndpointTreatment::Closed => Rational::zero(),
        EndpointTreatment::Excluded { t } | EndpointTreatment::Gradient { t } => t.clone(),
    };
    let lo = end_t(&treatments[0]);
    let hi = Rational::one() - end_t(&treatments[1]);
    if lo >= hi {
        return Err(Error::InvalidArgument(
            "endpoint neighborhoods cover the whole segment".into(),
        ));
    }

    let min_piece = pow2(-MIN_PIECE_BITS);
    let two = Rational::from_integer(2.into());
    let mut pieces = 0u64;
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        let bound = compiled.eval(&seg.piece_box(&a, &b));
        if goal.holds(&bound) {
            pieces += 1;
            continue;
        }
        if &b - &a <= min_piece {
            return Ok(SegmentVerdict::Inconclusive {
                reason: format!(
                    "no strict sign on the parameter range [{a}, {b}] (enclosure {bound})"
                ),
            });
        }
        let m = (&a + &b) / &two;
        stack.push((m.clone(), b));
        stack.push((a, m));
    }
    let end = treatments.pop().expect("two treatments");
    let start = treatments.pop().expect("two treatments");
    Ok(SegmentVerdict::Certified(SegmentCertificate {
        goal,
        start,
        end,
        endpoint_values: [v0, v1],
        pieces,
    }))
}

/// `Ok(Ok(treatment))`, or `Ok(Err(reason))` when the endpoint defeats the goal.
#[allow(clippy::too_many_arguments)]
fn treat_endpoint(
    p: &BivariatePolynomial,
    seg: &Segment,
    value: &TowerElement,
    at_start: bool,
    goal: SignGoal,
    policy: &EndpointPolicy,
    ends: (&SegmentEndpoint, &SegmentEndpoint),
) -> Result<std::result::Result<EndpointTreatment, String>> {
    let which = if at_start { "start" } else { "end" };
    match (value.sign(), goal) {
        (Sign::Negative, SignGoal::StrictlyNegative)
        | (Sign::Positive, SignGoal::StrictlyPositive) => return Ok(Ok(EndpointTreatment::Closed)),
        (Sign::Zero, _) => {}
        _ => {
            return Ok(Err(format!(
                "the polynomial has the wrong sign at the {which} point"
            )))
        }
    }
    match policy {
        EndpointPolicy::ExcludeRadius(r) if r.is_zero() => {
            Ok(Err(format!("the polynomial vanishes at the {which} point, so the closed segment has no strict sign")))
        }
        EndpointPolicy::ExcludeRadius(r) => {
            let length = length_upper(ends.0, ends.1);
            let t = dyadic_floor(&(r / &length), 48);
            if t.is_zero() {
                return Err(Error::InvalidArgument("exclusion radius below the parameter resolution".into()));
            }
            Ok(Ok(EndpointTreatment::Excluded { t }))
        }
        EndpointPolicy::GradientBound => {
            let dir = CompiledDirectional::new(p);
            // p(t) − p(end) is ∫D from the start, −∫D toward the end
            let want_negative_derivative = matches!(goal, SignGoal::StrictlyNegative) == at_start;
            for k in 2..=MIN_PIECE_BITS {
                let t = pow2(-k);
                let (a, b) = if at_start { (Rational::zero(), t.clone()) } else { (Rational::one() - &t, Rational::one()) };
                let d = dir.eval(seg, &a, &b);
                let ok = if want_negative_derivative { d.is_negative() } else { d.is_positive() };
                if ok {
                    return Ok(Ok(EndpointTreatment::Gradient { t }));
                }
            }
            Ok(Err(format!("no certified derivative sign near the {which} point")))
        }
    }
}

struct CompiledDirectional {
    pw: CompiledPolynomial,
    pe: CompiledPolynomial,
}

impl CompiledDirectional {
    fn new(p: &BivariatePolynomial) -> Self {
        CompiledDirectional {
            pw: CompiledPolynomial::new(&p.partial_w()),
            pe: CompiledPolynomial::new(&p.partial_e()),
        }
    }

    fn eval(&self, seg: &Segment, a: &Rational, b: &Rational) -> Interval {
        let bx = seg.piece_box(a, b);
        self.pw.eval(&bx) * seg.dw + self.pe.eval(&bx) * seg.de
    }
}

fn length_upper(p0: &SegmentEndpoint, p1: &SegmentEndpoint) -> Rational {
    let sq_hi = |d: RatInterval| {
        let m = d.lo.abs().max(d.hi.abs());
        &m * &m
    };
    let l2 = sq_hi(&p1.w - &p0.w) + sq_hi(&p1.e - &p0.e);
    root_upper(&l2, 2, 64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn endpoint(w: TowerElement, e: TowerElement) -> SegmentEndpoint {
        SegmentEndpoint {
            w: w.enclosure(64),
            e: e.enclosure(64),
            exact: ExactPoint::plain(w, e),
        }
    }

    fn bp(s: &str) -> BivariatePolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn line_below_parabola() {
        // e - w^2 on the chord from (0,0) to (1,1): positive inside, zero at both ends
        let a = endpoint(TowerElement::zero(), TowerElement::zero());
        let b = endpoint(TowerElement::one(), TowerElement::one());
        let p = bp("e - w^2");
        let r = |q| EndpointPolicy::ExcludeRadius(q);
        assert!(
            certify_sign_on_segment(&p, &a, &b, SignGoal::StrictlyPositive, &r(rat(1, 1000)))
                .unwrap()
                .is_certified()
        );
        assert!(
            !certify_sign_on_segment(&p, &a, &b, SignGoal::StrictlyPositive, &r(int(0)))
                .unwrap()
                .is_certified()
        );
        assert!(
            !certify_sign_on_segment(&p, &a, &b, SignGoal::StrictlyNegative, &r(rat(1, 1000)))
                .unwrap()
                .is_certified()
        );
        let g = certify_sign_on_segment(
            &p,
            &a,
            &b,
            SignGoal::StrictlyPositive,
            &EndpointPolicy::GradientBound,
        )
        .unwrap();
        assert!(g.is_certified(), "{g:?}");
    }

    #[test]
    fn closed_endpoints_when_nonzero() {
        let a = endpoint(TowerElement::one(), TowerElement::one());
        let b = endpoint(TowerElement::from_int(2), TowerElement::sqrt2());
        let v = certify_sign_on_segment(
            &bp("w + e"),
            &a,
            &b,
            SignGoal::StrictlyPositive,
            &EndpointPolicy::GradientBound,
        )
        .unwrap();
        match v {
            SegmentVerdict::Certified(c) => {
                assert_eq!(c.start, EndpointTreatment::Closed);
                assert_eq!(c.end, EndpointTreatment::Closed);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn coincident_endpoints_rejected() {
        let a = endpoint(TowerElement::one(), TowerElement::one());
        assert!(certify_sign_on_segment(
            &bp("w"),
            &a,
            &a,
            SignGoal::StrictlyPositive,
            &EndpointPolicy::GradientBound
        )
        .is_err());
    }
}
