//! The waist-size theorem driver: exact special-point algebra, segment
//! certificates, strip coverage and the three-corner case analysis.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bank::{self, by_name, BankEntry, Membership};
use crate::error::{Error, Result};
use crate::exact::rational::{as_string, dyadic_ceil, int, pow2, rat, root_lower};
use crate::exact::{RatInterval, Rational, Sign, TowerElement};
use crate::interval::{
    adaptive_cover, certify_sign_on_segment, replay, Counterexample, CoverOptions,
    CoverageCertificate, EndpointPolicy, ExactBox, Exclusion, NamedPredicate, ReplayReport,
    SegmentVerdict, SignGoal,
};
use crate::points::{special_point, PointId, ENCLOSURE_BITS};

/// Predicates whose violation covers the strip.
pub const COVER_PREDICATES: [&str; 4] = ["lower-e", "upper-e", "y", "v"];

/// Largest disk around (1, √2) the coverage may skip. Inside it the claim
/// rests on the chord and slope checks, which are only local.
pub fn max_exclusion_radius() -> Rational {
    rat(1, 100)
}

/// Bits used when rounding the strip's right edge up to a dyadic.
const EDGE_BITS: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremParams {
    pub delta: Rational,
    pub exclusion_radius: Rational,
    pub min_box: Rational,
    pub budget: u64,
    pub jobs: usize,
}

impl Default for TheoremParams {
    fn default() -> Self {
        TheoremParams {
            delta: rat(1, 1000),
            exclusion_radius: rat(1, 100),
            min_box: pow2(-20),
            budget: 10_000_000,
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialPointCheck {
    pub point: PointId,
    pub coordinates: &'static str,
    pub inequality: &'static str,
    pub expected: TowerElement,
    pub value: TowerElement,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentCheck {
    pub name: String,
    pub claim: String,
    pub outcome: CheckOutcome,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CheckOutcome {
    Segment(SegmentVerdict),
    Slope {
        value: TowerElement,
        approx: f64,
        compared_to: Option<RatInterval>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageSummary {
    pub region: ExactBox,
    #[serde(with = "as_string")]
    pub delta: Rational,
    #[serde(with = "as_string")]
    pub exclusion_radius: Rational,
    #[serde(with = "as_string")]
    pub min_box: Rational,
    pub complete: bool,
    pub leaves: usize,
    pub boxes_examined: u64,
    pub witness_counts: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub point: PointId,
    pub coordinates: &'static str,
    pub entries: Vec<BankEntry>,
    pub violated: Vec<&'static str>,
    pub equalities: Vec<&'static str>,
    pub verdict: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub special_points: Vec<SpecialPointCheck>,
    pub segment_checks: Vec<SegmentCheck>,
    pub coverage: CoverageSummary,
    pub case_analysis: Vec<CaseReport>,
    pub verdict: Verdict,
}

impl TheoremReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Every exact vanishing (or value) claim at the named points.
pub fn verify_special_points() -> Result<Vec<SpecialPointCheck>> {
    let zero = TowerElement::zero;
    let claims: [(PointId, &str, TowerElement); 11] = [
        (PointId::UpperMeetsV, "upper-e", zero()),
        (PointId::UpperMeetsV, "v", zero()),
        (PointId::I, "upper-e", zero()),
        (PointId::I, "v", zero()),
        (PointId::II, "lower-e", zero()),
        (PointId::II, "y", zero()),
        (PointId::III, "y", zero()),
        (PointId::III, "v", zero()),
        (PointId::III, "m", zero()),
        (PointId::I, "k", TowerElement::from_int(-1)),
        (PointId::II, "s", TowerElement::from_int(-1)),
    ];
    claims
        .into_iter()
        .map(|(id, name, expected)| {
            let def = by_name(name)?;
            let value = bank::eval_exact(def, &special_point(id).exact)?;
            Ok(SpecialPointCheck {
                point: id,
                coordinates: id.coordinates(),
                inequality: def.name,
                passed: value == expected,
                expected,
                value,
            })
        })
        .collect()
}

/// Slope of the chord from (1, √2) to point I, enclosed.
pub fn slope_of_j() -> RatInterval {
    let p0 = special_point(PointId::UpperMeetsV);
    let p1 = special_point(PointId::I);
    let dw = &p1.w - &p0.w;
    let de = &p1.e - &p0.e;
    de.div(&dw).expect("the chord is not vertical")
}

/// Sign certificates along the chord j and the slope comparisons at its ends.
pub fn verify_segments() -> Result<Vec<SegmentCheck>> {
    let start = special_point(PointId::UpperMeetsV).as_endpoint();
    let end = special_point(PointId::I).as_endpoint();
    let open = EndpointPolicy::ExcludeRadius(rat(1, 1000));
    let closed = EndpointPolicy::ExcludeRadius(Rational::zero());
    let mut checks = Vec::new();

    for name in ["upper-e", "v"] {
        let lhs = &by_name(name)?.lhs;
        let verdict =
            certify_sign_on_segment(lhs, &start, &end, SignGoal::StrictlyNegative, &open)?;
        let passed = match &verdict {
            SegmentVerdict::Certified(c) => c.endpoint_values.iter().all(TowerElement::is_zero),
            SegmentVerdict::Inconclusive { .. } => false,
        };
        checks.push(SegmentCheck {
            name: format!("j/{name}"),
            claim: format!("{name} < 0 on the open chord j from (1, sqrt2) to I, endpoints within 1/1000 excluded"),
            outcome: CheckOutcome::Segment(verdict),
            passed,
        });
    }

    let v = &by_name("v")?.lhs;
    let verdict = certify_sign_on_segment(v, &start, &end, SignGoal::StrictlyNegative, &closed)?;
    checks.push(SegmentCheck {
        name: "j/v-closed".into(),
        claim: "the closed chord admits no strict sign for v (both ends are common zeros)".into(),
        passed: !verdict.is_certified(),
        outcome: CheckOutcome::Segment(verdict),
    });

    let j = slope_of_j();
    let at_start = v.implicit_slope(&start.exact)?;
    let half_sqrt2 = TowerElement::sqrt2().scale(&rat(1, 2));
    let enc = at_start.enclosure(ENCLOSURE_BITS);
    let passed = at_start == half_sqrt2 && j.width() < rat(1, 1_000_000) && enc.lo > j.hi;
    checks.push(SegmentCheck {
        name: "slope/v-at-(1,sqrt2)".into(),
        claim: "slope of the v-curve at (1, sqrt2) is exactly 1/sqrt2 and exceeds the slope of j"
            .into(),
        outcome: CheckOutcome::Slope {
            approx: at_start.to_f64(),
            value: at_start,
            compared_to: Some(j),
        },
        passed,
    });

    let at_end = v.implicit_slope(&end.exact)?;
    checks.push(SegmentCheck {
        name: "slope/v-at-I".into(),
        claim: "slope of the v-curve at I is negative".into(),
        passed: at_end.is_negative(),
        outcome: CheckOutcome::Slope {
            approx: at_end.to_f64(),
            value: at_end,
            compared_to: None,
        },
    });
    Ok(checks)
}

/// `[1, w_hi] × [1/2, 2]` with `w_hi` the dyadic just above `∜2 − δ`.
pub fn main_region(delta: &Rational) -> Result<ExactBox> {
    if !delta.is_positive() || (Rational::one() + delta).pow(4) >= int(2) {
        return Err(Error::InvalidArgument(format!(
            "delta must satisfy 0 < delta < 2^(1/4) - 1, got {delta}"
        )));
    }
    let w_hi = dyadic_ceil(&(root_lower(&int(2), 4, 80) - delta), EDGE_BITS);
    if w_hi.pow(4) >= int(2) {
        return Err(Error::InvalidArgument(format!(
            "delta {delta} is below the strip edge resolution"
        )));
    }
    ExactBox::new(int(1), w_hi, rat(1, 2), int(2))
}

pub fn main_predicates() -> Vec<NamedPredicate> {
    COVER_PREDICATES
        .iter()
        .map(|n| NamedPredicate::new(*n, by_name(n).expect("bank name").lhs.clone()))
        .collect()
}

/// The disk around (1, √2), where the upper-e and v curves cross.
pub fn main_exclusion(radius: Rational) -> Exclusion {
    Exclusion {
        center_w: TowerElement::one(),
        center_e: TowerElement::sqrt2(),
        radius,
    }
}

/// Runs only the strip coverage.
pub fn certify_strip(params: &TheoremParams) -> Result<(CoverageCertificate, u64)> {
    if !params.exclusion_radius.is_positive() || params.exclusion_radius > max_exclusion_radius() {
        return Err(Error::InvalidArgument(format!(
            "exclusion radius must lie in (0, 1/100], got {}",
            params.exclusion_radius
        )));
    }
    let region = main_region(&params.delta)?;
    let options = CoverOptions {
        min_box: params.min_box.clone(),
        budget: params.budget,
        jobs: params.jobs,
        ..CoverOptions::default()
    };
    let run = adaptive_cover(
        &region,
        &main_predicates(),
        &[main_exclusion(params.exclusion_radius.clone())],
        &options,
    )?;
    let mut cert = run.certificate;
    cert.delta = Some(params.delta.clone());
    Ok((cert, run.boxes_examined))
}

/// Exact values of all eight inequalities at I, II and III.
pub fn case_analysis() -> Result<Vec<CaseReport>> {
    [PointId::I, PointId::II, PointId::III]
        .into_iter()
        .map(|id| {
            let entries = bank::evaluate_exact(&special_point(id).exact)?;
            let pick = |m: Membership| {
                entries
                    .iter()
                    .filter(|e| matches!(&e.value, bank::EntryValue::Exact { membership, .. } if *membership == m))
                    .map(|e| e.name)
                    .collect::<Vec<_>>()
            };
            let violated = pick(Membership::Violated);
            let equalities = pick(Membership::Equality);
            let (passed, verdict) = match id {
                PointId::I => (
                    violated == ["k"],
                    "k-inequality violated (k = -1): the configuration at I is inadmissible".to_string(),
                ),
                PointId::II => (
                    violated == ["s"] && equalities.contains(&"lower-e"),
                    "s-inequality violated (s = -1) with lower-e = 0: e is minimal, the configuration at II is degenerate"
                        .to_string(),
                ),
                _ => (
                    violated.is_empty() && equalities == ["v", "y", "m"],
                    "all inequalities hold with y = v = m = 0: III is the only admissible corner".to_string(),
                ),
            };
            Ok(CaseReport { point: id, coordinates: id.coordinates(), entries, violated, equalities, verdict, passed })
        })
        .collect()
}

/// Runs every check. The coverage certificate is returned even when a
/// check fails (it then carries the counterexample, or is `None` if the
/// subdivision itself aborted).
pub fn certify_main_theorem(
    params: &TheoremParams,
) -> Result<(TheoremReport, Option<CoverageCertificate>)> {
    let special_points = verify_special_points()?;
    let segment_checks = verify_segments()?;
    let case_analysis = case_analysis()?;
    let region = main_region(&params.delta)?;

    let (coverage, cert) = match certify_strip(params) {
        Ok((cert, examined)) => (
            CoverageSummary {
                region,
                delta: params.delta.clone(),
                exclusion_radius: params.exclusion_radius.clone(),
                min_box: params.min_box.clone(),
                complete: cert.complete,
                leaves: cert.leaves.len(),
                boxes_examined: examined,
                witness_counts: cert.witness_counts(),
                counterexamples: cert.counterexamples.clone(),
                error: None,
            },
            Some(cert),
        ),
        Err(err @ Error::BudgetExceeded { .. }) => (
            CoverageSummary {
                region,
                delta: params.delta.clone(),
                exclusion_radius: params.exclusion_radius.clone(),
                min_box: params.min_box.clone(),
                complete: false,
                leaves: 0,
                boxes_examined: params.budget,
                witness_counts: BTreeMap::new(),
                counterexamples: Vec::new(),
                error: Some(err.to_string()),
            },
            None,
        ),
        Err(other) => return Err(other),
    };

    let mut failures = Vec::new();
    for c in special_points.iter().filter(|c| !c.passed) {
        failures.push(format!(
            "{} at {}: expected {}, got {}",
            c.inequality,
            c.point.label(),
            c.expected,
            c.value
        ));
    }
    for c in segment_checks.iter().filter(|c| !c.passed) {
        failures.push(format!("{}: {}", c.name, c.claim));
    }
    if !coverage.complete {
        failures.push(match (coverage.counterexamples.first(), &coverage.error) {
            (Some(ce), _) => format!(
                "coverage: box [{}, {}] x [{}, {}] has no violated predicate",
                ce.region.w_lo, ce.region.w_hi, ce.region.e_lo, ce.region.e_hi
            ),
            (None, Some(e)) => format!("coverage: {e}"),
            (None, None) => "coverage: incomplete".into(),
        });
    }
    for c in case_analysis.iter().filter(|c| !c.passed) {
        failures.push(format!(
            "case {}: unexpected inequality pattern",
            c.point.label()
        ));
    }
    let verdict = Verdict {
        passed: failures.is_empty(),
        failures,
    };
    Ok((
        TheoremReport {
            special_points,
            segment_checks,
            coverage,
            case_analysis,
            verdict,
        },
        cert,
    ))
}

/// Replays a stored strip certificate and checks that it certifies the
/// theorem's claim: the bank's predicates, the strip shape and the disk at
/// (1, √2).
pub fn replay_theorem_certificate(cert: &CoverageCertificate) -> Result<ReplayReport> {
    let reject = |m: String| Err(Error::CertificateRejected(m));
    let expected = main_predicates();
    if cert.predicates != expected {
        return reject("predicates differ from the inequality bank".into());
    }
    let Some(delta) = &cert.delta else {
        return reject("certificate does not record delta".into());
    };
    if cert.region != main_region(delta)? {
        return reject("region is not the strip for the recorded delta".into());
    }
    match cert.exclusions.as_slice() {
        [disk]
            if disk.center_w == TowerElement::one() && disk.center_e == TowerElement::sqrt2() =>
        {
            if disk.radius > max_exclusion_radius() {
                return reject(format!("exclusion radius {} exceeds 1/100", disk.radius));
            }
        }
        _ => return reject("exclusions must be a single disk centered at (1, sqrt2)".into()),
    }
    replay(cert)
}

/// Sign of `1/√2 − slope(j)`, decided by enclosure.
pub fn slope_gap_sign() -> Sign {
    let j = slope_of_j();
    let s = TowerElement::sqrt2()
        .scale(&rat(1, 2))
        .enclosure(ENCLOSURE_BITS);
    if s.lo > j.hi {
        Sign::Positive
    } else if s.hi < j.lo {
        Sign::Negative
    } else {
        Sign::Zero
    }
}
