use num_traits::Zero;
use waistcert_core::exact::rational::rat;
use waistcert_core::exact::{int, Rational, TowerElement};
use waistcert_core::interval::{adaptive_cover, CoverOptions, ExactBox, LeafStatus};
use waistcert_core::theorem::*;
use waistcert_core::Error;

/// Leaf count of the default strip certificate, fixed when the certifier was built.
const DEFAULT_LEAVES: usize = 3435;

fn contains_point(b: &ExactBox, w: &TowerElement, e: &TowerElement) -> bool {
    b.contains_tower(w, e)
}

#[test]
fn default_theorem_passes_and_replays() {
    let (report, cert) = certify_main_theorem(&TheoremParams::default()).unwrap();
    assert!(report.verdict.passed, "{:?}", report.verdict.failures);
    let cert = cert.unwrap();
    assert!(cert.complete);
    assert_eq!(cert.leaves.len(), DEFAULT_LEAVES);
    let back = waistcert_core::interval::CoverageCertificate::from_json(&cert.to_json()).unwrap();
    let replayed = replay_theorem_certificate(&back).unwrap();
    assert_eq!(replayed.leaves_checked, DEFAULT_LEAVES);
    assert_eq!(replayed.witness_counts, cert.witness_counts());
    let area: Rational = cert.leaves.iter().map(|l| l.region.area()).sum();
    assert_eq!(area, cert.region.area());
}

#[test]
fn genuine_zero_is_found_without_the_disk() {
    let region = main_region(&rat(1, 1000)).unwrap();
    let run = adaptive_cover(&region, &main_predicates(), &[], &CoverOptions::default()).unwrap();
    let cert = run.certificate;
    assert!(!cert.complete);
    let (one, sqrt2) = (TowerElement::one(), TowerElement::sqrt2());
    assert!(cert
        .counterexamples
        .iter()
        .any(|c| contains_point(&c.region, &one, &sqrt2)));
    // every uncovered box hugs the common zero
    let disk = main_exclusion(rat(1, 100_000));
    for c in &cert.counterexamples {
        let (w, e) = (&c.region.w_lo, &c.region.e_lo);
        assert!(
            disk.contains_box(&ExactBox::new(w.clone(), w.clone(), e.clone(), e.clone()).unwrap()),
            "{}",
            c.region
        );
    }
    let parallel = CoverOptions {
        jobs: 4,
        ..CoverOptions::default()
    };
    let again = adaptive_cover(&region, &main_predicates(), &[], &parallel)
        .unwrap()
        .certificate;
    assert_eq!(again.to_json(), cert.to_json());
}

#[test]
fn two_e_bounds_alone_do_not_cover() {
    let region = main_region(&rat(1, 1000)).unwrap();
    let preds: Vec<_> = main_predicates()
        .into_iter()
        .filter(|p| p.name.ends_with("-e"))
        .collect();
    assert_eq!(preds.len(), 2);
    let run = adaptive_cover(
        &region,
        &preds,
        &[main_exclusion(rat(1, 100))],
        &CoverOptions::default(),
    )
    .unwrap();
    assert!(run.certificate.counterexample().is_some());
}

#[test]
fn shrinking_delta_still_certifies() {
    let mut delta = rat(1, 1000);
    while delta >= rat(1, 10_000) {
        let params = TheoremParams {
            delta: delta.clone(),
            ..TheoremParams::default()
        };
        let (cert, _) = certify_strip(&params).unwrap();
        assert!(cert.complete, "delta = {delta}");
        delta /= int(2);
    }
}

#[test]
fn tampered_certificates_are_rejected() {
    let (cert, _) = certify_strip(&TheoremParams::default()).unwrap();

    let mut bad = cert.clone();
    let leaf = bad
        .leaves
        .iter_mut()
        .find(|l| l.status == LeafStatus::Witness)
        .unwrap();
    leaf.bound_hi = Some(leaf.bound_hi.unwrap() * 0.5);
    assert!(replay_theorem_certificate(&bad).is_err());

    let mut bad = cert.clone();
    bad.predicates[3].polynomial = bad.predicates[3].polynomial.scale(&int(2));
    assert!(matches!(
        replay_theorem_certificate(&bad),
        Err(Error::CertificateRejected(_))
    ));

    let mut bad = cert.clone();
    bad.exclusions[0].center_e = TowerElement::from_int(1);
    assert!(matches!(
        replay_theorem_certificate(&bad),
        Err(Error::CertificateRejected(_))
    ));

    let mut bad = cert;
    bad.delta = None;
    assert!(replay_theorem_certificate(&bad).is_err());
}

#[test]
fn certificate_is_identical_across_job_counts() {
    let json = |jobs| {
        certify_strip(&TheoremParams {
            jobs,
            ..TheoremParams::default()
        })
        .unwrap()
        .0
        .to_json()
    };
    let one = json(1);
    assert_eq!(one, json(4));
    assert_eq!(one, json(8));
}

#[test]
fn invalid_parameters() {
    let p = TheoremParams {
        delta: rat(2, 5),
        ..TheoremParams::default()
    };
    assert!(matches!(
        certify_main_theorem(&p),
        Err(Error::InvalidArgument(_))
    ));
    let p = TheoremParams {
        exclusion_radius: Rational::zero(),
        ..TheoremParams::default()
    };
    assert!(certify_strip(&p).is_err());
}

#[test]
fn budget_exhaustion_is_reported() {
    let p = TheoremParams {
        budget: 100,
        ..TheoremParams::default()
    };
    let (report, cert) = certify_main_theorem(&p).unwrap();
    assert!(!report.verdict.passed);
    assert!(cert.is_none());
    assert!(report.coverage.error.is_some());
}
