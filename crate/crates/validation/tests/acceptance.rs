//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed; exits nonzero if any
//! criterion fails.

use std::path::Path;
use std::time::{Duration, Instant};

use num_traits::One;
use rand::{Rng, SeedableRng};

use waistcert_core::bank::{self, reduce_modulo};
use waistcert_core::catalog::{self, factor_audit, tunnel_bound, universal_tunnel_bound};
use waistcert_core::exact::{int, rat, RatInterval, Rational, TowerElement};
use waistcert_core::horoball::{build_configuration, measured_segment, segment_gap, Branch};
use waistcert_core::interval::{
    adaptive_cover, CoverOptions, EndpointTreatment, Interval, SegmentVerdict,
};
use waistcert_core::points::{special_point, PointId};
use waistcert_core::poly::{
    eliminate_angle, expand_product, five_two_relations, isolate_real_roots, UnivariatePolynomial,
};
use waistcert_core::theorem::{self, CheckOutcome, TheoremParams};

// Tolerances and limits, fixed here and nowhere else.
const FACTOR_AUDIT_TIME: Duration = Duration::from_secs(1);
const ROOT_TIME: Duration = Duration::from_secs(1);
const ROOT_REFERENCE: f64 = 1.150_964_16;
const ROOT_TOLERANCE: f64 = 1e-8;
const COVERAGE_TIME: Duration = Duration::from_secs(60);
const COVERAGE_BUDGET: u64 = 10_000_000;
const TUNNEL_TOLERANCE: f64 = 1e-12;
const UNIVERSAL_REFERENCE: f64 = 1.213_007_637;
const UNIVERSAL_TOLERANCE: f64 = 1e-9;
const SCALE_SAMPLES: usize = 100;
const SIGN_SAMPLES: usize = 1000;
const CALIBRATION_TOLERANCE: f64 = 1e-12;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Runs the command-line driver in-process and returns its exit code.
fn waistcert(args: &[&str]) -> u8 {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    waistcert::run(
        std::iter::once("waistcert").chain(args.iter().copied()),
        &mut out,
        &mut err,
    )
}

fn poly(s: &str) -> UnivariatePolynomial {
    s.parse().expect("polynomial literal")
}

fn factorization_audit() -> Check {
    let start = Instant::now();
    let audit = factor_audit().map_err(|e| e.to_string())?;
    let printed = expand_product(&[
        poly("w - 1"),
        poly("w + 1"),
        poly("w^3 - w^2 + 1"),
        poly("w^6 - w^2 - 1"),
    ]);
    let target = poly("w^14 - 2*w^12 + 2*w^10 - 2*w^8 + 2*w^2 - 1");
    let divisor = expand_product(&[poly("w - 1"), poly("w + 1"), poly("w^6 - w^2 - 1")]);
    let (q, r) = target.div_rem(&divisor).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(
        printed.degree() == Some(11) && audit.printed_degree == 11,
        "printed product is not degree 11",
    )?;
    ensure(
        target.degree() == Some(14) && audit.target_degree == 14,
        "target is not degree 14",
    )?;
    ensure(
        q == poly("w^6 - w^4 + 2*w^2 - 1") && audit.quotient == q,
        format!("quotient {q}"),
    )?;
    ensure(
        r.is_zero() && audit.remainder.is_zero(),
        format!("remainder {r}"),
    )?;
    ensure(elapsed < FACTOR_AUDIT_TIME, format!("took {elapsed:?}"))?;
    Ok(format!(
        "degree 11 != 14; quotient {q}, remainder 0, {elapsed:.1?}"
    ))
}

fn angle_elimination() -> Check {
    let (a, b) = five_two_relations();
    let p = eliminate_angle(&a, &b).map_err(|e| e.to_string())?;
    let uni = p.to_univariate_w().ok_or("result still depends on e")?;
    let expected = poly("w^14 - 2*w^12 + 2*w^10 - 2*w^8 + 2*w^2 - 1");
    ensure(uni == expected, format!("got {uni}"))?;
    Ok(format!("{uni}"))
}

fn root_certification() -> Check {
    let start = Instant::now();
    let p = poly("w^6 - w^2 - 1");
    let roots = isolate_real_roots(&p, &int(1), &int(2), &rat(1, 1_000_000_000))
        .map_err(|e| e.to_string())?;
    ensure(roots.len() == 1, format!("{} roots in (1, 2)", roots.len()))?;
    let root = &roots[0];
    ensure(root.verify(), "isolating interval fails re-verification")?;
    let x = root.as_rat_interval().pow(2);
    let cubic = &(&x.pow(3) - &x) - &RatInterval::point(Rational::one());
    ensure(
        cubic.contains_zero(),
        "squared enclosure misses the plastic-number cubic",
    )?;
    let (_, catalog_value) = catalog::plastic_number_check();
    ensure(
        catalog_value.contains_zero(),
        "catalog enclosure misses the plastic-number cubic",
    )?;
    let elapsed = start.elapsed();
    ensure(elapsed < ROOT_TIME, format!("took {elapsed:?}"))?;
    let mid = root.midpoint_f64();
    let (lo, hi) = (
        Interval::from_rational(&root.lo).lo,
        Interval::from_rational(&root.hi).hi,
    );
    // every point of the enclosure must be within the tolerance of the reference
    let distance = (lo - ROOT_REFERENCE).abs().max((hi - ROOT_REFERENCE).abs());
    ensure(
        distance <= ROOT_TOLERANCE,
        format!("unique root in ({lo:.12}, {hi:.12}) is {distance:.2e} from {ROOT_REFERENCE}, tolerance {ROOT_TOLERANCE:e}"),
    )?;
    Ok(format!(
        "unique root ~ {mid:.12}; squared enclosure satisfies x^3 - x - 1 = 0"
    ))
}

fn special_points() -> Check {
    let checks = theorem::verify_special_points().map_err(|e| e.to_string())?;
    for c in &checks {
        ensure(
            c.passed,
            format!(
                "{} at {}: {} (expected {})",
                c.inequality,
                c.point.label(),
                c.value,
                c.expected
            ),
        )?;
    }
    let wanted = [
        ("upper-e", PointId::UpperMeetsV, 0),
        ("v", PointId::UpperMeetsV, 0),
        ("upper-e", PointId::I, 0),
        ("v", PointId::I, 0),
        ("y", PointId::II, 0),
        ("lower-e", PointId::II, 0),
        ("y", PointId::III, 0),
        ("v", PointId::III, 0),
        ("m", PointId::III, 0),
        ("k", PointId::I, -1),
        ("s", PointId::II, -1),
    ];
    for (name, id, value) in wanted {
        let lhs = &bank::by_name(name).map_err(|e| e.to_string())?.lhs;
        let got = lhs
            .eval_exact(&special_point(id).exact)
            .map_err(|e| e.to_string())?;
        ensure(
            got == TowerElement::from_int(value),
            format!("{name} at {} = {got}", id.label()),
        )?;
    }
    let v = &bank::by_name("v").map_err(|e| e.to_string())?.lhs;
    let slope = v
        .implicit_slope(&special_point(PointId::UpperMeetsV).exact)
        .map_err(|e| e.to_string())?;
    let half_sqrt2 = TowerElement::sqrt2().scale(&rat(1, 2));
    ensure(
        slope == half_sqrt2,
        format!("slope of v at (1, sqrt2) is {slope}"),
    )?;
    Ok(format!(
        "{} exact values and the v slope 1/sqrt2 at (1, sqrt2)",
        wanted.len()
    ))
}

fn five_two_identities() -> Check {
    let subst = poly("w^2");
    let modulus = poly("w^6 - w^2 - 1");
    let red = |n: &str| -> Result<UnivariatePolynomial, String> {
        let lhs = &bank::by_name(n).map_err(|e| e.to_string())?.lhs;
        reduce_modulo(lhs, &subst, &modulus).map_err(|e| e.to_string())
    };
    let v = red("v")?;
    let p = red("p")?;
    let k = red("k")?;
    let s = red("s")?;
    ensure(
        v == UnivariatePolynomial::constant(int(-1)),
        format!("v reduces to {v}"),
    )?;
    ensure(p.is_zero(), format!("p reduces to {p}"))?;
    ensure(k.is_zero(), format!("k reduces to {k}"))?;
    ensure(s == poly("2*w^4 + 4*w^2"), format!("s reduces to {s}"))?;
    Ok("v = -1, p = 0, k = 0, s = 2*w^4 + 4*w^2".into())
}

fn main_coverage(dir: &Path) -> Check {
    let start = Instant::now();
    let out = waistcert(&["theorem", "--out-dir", dir.to_str().unwrap()]);
    let elapsed = start.elapsed();
    ensure(out == waistcert::EXIT_OK, format!("theorem exited {out}"))?;
    ensure(elapsed < COVERAGE_TIME, format!("theorem took {elapsed:?}"))?;
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("theorem_report.json")).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let examined = report["coverage"]["boxes_examined"]
        .as_u64()
        .unwrap_or(u64::MAX);
    ensure(
        report["coverage"]["complete"] == true,
        "coverage incomplete",
    )?;
    ensure(
        examined <= COVERAGE_BUDGET,
        format!("{examined} boxes examined"),
    )?;

    let params = TheoremParams::default();
    let region = theorem::main_region(&params.delta).map_err(|e| e.to_string())?;
    let fourth_root = 2f64.powf(0.25);
    let w_hi = Interval::from_rational(&region.w_hi);
    ensure(
        region.w_lo == int(1) && region.e_lo == rat(1, 2) && region.e_hi == int(2),
        "wrong strip",
    )?;
    ensure(
        w_hi.lo >= fourth_root - 1e-3 && w_hi.hi < fourth_root,
        format!("strip edge {w_hi}"),
    )?;
    ensure(
        params.exclusion_radius == rat(1, 100),
        "disk radius is not 1/100",
    )?;

    let cert = dir.join("coverage_certificate.json");
    let replayed = waistcert(&["replay", "--certificate", cert.to_str().unwrap()]);
    ensure(
        replayed == waistcert::EXIT_OK,
        "replay of the stored certificate failed",
    )?;

    let (one, sqrt2) = (TowerElement::one(), TowerElement::sqrt2());
    let no_disk = adaptive_cover(
        &region,
        &theorem::main_predicates(),
        &[],
        &CoverOptions::default(),
    )
    .map_err(|e| e.to_string())?
    .certificate;
    ensure(
        no_disk
            .counterexamples
            .iter()
            .any(|c| c.region.contains_tower(&one, &sqrt2)),
        "without the disk no counterexample box contains (1, sqrt2)",
    )?;
    let e_only: Vec<_> = theorem::main_predicates()
        .into_iter()
        .filter(|p| p.name.ends_with("-e"))
        .collect();
    let weak = adaptive_cover(
        &region,
        &e_only,
        &[theorem::main_exclusion(rat(1, 100))],
        &CoverOptions::default(),
    )
    .map_err(|e| e.to_string())?
    .certificate;
    ensure(
        weak.counterexample().is_some(),
        "lower-e and upper-e alone cover the strip",
    )?;
    Ok(format!(
        "{} leaves, {examined} boxes, {elapsed:.1?}; replay exit 0; counterexamples without the disk and with two predicates",
        report["coverage"]["leaves"]
    ))
}

fn segment_j() -> Check {
    let checks = theorem::verify_segments().map_err(|e| e.to_string())?;
    let (a, b) = (
        special_point(PointId::UpperMeetsV),
        special_point(PointId::I),
    );
    let chord = (a.w_f64() - b.w_f64()).hypot(a.e_f64() - b.e_f64());
    let mut certified = 0;
    for name in ["j/upper-e", "j/v"] {
        let check = checks
            .iter()
            .find(|c| c.name == name)
            .ok_or(format!("{name} missing"))?;
        let CheckOutcome::Segment(SegmentVerdict::Certified(cert)) = &check.outcome else {
            return Err(format!("{name} not certified"));
        };
        ensure(
            cert.endpoint_values.iter().all(TowerElement::is_zero),
            format!("{name}: endpoint values nonzero"),
        )?;
        for end in [&cert.start, &cert.end] {
            // the exclusion is stored as a parameter length on the chord
            let EndpointTreatment::Excluded { t } = end else {
                return Err(format!("{name}: endpoint not excluded"));
            };
            let radius = Interval::from_rational(t).mid() * chord;
            ensure(
                (radius - 1e-3).abs() < 1e-9,
                format!("{name}: exclusion radius {radius:e}"),
            )?;
        }
        certified += 1;
    }
    Ok(format!(
        "{certified} strict-sign certificates on the open chord, endpoint values exactly 0"
    ))
}

fn tunnel_bounds() -> Check {
    let ln2 = std::f64::consts::LN_2;
    let t = tunnel_bound(2f64.powf(0.25), 1.0).map_err(|e| e.to_string())?;
    ensure(
        (t.bound - 1.75 * ln2).abs() <= TUNNEL_TOLERANCE,
        format!("tunnel_bound(2^(1/4), 1) = {}", t.bound),
    )?;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x7011e1);
    for _ in 0..SCALE_SAMPLES {
        let a0: f64 = rng.gen_range(0.1..10.0);
        let b0 = a0 * rng.gen_range(0.05..1.0);
        let t_scale = (b0 / a0).sqrt() * rng.gen_range(1.0..5.0);
        let base = tunnel_bound(a0, b0).map_err(|e| e.to_string())?.bound;
        let scaled = tunnel_bound(t_scale * a0, b0 / t_scale)
            .map_err(|e| e.to_string())?
            .bound;
        ensure(
            (base - scaled).abs() <= 1e-12 * base.abs().max(1.0),
            format!("scale: {base} vs {scaled}"),
        )?;
    }

    let u = universal_tunnel_bound();
    ensure(
        u.bound.hi < u.prior_bound.lo,
        "universal bound is not below ln 4",
    )?;
    let width = Interval::from_rational(&u.bound.width()).hi;
    ensure(width <= 1e-12, format!("enclosure width {width:e}"))?;
    let distance = (u.approx - UNIVERSAL_REFERENCE).abs();
    ensure(
        distance <= UNIVERSAL_TOLERANCE,
        format!("universal bound {:.13} is {distance:.2e} from {UNIVERSAL_REFERENCE}, tolerance {UNIVERSAL_TOLERANCE:e}", u.approx),
    )?;
    Ok(format!(
        "ln(2^(7/4)) = {:.12} < ln 4; scale invariance on {SCALE_SAMPLES} inputs",
        u.approx
    ))
}

fn sign_consistency() -> Check {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let lhs = |n: &str| {
        bank::by_name(n)
            .map(|d| d.lhs.clone())
            .map_err(|e| e.to_string())
    };
    let polys = [("v", lhs("v")?), ("y", lhs("y")?), ("k", lhs("k")?)];
    for _ in 0..SIGN_SAMPLES {
        let w: f64 = rng.gen_range(1.0..1.5);
        let e_lo = (1.0 / w).max(w - 1.0 / w);
        let e: f64 = rng.gen_range(e_lo..(w * w + 1.0 / (w * w)).sqrt());
        let c =
            build_configuration(w, e, Branch::CounterClockwise).map_err(|err| err.to_string())?;
        for (name, p) in &polys {
            let gap = segment_gap(&c, name).map_err(|err| err.to_string())?;
            let value = p.eval_f64(w, e);
            // skip samples too close to a curve for f64 to decide either sign
            if gap.abs() < 1e-9 || value.abs() < 1e-9 {
                continue;
            }
            ensure(
                gap.signum() == value.signum(),
                format!("{name} at ({w}, {e}): gap {gap}, lhs {value}"),
            )?;
        }
    }

    let r = 2f64.powf(0.25);
    let at_iii = build_configuration(r, r, Branch::CounterClockwise).map_err(|e| e.to_string())?;
    let y_gap = segment_gap(&at_iii, "y").map_err(|e| e.to_string())?;
    ensure(
        y_gap.abs() <= CALIBRATION_TOLERANCE,
        format!("y gap at III = {y_gap:e}"),
    )?;

    let w52 = isolate_real_roots(&poly("w^6 - w^2 - 1"), &int(1), &int(2), &rat(1, 1 << 56))
        .map_err(|e| e.to_string())?[0]
        .midpoint_f64();
    let at_52 =
        build_configuration(w52, w52 * w52, Branch::CounterClockwise).map_err(|e| e.to_string())?;
    let v_gap = segment_gap(&at_52, "v").map_err(|e| e.to_string())?;
    let v_len = measured_segment(&at_52, "v").map_err(|e| e.to_string())?;
    ensure(
        v_gap.abs() <= CALIBRATION_TOLERANCE,
        format!("v gap at the 5_2 point = {v_gap:.6e} (v length {v_len:.1e}; v-lhs = -1 there)"),
    )?;
    Ok(format!("{SIGN_SAMPLES} samples consistent on the counter-clockwise branch; y gap at III {y_gap:.1e}"))
}

fn determinism() -> Check {
    let mut certs = Vec::new();
    for jobs in ["1", "4", "8"] {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let out = waistcert(&[
            "theorem",
            "--jobs",
            jobs,
            "--out-dir",
            dir.path().to_str().unwrap(),
        ]);
        ensure(
            out == waistcert::EXIT_OK,
            format!("theorem --jobs {jobs} failed"),
        )?;
        certs.push(
            std::fs::read(dir.path().join("coverage_certificate.json"))
                .map_err(|e| e.to_string())?,
        );
    }
    ensure(
        certs.windows(2).all(|w| w[0] == w[1]),
        "certificates differ between job counts",
    )?;
    Ok(format!(
        "{} bytes, identical for --jobs 1, 4, 8",
        certs[0].len()
    ))
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let criteria: Vec<Criterion> = vec![
        ("factorization audit", Box::new(factorization_audit)),
        ("angle elimination", Box::new(angle_elimination)),
        ("root certification", Box::new(root_certification)),
        ("exact special points", Box::new(special_points)),
        ("5_2 parameter identities", Box::new(five_two_identities)),
        (
            "main coverage certificate",
            Box::new(|| main_coverage(dir.path())),
        ),
        ("segment-j certificates", Box::new(segment_j)),
        ("tunnel bounds", Box::new(tunnel_bounds)),
        (
            "geometry-algebra sign consistency",
            Box::new(sign_consistency),
        ),
        ("determinism across job counts", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
