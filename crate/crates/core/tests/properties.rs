//! Randomized invariants across the exact, polynomial, interval, geometry and
//! catalog layers.

use num_traits::{One, Zero};
use proptest::prelude::*;

use waistcert_core::bank;
use waistcert_core::catalog::tunnel_bound;
use waistcert_core::exact::{rat, Rational, TowerElement};
use waistcert_core::horoball::neighbor_balls;
use waistcert_core::interval::{eval_on_box, CompiledPolynomial, ExactBox, Interval, IntervalBox};
use waistcert_core::poly::{
    expand_product, isolate_real_roots, BivariatePolynomial, ExactPoint, UnivariatePolynomial,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=24).prop_map(|(n, d)| rat(n, d))
}

fn tower() -> impl Strategy<Value = TowerElement> {
    (rational(), rational(), rational(), rational())
        .prop_map(|(a, b, c, d)| TowerElement::new(a, b, c, d))
}

fn univariate(max_len: usize) -> impl Strategy<Value = UnivariatePolynomial> {
    prop::collection::vec(rational(), 1..=max_len).prop_map(UnivariatePolynomial::new)
}

fn bivariate() -> impl Strategy<Value = BivariatePolynomial> {
    prop::collection::vec(((-9i64..=9), 0u32..=6, 0u32..=6), 1..=8)
        .prop_map(|terms| BivariatePolynomial::from_ints(&terms))
}

/// A rational in `[lo, hi]` with a denominator of at most 2^12.
fn rational_in(lo: f64, hi: f64) -> impl Strategy<Value = Rational> {
    let (a, b) = ((lo * 4096.0) as i64, (hi * 4096.0) as i64);
    (a..=b).prop_map(|n| rat(n, 4096))
}

fn ulp_slack(x: &Interval) -> f64 {
    (x.lo.abs().max(x.hi.abs()) + 1.0) * 1e-12
}

proptest! {
    // 1000 boxes with 100 points each
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn box_enclosures_contain_exact_values(
        p in bivariate(),
        corner in (rational_in(0.5, 1.9), rational_in(0.5, 1.9)),
        size in (1i64..=64, 1i64..=64),
        samples in prop::collection::vec((0i64..=100, 0i64..=100), 100),
    ) {
        let (w_lo, e_lo) = corner;
        let w_hi = &w_lo + rat(size.0, 256);
        let e_hi = &e_lo + rat(size.1, 256);
        let b = ExactBox::new(w_lo.clone(), w_hi.clone(), e_lo.clone(), e_hi.clone()).unwrap();
        let enclosure = eval_on_box(&p, &b.to_interval_box());
        let compiled = CompiledPolynomial::new(&p).eval(&b.to_interval_box());
        for (s, t) in samples {
            let w = &w_lo + (&w_hi - &w_lo) * rat(s, 100);
            let e = &e_lo + (&e_hi - &e_lo) * rat(t, 100);
            let exact = p.eval_exact(&ExactPoint::plain(w, e)).unwrap();
            prop_assert!(exact.is_rational());
            let value = exact.enclosure(64).lo;
            prop_assert!(enclosure.contains_rational(&value), "{} outside {}", value, enclosure);
            prop_assert!(compiled.contains_rational(&value), "{} outside compiled {}", value, compiled);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tower_field_axioms(a in tower(), b in tower(), c in tower()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a - &a, TowerElement::zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inverse().unwrap(), TowerElement::one());
        }
    }

    #[test]
    fn tower_sign_agrees_with_fine_enclosure(a in tower()) {
        // 340 bits is a little over 100 decimal digits
        let enc = a.enclosure(340);
        prop_assert!(enc.contains_zero() || enc.is_positive() == a.is_positive());
        prop_assert!(enc.contains_zero() || enc.is_negative() == a.is_negative());
        prop_assert_eq!(a.is_zero(), enc.lo.is_zero() && enc.hi.is_zero());
    }

    #[test]
    fn tower_text_round_trips(a in tower()) {
        let back: TowerElement = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn division_reconstructs_the_dividend(p in univariate(9), d in univariate(5)) {
        prop_assume!(!d.is_zero());
        let (q, r) = p.div_rem(&d).unwrap();
        prop_assert_eq!(&expand_product(&[q, d.clone()]) + &r, p);
        prop_assert!(r.is_zero() || r.degree() < d.degree());
    }

    #[test]
    fn isolation_finds_every_root(
        roots in prop::collection::vec((-40i64..=40, 1i64..=8), 1..=6),
        extra_multiplicity in 0usize..3,
    ) {
        let roots: Vec<Rational> = roots.into_iter().map(|(n, d)| rat(n, d)).collect();
        let mut factors: Vec<UnivariatePolynomial> =
            roots.iter().map(|r| UnivariatePolynomial::new(vec![-r.clone(), Rational::one()])).collect();
        factors.extend(factors.iter().take(extra_multiplicity).cloned().collect::<Vec<_>>());
        let p = expand_product(&factors);

        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        let found = isolate_real_roots(&p, &rat(-41, 1), &rat(41, 1), &rat(1, 1000)).unwrap();
        prop_assert_eq!(found.len(), distinct.len());
        for (iv, r) in found.iter().zip(&distinct) {
            prop_assert!(iv.lo < *r && *r < iv.hi, "{} not in ({}, {})", r, iv.lo, iv.hi);
            prop_assert!(iv.width() <= rat(1, 1000));
            prop_assert!(iv.verify());
        }
    }

    #[test]
    fn splitting_never_widens(
        p in bivariate(),
        corner in (rational_in(0.5, 1.9), rational_in(0.5, 1.9)),
        size in (1i64..=64, 1i64..=64),
    ) {
        let b = ExactBox::new(
            corner.0.clone(),
            &corner.0 + rat(size.0, 256),
            corner.1.clone(),
            &corner.1 + rat(size.1, 256),
        )
        .unwrap();
        let compiled = CompiledPolynomial::new(&p);
        let parent = compiled.eval(&b.to_interval_box());
        let (left, right) = b.bisect();
        for child in [left, right] {
            let c = compiled.eval(&child.to_interval_box());
            let slack = ulp_slack(&parent);
            prop_assert!(c.lo >= parent.lo - slack && c.hi <= parent.hi + slack, "{} not within {}", c, parent);
        }
    }

    #[test]
    fn tunnel_bound_depends_only_on_the_product(
        a0 in 0.05f64..20.0,
        ratio in 0.01f64..1.0,
        t in 0.0f64..1.0,
    ) {
        let b0 = a0 * ratio;
        // keep t·a0 ≥ b0/t so the precondition still holds after rescaling
        let t_min = (b0 / a0).sqrt();
        let t = t_min + t * 4.0;
        let base = tunnel_bound(a0, b0).unwrap();
        let scaled = tunnel_bound(t * a0, b0 / t).unwrap();
        prop_assert!((base.bound - scaled.bound).abs() <= 1e-12 * base.bound.abs().max(1.0));
        prop_assert!((base.w - scaled.w).abs() <= 1e-12 * base.w);
        // decreasing in each argument
        prop_assert!(tunnel_bound(a0 * 1.5, b0).unwrap().bound < base.bound);
        if b0 * 1.5 <= a0 {
            prop_assert!(tunnel_bound(a0, b0 * 1.5).unwrap().bound < base.bound);
        }
    }

    #[test]
    fn neighbor_rule_composes_to_the_third_power(w in 1.0f64..2.0) {
        let (offset, diameter) = neighbor_balls(1.0, w).unwrap();
        prop_assert!((offset - 1.0 / w).abs() < 1e-15 && (diameter - 1.0 / (w * w)).abs() < 1e-15);
        let (offset3, diameter3) = neighbor_balls(diameter, w).unwrap();
        prop_assert!((offset3 - w.powi(-3)).abs() < 1e-15);
        prop_assert!((diameter3 - w.powi(-6)).abs() < 1e-15);
    }
}

#[test]
fn exact_and_interval_evaluation_agree_on_bank_polynomials() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1ab5);
    for def in bank::bank().iter().filter(|d| d.lhs.is_even()) {
        for _ in 0..1000 {
            let w = rat(rng.gen_range(1024..=2048), 1024);
            let e = rat(rng.gen_range(512..=2048), 1024);
            let exact = def
                .lhs
                .eval_exact(&ExactPoint::plain(w.clone(), e.clone()))
                .unwrap();
            let b = IntervalBox::new(Interval::from_rational(&w), Interval::from_rational(&e));
            let enclosure = CompiledPolynomial::new(&def.lhs).eval(&b);
            let value = exact.enclosure(64).lo;
            assert!(
                enclosure.contains_rational(&value),
                "{}: {} outside {}",
                def.name,
                value,
                enclosure
            );
            assert!(
                enclosure.width() < 1e-9,
                "{}: width {}",
                def.name,
                enclosure.width()
            );
        }
    }
}
