//! Adaptive subdivision covering a box by strict-sign certificates, and the
//! replay check for stored certificates.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::boxes::ExactBox;
use super::eval::CompiledPolynomial;
use super::rounding::Interval;
use crate::error::{Error, Result};
use crate::exact::rational::{as_string, as_string_opt, pow2};
use crate::exact::{Rational, TowerElement};
use crate::poly::BivariatePolynomial;

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedPredicate {
    pub name: String,
    pub polynomial: BivariatePolynomial,
}

impl NamedPredicate {
    pub fn new(name: impl Into<String>, polynomial: BivariatePolynomial) -> Self {
        NamedPredicate {
            name: name.into(),
            polynomial,
        }
    }
}

/// Closed disk removed from the region to be covered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub center_w: TowerElement,
    pub center_e: TowerElement,
    #[serde(with = "as_string")]
    pub radius: Rational,
}

impl Exclusion {
    fn point_inside(&self, w: &Rational, e: &Rational) -> bool {
        let dw = &TowerElement::from_rational(w.clone()) - &self.center_w;
        let de = &TowerElement::from_rational(e.clone()) - &self.center_e;
        let d2 = &(&dw * &dw) + &(&de * &de);
        let r2 = TowerElement::from_rational(&self.radius * &self.radius);
        !(&d2 - &r2).is_positive()
    }

    /// Exact test that the whole box lies in the disk (the disk is convex,
    /// so the four corners decide).
    pub fn contains_box(&self, b: &ExactBox) -> bool {
        b.corners().iter().all(|(w, e)| self.point_inside(w, e))
    }
}

struct PreparedExclusion<'a> {
    disk: &'a Exclusion,
    cw: Interval,
    ce: Interval,
    r2: Interval,
}

impl<'a> PreparedExclusion<'a> {
    fn new(disk: &'a Exclusion) -> Self {
        let r = Interval::from_rational(&disk.radius);
        PreparedExclusion {
            disk,
            cw: Interval::from_rat_interval(&disk.center_w.enclosure(64)),
            ce: Interval::from_rat_interval(&disk.center_e.enclosure(64)),
            r2: r * r,
        }
    }

    fn contains_box(&self, b: &ExactBox) -> bool {
        let ib = b.to_interval_box();
        for w in [ib.w.lo, ib.w.hi] {
            for e in [ib.e.lo, ib.e.hi] {
                let d2 =
                    (Interval::point(w) - self.cw).powi(2) + (Interval::point(e) - self.ce).powi(2);
                if d2.lo > self.r2.hi {
                    return false;
                }
            }
        }
        self.disk.contains_box(b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeafStatus {
    Excluded,
    Witness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Leaf {
    #[serde(rename = "box")]
    pub region: ExactBox,
    pub status: LeafStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_name: Option<String>,
    /// Upper end of the witness enclosure; strictly negative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_hi: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredicateBound {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

/// A box at the minimum size on which no predicate is certified negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    #[serde(rename = "box")]
    pub region: ExactBox,
    pub bounds: Vec<PredicateBound>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageCertificate {
    pub version: u32,
    pub region: ExactBox,
    pub predicates: Vec<NamedPredicate>,
    pub exclusions: Vec<Exclusion>,
    #[serde(with = "as_string_opt")]
    pub delta: Option<Rational>,
    #[serde(with = "as_string")]
    pub min_box: Rational,
    pub budget: u64,
    pub complete: bool,
    /// On failure, the first uncovered boxes in depth-first order; the
    /// leaves then stop just before the first of them.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<Counterexample>,
    pub leaves: Vec<Leaf>,
}

impl CoverageCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("certificate: {e}")))
    }

    /// The first uncovered box, if any.
    pub fn counterexample(&self) -> Option<&Counterexample> {
        self.counterexamples.first()
    }

    pub fn witness_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for leaf in &self.leaves {
            let key = leaf
                .witness_name
                .clone()
                .unwrap_or_else(|| "excluded".into());
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverOptions {
    pub min_box: Rational,
    pub budget: u64,
    /// Worker threads; 1 runs on the calling thread.
    pub jobs: usize,
    /// Uncovered boxes to collect before the search stops.
    pub max_counterexamples: usize,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions {
            min_box: pow2(-20),
            budget: 10_000_000,
            jobs: 1,
            max_counterexamples: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverRun {
    pub certificate: CoverageCertificate,
    /// Boxes evaluated; depends on scheduling when a counterexample is found.
    pub boxes_examined: u64,
}

enum Item {
    Leaf(Leaf),
    Counterexample(Counterexample),
    Frontier(ExactBox),
}

struct Search<'a> {
    names: Vec<&'a str>,
    compiled: Vec<CompiledPolynomial>,
    exclusions: Vec<PreparedExclusion<'a>>,
    min_box: &'a Rational,
    budget: u64,
    parallel: bool,
    examined: AtomicU64,
    aborted: AtomicBool,
    max_failures: usize,
    /// Keys of the earliest failures seen so far, at most `max_failures`.
    failures: Mutex<BTreeSet<u64>>,
    /// Largest key in `failures` once it is full, else `u64::MAX`.
    cutoff: AtomicU64,
}

impl Search<'_> {
    fn walk(&self, b: ExactBox, key: u64, depth: u32) -> Vec<(u64, Item)> {
        if self.aborted.load(Ordering::Relaxed) {
            return vec![(key, Item::Frontier(b))];
        }
        // everything in this subtree comes after enough known failures
        if key > self.cutoff.load(Ordering::Relaxed) {
            return Vec::new();
        }
        if self.examined.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.aborted.store(true, Ordering::Relaxed);
            return vec![(key, Item::Frontier(b))];
        }
        if self.exclusions.iter().any(|x| x.contains_box(&b)) {
            let leaf = Leaf {
                region: b,
                status: LeafStatus::Excluded,
                witness_name: None,
                bound_hi: None,
            };
            return vec![(key, Item::Leaf(leaf))];
        }
        let ib = b.to_interval_box();
        let mut bounds = Vec::with_capacity(self.compiled.len());
        for (name, p) in self.names.iter().zip(&self.compiled) {
            let bound = p.eval(&ib);
            if bound.is_negative() {
                let leaf = Leaf {
                    region: b,
                    status: LeafStatus::Witness,
                    witness_name: Some(name.to_string()),
                    bound_hi: Some(bound.hi),
                };
                return vec![(key, Item::Leaf(leaf))];
            }
            bounds.push(PredicateBound {
                name: name.to_string(),
                lo: bound.lo,
                hi: bound.hi,
            });
        }
        if b.max_side() <= *self.min_box || depth >= 63 {
            self.record_failure(key);
            return vec![(
                key,
                Item::Counterexample(Counterexample { region: b, bounds }),
            )];
        }
        let (lower, upper) = b.bisect();
        let upper_key = key | (1u64 << (63 - depth));
        let (mut left, right) = if self.parallel {
            rayon::join(
                || self.walk(lower, key, depth + 1),
                || self.walk(upper, upper_key, depth + 1),
            )
        } else {
            (
                self.walk(lower, key, depth + 1),
                self.walk(upper, upper_key, depth + 1),
            )
        };
        left.extend(right);
        left
    }

    fn record_failure(&self, key: u64) {
        let mut keys = self.failures.lock().expect("failure set lock");
        keys.insert(key);
        if keys.len() > self.max_failures {
            keys.pop_last();
        }
        if keys.len() == self.max_failures {
            self.cutoff
                .store(*keys.last().expect("nonempty"), Ordering::Relaxed);
        }
    }
}

/// Covers `region` by boxes on each of which some predicate is certified
/// strictly negative, or which lie inside an exclusion disk.
///
/// Subdivision bisects the longer side (ties split `w`), so the tree and the
/// leaf order depend only on the inputs. When coverage fails the result
/// carries the first `max_counterexamples` failing boxes in depth-first
/// order, whatever the number of jobs.
pub fn adaptive_cover(
    region: &ExactBox,
    predicates: &[NamedPredicate],
    exclusions: &[Exclusion],
    options: &CoverOptions,
) -> Result<CoverRun> {
    if options.min_box <= Rational::zero() {
        return Err(Error::InvalidArgument("min_box must be positive".into()));
    }
    if exclusions.iter().any(|x| x.radius <= Rational::zero()) {
        return Err(Error::InvalidArgument(
            "exclusion radii must be positive".into(),
        ));
    }
    if options.max_counterexamples == 0 {
        return Err(Error::InvalidArgument(
            "max_counterexamples must be positive".into(),
        ));
    }
    if predicates.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one predicate is required".into(),
        ));
    }
    let search = Search {
        names: predicates.iter().map(|p| p.name.as_str()).collect(),
        compiled: predicates
            .iter()
            .map(|p| CompiledPolynomial::new(&p.polynomial))
            .collect(),
        exclusions: exclusions.iter().map(PreparedExclusion::new).collect(),
        min_box: &options.min_box,
        budget: options.budget,
        parallel: options.jobs > 1,
        examined: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        max_failures: options.max_counterexamples,
        failures: Mutex::new(BTreeSet::new()),
        cutoff: AtomicU64::new(u64::MAX),
    };
    let items = if options.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(|| search.walk(region.clone(), 0, 0))
    } else {
        search.walk(region.clone(), 0, 0)
    };
    let examined = search.examined.load(Ordering::Relaxed);
    if search.aborted.load(Ordering::Relaxed) {
        let frontier = items
            .into_iter()
            .filter_map(|(_, it)| match it {
                Item::Frontier(b) => Some(b),
                _ => None,
            })
            .collect();
        return Err(Error::BudgetExceeded { examined, frontier });
    }
    let failure_keys = search.failures.into_inner().expect("failure set lock");
    let first_failure = failure_keys.first().copied().unwrap_or(u64::MAX);
    let mut leaves = Vec::new();
    let mut counterexamples = Vec::new();
    for (key, item) in items {
        match item {
            Item::Leaf(leaf) if key < first_failure => leaves.push(leaf),
            Item::Counterexample(c) if failure_keys.contains(&key) => counterexamples.push(c),
            _ => {}
        }
    }
    let certificate = CoverageCertificate {
        version: CERTIFICATE_VERSION,
        region: region.clone(),
        predicates: predicates.to_vec(),
        exclusions: exclusions.to_vec(),
        delta: None,
        min_box: options.min_box.clone(),
        budget: options.budget,
        complete: counterexamples.is_empty(),
        counterexamples,
        leaves,
    };
    Ok(CoverRun {
        certificate,
        boxes_examined: examined,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub leaves_checked: usize,
    pub witness_counts: BTreeMap<String, usize>,
}

/// Re-verifies a stored certificate without searching: regenerates the
/// subdivision tree from the region, checks that its leaves are exactly the
/// stored ones in order, re-proves every exclusion exactly and recomputes
/// every witness bound, which must match the stored value bit for bit.
pub fn replay(cert: &CoverageCertificate) -> Result<ReplayReport> {
    let reject = |msg: String| Err(Error::CertificateRejected(msg));
    if cert.version != CERTIFICATE_VERSION {
        return reject(format!("unsupported version {}", cert.version));
    }
    if !cert.complete || !cert.counterexamples.is_empty() {
        return reject("certificate records a counterexample".into());
    }
    let compiled: BTreeMap<&str, CompiledPolynomial> = cert
        .predicates
        .iter()
        .map(|p| (p.name.as_str(), CompiledPolynomial::new(&p.polynomial)))
        .collect();
    let mut stack = vec![cert.region.clone()];
    let mut next = 0usize;
    while let Some(b) = stack.pop() {
        let Some(leaf) = cert.leaves.get(next) else {
            return reject(format!("box {b} is not covered by any leaf"));
        };
        if leaf.region == b {
            check_leaf(cert, &compiled, next, leaf)?;
            next += 1;
            continue;
        }
        let inside = b.contains(&leaf.region.w_lo, &leaf.region.e_lo)
            && b.contains(&leaf.region.w_hi, &leaf.region.e_hi);
        if !inside {
            return reject(format!(
                "leaf {next} ({}) is not the next box of the subdivision",
                leaf.region
            ));
        }
        let (lower, upper) = b.bisect();
        stack.push(upper);
        stack.push(lower);
    }
    if next != cert.leaves.len() {
        return reject(format!(
            "{} leaves lie outside the region's subdivision",
            cert.leaves.len() - next
        ));
    }
    Ok(ReplayReport {
        leaves_checked: next,
        witness_counts: cert.witness_counts(),
    })
}

fn check_leaf(
    cert: &CoverageCertificate,
    compiled: &BTreeMap<&str, CompiledPolynomial>,
    index: usize,
    leaf: &Leaf,
) -> Result<()> {
    let reject = |msg: String| Err(Error::CertificateRejected(format!("leaf {index}: {msg}")));
    match leaf.status {
        LeafStatus::Excluded => {
            if !cert.exclusions.iter().any(|x| x.contains_box(&leaf.region)) {
                return reject("box is not inside any exclusion disk".into());
            }
        }
        LeafStatus::Witness => {
            let Some(name) = &leaf.witness_name else {
                return reject("witness leaf without a predicate name".into());
            };
            let Some(p) = compiled.get(name.as_str()) else {
                return reject(format!("unknown predicate `{name}`"));
            };
            let bound = p.eval(&leaf.region.to_interval_box());
            if !bound.is_negative() {
                return reject(format!(
                    "`{name}` is not certified negative (upper bound {})",
                    bound.hi
                ));
            }
            if leaf.bound_hi.map(f64::to_bits) != Some(bound.hi.to_bits()) {
                return reject(format!(
                    "stored bound {:?} differs from recomputed {}",
                    leaf.bound_hi, bound.hi
                ));
            }
        }
    }
    Ok(())
}
