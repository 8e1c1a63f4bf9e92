//! The forced horoball configuration for given (w, e).
//!
//! Frame: the full-sized ball `F` sits at the origin, the shortest
//! translation `P` is `(w, 0)`, and the 1/w-ball `U` lies in the upper
//! half-plane at angle θ. All diameters are Euclidean, full-sized = 1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    FullSized,
    OneOverW,
    OneOverE,
    OneOverWCubed,
    Derived,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Horoball {
    pub label: String,
    pub center: [f64; 2],
    pub diameter: f64,
    pub family: Family,
}

impl Horoball {
    fn new(label: &str, center: [f64; 2], diameter: f64, family: Family) -> Self {
        Horoball {
            label: label.to_string(),
            center,
            diameter,
            family,
        }
    }

    pub fn distance(&self, other: &Horoball) -> f64 {
        (self.center[0] - other.center[0]).hypot(self.center[1] - other.center[1])
    }

    fn translated(&self, label: &str, dx: f64) -> Horoball {
        Horoball::new(
            label,
            [self.center[0] + dx, self.center[1]],
            self.diameter,
            self.family,
        )
    }
}

/// `dist² − d₁·d₂`: nonnegative iff the interiors are disjoint, zero iff tangent.
pub fn tangency_gap(a: &Horoball, b: &Horoball) -> f64 {
    let dx = a.center[0] - b.center[0];
    let dy = a.center[1] - b.center[1];
    dx * dx + dy * dy - a.diameter * b.diameter
}

/// Inversion rule: a ball of diameter `b` whose center is `c` from a
/// full-sized ball's center yields a ball of diameter `b/c²` at distance `1/c`.
pub fn invert_ball(diameter: f64, center_distance: f64) -> Result<(f64, f64)> {
    if center_distance <= 0.0 || !center_distance.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "center distance must be positive, got {center_distance}"
        )));
    }
    Ok((
        diameter / (center_distance * center_distance),
        1.0 / center_distance,
    ))
}

/// Neighbor-pair rule: a ball of diameter `k` forces balls at offset `k/w`
/// of diameter `(k/w)²` on either side.
pub fn neighbor_balls(k: f64, w: f64) -> Result<(f64, f64)> {
    if k <= 0.0 || w <= 0.0 {
        return Err(Error::InvalidArgument(
            "diameter and waist must be positive".into(),
        ));
    }
    let offset = k / w;
    Ok((offset, offset * offset))
}

/// Which of the two circle intersections carries the 1/e-ball.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Counter-clockwise from `U` as seen from `F`: the side away from `F'`.
    #[default]
    CounterClockwise,
    Clockwise,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinnedSegment {
    pub from: String,
    pub to: String,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub w: f64,
    pub e: f64,
    pub cos_theta: f64,
    pub branch: Branch,
    pub balls: Vec<Horoball>,
    pub segments: BTreeMap<String, PinnedSegment>,
}

pub const PINNED: [&str; 4] = ["e", "v", "y", "k"];
const UNPINNED: [&str; 3] = ["m", "p", "s"];

/// Ball pairs the construction makes tangent, plus the pinned pairs.
pub const CONSTRUCTION_PAIRS: [(&str, &str); 8] = [
    ("F", "F'"),
    ("F", "U"),
    ("F", "U-"),
    ("U", "E"),
    ("U", "A"),
    ("U", "B"),
    ("F", "E"),
    ("U-P", "E"),
];

impl Configuration {
    pub fn ball(&self, label: &str) -> Option<&Horoball> {
        self.balls.iter().find(|b| b.label == label)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    /// Pairs of balls whose interiors overlap by more than `tolerance`
    /// (in the squared-distance gap).
    pub fn overlaps(&self, pairs: &[(&str, &str)], tolerance: f64) -> Vec<(String, String, f64)> {
        pairs
            .iter()
            .filter_map(|(a, b)| {
                let (x, y) = (self.ball(a)?, self.ball(b)?);
                let gap = tangency_gap(x, y);
                (gap < -tolerance).then(|| (a.to_string(), b.to_string(), gap))
            })
            .collect()
    }
}

/// Builds the configuration for waist `w ≥ 1` and second-shortest distance `e`.
pub fn build_configuration(w: f64, e: f64, branch: Branch) -> Result<Configuration> {
    if !(w.is_finite() && e.is_finite()) || w < 1.0 || e <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need w >= 1 and e > 0, got w = {w}, e = {e}"
        )));
    }
    let cos_theta = (w * w + 1.0 / (w * w) - e * e) / 2.0;
    if !(-1.0..=1.0).contains(&cos_theta) {
        return Err(Error::InconsistentParameters(format!(
            "cos(theta) = {cos_theta} is outside [-1, 1]; need |w - 1/w| <= e <= w + 1/w"
        )));
    }
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    let u = [cos_theta / w, sin_theta / w];

    // 1/e-ball: |E - F| = 1/e and |E - U| = 1/(w²e)
    let (r1, r2, d) = (1.0 / e, 1.0 / (w * w * e), 1.0 / w);
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h2 = r1 * r1 - a * a;
    if h2 < -1e-12 {
        return Err(Error::Branch(format!(
            "no point at distance 1/e from F and 1/(w^2 e) from U: |1/e - 1/(w^2 e)| <= 1/w <= 1/e + 1/(w^2 e) fails (w = {w}, e = {e})"
        )));
    }
    let h = h2.max(0.0).sqrt();
    let unit = [u[0] / d, u[1] / d];
    let perp = match branch {
        Branch::CounterClockwise => [-unit[1], unit[0]],
        Branch::Clockwise => [unit[1], -unit[0]],
    };
    let ecenter = [a * unit[0] + h * perp[0], a * unit[1] + h * perp[1]];

    // 1/w³-balls on either side of U along direction 2θ
    let (cos2, sin2) = (
        2.0 * cos_theta * cos_theta - 1.0,
        2.0 * sin_theta * cos_theta,
    );
    let w3 = w * w * w;
    let off = [cos2 / w3, sin2 / w3];

    let f = Horoball::new("F", [0.0, 0.0], 1.0, Family::FullSized);
    let fp = f.translated("F'", w);
    let ub = Horoball::new("U", u, 1.0 / (w * w), Family::OneOverW);
    let um = Horoball::new("U-", [-u[0], -u[1]], 1.0 / (w * w), Family::OneOverW);
    let up = ub.translated("U-P", -w);
    let eb = Horoball::new("E", ecenter, 1.0 / (w * w * e * e), Family::OneOverE);
    let ab = Horoball::new(
        "A",
        [u[0] - off[0], u[1] - off[1]],
        1.0 / (w3 * w3),
        Family::OneOverWCubed,
    );
    let bb = Horoball::new(
        "B",
        [u[0] + off[0], u[1] + off[1]],
        1.0 / (w3 * w3),
        Family::OneOverWCubed,
    );
    let ap = ab.translated("A-P", -w);
    let bp = bb.translated("B+P", w);

    let mut segments = BTreeMap::new();
    for (name, x, y) in [
        ("e", &ub, &fp),
        ("y", &eb, &up),
        ("v", &eb, &ap),
        ("k", &ab, &bp),
    ] {
        segments.insert(
            name.to_string(),
            PinnedSegment {
                from: x.label.clone(),
                to: y.label.clone(),
                length: x.distance(y),
            },
        );
    }
    let mut derived = vec![up, ap, bp];
    for b in &mut derived {
        b.family = Family::Derived;
    }
    let mut balls = vec![f, fp, ub, um, eb, ab, bb];
    balls.extend(derived);
    Ok(Configuration {
        w,
        e,
        cos_theta,
        branch,
        balls,
        segments,
    })
}

/// Length of a pinned segment.
pub fn measured_segment(c: &Configuration, name: &str) -> Result<f64> {
    if let Some(s) = c.segments.get(name) {
        return Ok(s.length);
    }
    if UNPINNED.contains(&name) {
        return Err(Error::NotPinned(name.to_string()));
    }
    Err(Error::UnknownName {
        name: name.to_string(),
        known: PINNED.join(", "),
    })
}

/// `length² − bound²` for a pinned segment, the geometric counterpart of
/// the inequality's left-hand side.
pub fn segment_gap(c: &Configuration, name: &str) -> Result<f64> {
    let len = measured_segment(c, name)?;
    let (w, e) = (c.w, c.e);
    let bound = match name {
        "e" => 1.0 / w,
        "y" => 1.0 / (w * w * e),
        "v" => 1.0 / (w.powi(4) * e),
        "k" => 1.0 / w.powi(6),
        _ => unreachable!("pinned names are e, v, y, k"),
    };
    Ok(len * len - bound * bound)
}
