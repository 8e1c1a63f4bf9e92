//! Named points of the (w, e)-plane with exact coordinates.
//!
//! Points on the line `w = ∜2` are stored through their squares (`w² = √2`),
//! which lie in Q(√2, √3); see [`ExactPoint`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{int, rat};
use crate::exact::{RatInterval, Rational, TowerElement};
use crate::interval::SegmentEndpoint;
use crate::poly::ExactPoint;

/// Bits of precision for the rational enclosures of point coordinates.
pub const ENCLOSURE_BITS: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointId {
    /// (1, 1)
    FigureEight,
    /// (1, √2), where the upper-e and v curves meet on `w = 1`.
    UpperMeetsV,
    /// (∜2, √3/∜2)
    I,
    /// (∜2, 1/∜2)
    II,
    /// (∜2, ∜2)
    III,
}

impl PointId {
    pub const ALL: [PointId; 5] = [
        PointId::FigureEight,
        PointId::UpperMeetsV,
        PointId::I,
        PointId::II,
        PointId::III,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PointId::FigureEight => "fig8",
            PointId::UpperMeetsV => "(1,sqrt2)",
            PointId::I => "I",
            PointId::II => "II",
            PointId::III => "III",
        }
    }

    /// Coordinates as text, for reports.
    pub fn coordinates(self) -> &'static str {
        match self {
            PointId::FigureEight => "(1, 1)",
            PointId::UpperMeetsV => "(1, sqrt2)",
            PointId::I => "(2^(1/4), sqrt3/2^(1/4))",
            PointId::II => "(2^(1/4), 2^(-1/4))",
            PointId::III => "(2^(1/4), 2^(1/4))",
        }
    }

    pub fn parse(s: &str) -> Result<PointId> {
        PointId::ALL
            .into_iter()
            .find(|p| p.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName {
                name: s.to_string(),
                known: PointId::ALL
                    .iter()
                    .map(|p| p.label())
                    .collect::<Vec<_>>()
                    .join(", "),
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialPoint {
    pub id: PointId,
    pub exact: ExactPoint,
    pub w: RatInterval,
    pub e: RatInterval,
}

impl SpecialPoint {
    pub fn as_endpoint(&self) -> SegmentEndpoint {
        SegmentEndpoint {
            exact: self.exact.clone(),
            w: self.w.clone(),
            e: self.e.clone(),
        }
    }

    pub fn w_f64(&self) -> f64 {
        self.w.to_f64_mid()
    }

    pub fn e_f64(&self) -> f64 {
        self.e.to_f64_mid()
    }
}

fn fourth_root(q: Rational) -> RatInterval {
    RatInterval::point(q)
        .root(4, ENCLOSURE_BITS)
        .expect("nonnegative")
}

pub fn special_point(id: PointId) -> SpecialPoint {
    let r2 = TowerElement::sqrt2;
    let half = |t: TowerElement| t.scale(&rat(1, 2));
    match id {
        PointId::FigureEight => SpecialPoint {
            id,
            exact: ExactPoint::plain(TowerElement::one(), TowerElement::one()),
            w: RatInterval::point(int(1)),
            e: RatInterval::point(int(1)),
        },
        PointId::UpperMeetsV => SpecialPoint {
            id,
            exact: ExactPoint::plain(TowerElement::one(), r2()),
            w: RatInterval::point(int(1)),
            e: r2().enclosure(ENCLOSURE_BITS),
        },
        // e² = 3/√2 = (3/2)√2, w·e = √3
        PointId::I => SpecialPoint {
            id,
            exact: ExactPoint::squared(r2(), r2().scale(&rat(3, 2)), Some(TowerElement::sqrt3())),
            w: fourth_root(int(2)),
            e: fourth_root(rat(9, 2)),
        },
        // e² = 1/√2, w·e = 1
        PointId::II => SpecialPoint {
            id,
            exact: ExactPoint::squared(r2(), half(r2()), Some(TowerElement::one())),
            w: fourth_root(int(2)),
            e: fourth_root(rat(1, 2)),
        },
        // e² = √2, w·e = √2
        PointId::III => SpecialPoint {
            id,
            exact: ExactPoint::squared(r2(), r2(), Some(r2())),
            w: fourth_root(int(2)),
            e: fourth_root(int(2)),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn enclosures_match_exact_squares() {
        for id in PointId::ALL {
            let p = special_point(id);
            let (w2, e2, we) = p.exact.squares();
            let sq = |i: &RatInterval| (i.lo.to_f64().unwrap(), i.hi.to_f64().unwrap());
            let (wl, wh) = sq(&p.w);
            let (el, eh) = sq(&p.e);
            assert!(
                (wl * wl - w2.to_f64()).abs() < 1e-14 && (wh * wh - w2.to_f64()).abs() < 1e-14,
                "{id:?}"
            );
            assert!(
                (el * el - e2.to_f64()).abs() < 1e-14 && (eh * eh - e2.to_f64()).abs() < 1e-14,
                "{id:?}"
            );
            assert!((wl * el - we.unwrap().to_f64()).abs() < 1e-14, "{id:?}");
            assert!(p.w.width() < rat(1, 1 << 62));
        }
    }

    #[test]
    fn labels_round_trip() {
        for id in PointId::ALL {
            assert_eq!(PointId::parse(id.label()).unwrap(), id);
        }
        assert!(PointId::parse("IV").is_err());
    }
}
