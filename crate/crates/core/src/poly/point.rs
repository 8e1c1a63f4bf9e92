use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::TowerElement;

/// A point of the (w, e)-plane with exactly known coordinates.
///
/// `Squared` carries `w²`, `e²` and optionally the product `w·e`; it is how
/// points with a coordinate like ∜2 (not in the tower) are handled. A monomial
/// `w^i e^j` is then evaluable when `i` and `j` are both even, or both odd and
/// the product is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ExactPoint {
    Plain {
        w: TowerElement,
        e: TowerElement,
    },
    Squared {
        w2: TowerElement,
        e2: TowerElement,
        we: Option<TowerElement>,
    },
}

impl ExactPoint {
    pub fn plain(w: impl Into<TowerElement>, e: impl Into<TowerElement>) -> Self {
        ExactPoint::Plain {
            w: w.into(),
            e: e.into(),
        }
    }

    pub fn squared(w2: TowerElement, e2: TowerElement, we: Option<TowerElement>) -> Self {
        ExactPoint::Squared { w2, e2, we }
    }

    /// `(w², e², w·e)` for either representation.
    pub fn squares(&self) -> (TowerElement, TowerElement, Option<TowerElement>) {
        match self {
            ExactPoint::Plain { w, e } => (w * w, e * e, Some(w * e)),
            ExactPoint::Squared { w2, e2, we } => (w2.clone(), e2.clone(), we.clone()),
        }
    }

    /// `e / w`, available whenever `w·e` is known.
    pub fn e_over_w(&self) -> Result<TowerElement> {
        match self {
            ExactPoint::Plain { w, e } => e.checked_div(w),
            ExactPoint::Squared {
                w2, we: Some(we), ..
            } => we.checked_div(w2),
            ExactPoint::Squared { .. } => Err(Error::NotRepresentable(
                "e/w without the product w*e".into(),
            )),
        }
    }
}
