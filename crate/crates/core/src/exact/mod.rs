//! Exact arithmetic: rationals, rational enclosures and the tower Q(√2, √3).

pub mod enclosure;
pub mod rational;
pub mod tower;

use serde::{Deserialize, Serialize};

pub use enclosure::RatInterval;
pub use rational::{int, parse_rational, rat, Rational};
pub use tower::TowerElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Negative => "<0",
            Sign::Zero => "=0",
            Sign::Positive => ">0",
        }
    }
}
