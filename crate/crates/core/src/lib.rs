//! Certified verification of waist-size inequalities for hyperbolic knot cusps.

pub mod bank;
pub mod catalog;
pub mod error;
pub mod exact;
pub mod horoball;
pub mod interval;
pub mod points;
pub mod poly;
pub mod svg;
pub mod theorem;

pub use error::{Error, Result};
