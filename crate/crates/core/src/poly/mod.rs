//! Exact polynomial algebra over Q in the variables `w` and `e`.

pub mod bivariate;
pub mod elimination;
pub mod point;
pub mod roots;
mod text;
pub mod univariate;

pub use bivariate::BivariatePolynomial;
pub use elimination::{
    eliminate_angle, eliminate_angle_traced, five_two_relations, AngleForm, CosineRelation,
    Elimination, LaurentPolynomial,
};
pub use point::ExactPoint;
pub use roots::{isolate_real_roots, IsolatingInterval, SturmSequence};
pub use univariate::{expand_product, UnivariatePolynomial};
