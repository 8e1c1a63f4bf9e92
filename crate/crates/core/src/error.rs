use thiserror::Error;

/// Errors raised by the exact, interval and geometric layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(
        "monomial w^{w_exp}*e^{e_exp} cannot be evaluated at a point given by squared coordinates"
    )]
    ParityMismatch { w_exp: u32, e_exp: u32 },

    #[error("point is not representable in Q(sqrt2, sqrt3) for {0}; use interval mode")]
    NotRepresentable(String),

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("singular point: partial derivative in e vanishes")]
    SingularPoint,

    #[error("relations do not have the expected shape: {0}")]
    RelationShape(String),

    #[error("inconsistent parameters: {0}")]
    InconsistentParameters(String),

    #[error("branch error: {0}")]
    Branch(String),

    #[error("segment `{0}` is not pinned by the construction")]
    NotPinned(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("box budget exhausted after {examined} boxes; {} boxes left unexplored", frontier.len())]
    BudgetExceeded {
        examined: u64,
        frontier: Vec<crate::interval::ExactBox>,
    },

    #[error("certificate rejected: {0}")]
    CertificateRejected(String),

    #[error("unknown name `{name}`; known: {known}")]
    UnknownName { name: String, known: String },
}

pub type Result<T> = std::result::Result<T, Error>;
