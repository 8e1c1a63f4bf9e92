//! Outward-rounded interval arithmetic and the box and segment certifiers.

pub mod boxes;
pub mod cover;
pub mod eval;
pub mod rounding;
pub mod segment;

pub use boxes::{ExactBox, IntervalBox};
pub use cover::{
    adaptive_cover, replay, Counterexample, CoverOptions, CoverRun, CoverageCertificate, Exclusion,
    Leaf, LeafStatus, NamedPredicate, ReplayReport,
};
pub use eval::{certify_sign_on_box, eval_on_box, BoxVerdict, CompiledPolynomial, SignGoal};
pub use rounding::Interval;
pub use segment::{
    certify_sign_on_segment, EndpointPolicy, EndpointTreatment, SegmentCertificate,
    SegmentEndpoint, SegmentVerdict,
};
