//! Operator convex, strongly operator convex and operator monotone functions:
//! integral representations, matrix evaluation and randomized testers.

pub mod corpus;
pub mod function;
pub mod measure;
pub mod rep;
pub mod testers;

pub use function::{lookup, KnownProperties, RegistryEntry, ScalarFunction, REGISTRY_LABELS};
pub use measure::{MeasureOnLine, Side};
pub use rep::{
    eval_convex_rep, eval_monotone_rep, eval_strong_rep, matrix_eval_rep, ConvexIntegralRep, IntegralRep, MonotoneRep,
    RepKind, StrongConvexRep,
};
pub use testers::{
    davis_convex_test, monotone_test, replay_witness, strong_convex_test, Criterion, TestConfig, TestVerdict, Witness,
};
