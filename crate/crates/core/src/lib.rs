//! Löwner-interval interpolation, norm-constrained completions, operator
//! convexity testing and a sequence-algebra semicontinuity model, on dense
//! complex Hermitian matrices.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix `f64`.

pub mod completion;
pub mod error;
pub mod interpolation;
pub mod interval;
pub mod linalg;
pub mod opfunc;
pub mod scalar;
pub mod sequence;
pub mod tolerance;

pub use error::{LabError, Result};
pub use interval::Interval;
pub use linalg::{GeneralMatrix, HermitianMatrix, ProjectionMatrix, SpectralDecomposition};
pub use scalar::Scalar;
pub use tolerance::ToleranceConfig;

pub type Hermitian = HermitianMatrix<f64>;
pub type Matrix = GeneralMatrix<f64>;
pub type Projection = ProjectionMatrix<f64>;
pub type Tolerances = ToleranceConfig<f64>;

pub type Hermitian32 = HermitianMatrix<f32>;
pub type Matrix32 = GeneralMatrix<f32>;
pub type Projection32 = ProjectionMatrix<f32>;
