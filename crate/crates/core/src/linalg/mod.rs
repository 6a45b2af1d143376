pub mod calculus;
pub mod eigen;
pub mod hermitian;
pub mod matrix;
pub mod random;
pub mod svd;

pub use calculus::*;
pub use eigen::{jacobi_eigen, SpectralDecomposition};
pub use hermitian::{HermitianMatrix, MatrixJson, ProjectionMatrix};
pub use matrix::GeneralMatrix;
pub use random::{random_hermitian, random_projection};
