use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Numerical tolerances shared by every module.
///
/// `hermitian_tol`, `eig_tol` and `loewner_tol` are relative: they are scaled by
/// the magnitude of the matrices involved at each use site. `proj_tol` and
/// `residual_tol` are absolute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ToleranceConfig<T: Scalar> {
    pub hermitian_tol: T,
    pub proj_tol: T,
    pub eig_tol: T,
    pub loewner_tol: T,
    pub residual_tol: T,
}

impl<T: Scalar> Default for ToleranceConfig<T> {
    fn default() -> Self {
        Self {
            hermitian_tol: T::floor_tol(1e-12, 64.0),
            proj_tol: T::floor_tol(1e-10, 256.0),
            eig_tol: T::floor_tol(1e-10, 1024.0),
            loewner_tol: T::floor_tol(1e-8, 1024.0),
            residual_tol: T::floor_tol(1e-10, 1024.0),
        }
    }
}

impl<T: Scalar> ToleranceConfig<T> {
    pub fn validate(&self) -> crate::Result<()> {
        let fields = [
            ("hermitian_tol", self.hermitian_tol),
            ("proj_tol", self.proj_tol),
            ("eig_tol", self.eig_tol),
            ("loewner_tol", self.loewner_tol),
            ("residual_tol", self.residual_tol),
        ];
        for (name, v) in fields {
            if !(v >= T::zero()) {
                return Err(crate::LabError::BadParameters(format!(
                    "{name} must be nonnegative, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Absolute Löwner tolerance for comparing matrices of the given norms:
    /// `loewner_tol * max(a, b, 1)`.
    pub fn loewner_abs(&self, norm_a: T, norm_b: T) -> T {
        self.loewner_tol * norm_a.max(norm_b).max(T::one())
    }
}
