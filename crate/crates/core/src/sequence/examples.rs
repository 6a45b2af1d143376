//! Fixed constructions on the tilted faces.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::interval::Interval;
use crate::linalg::hermitian::HermitianMatrix;
use crate::opfunc::ScalarFunction;
use crate::scalar::Scalar;
use crate::sequence::element::SeqMatrixElement;
use crate::sequence::face::FaceModel;
use crate::sequence::verdict::{classify_tilted_plane, is_in_compressed_algebra, SemicontinuityVerdict};
use crate::tolerance::ToleranceConfig;

/// `h_n = D` (the limit compression of `h_∞`) on the tilted plane, its corner
/// inverse, and the inverse of `h − t₀p` with `t₀ = ε/2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TiltedPlaneExample<T: Scalar> {
    pub theta: T,
    pub h: SeqMatrixElement<T>,
    pub in_compressed_algebra: bool,
    /// Largest `ε` with `h ≥ εp`: the smallest corner eigenvalue over all indices.
    pub eps: T,
    pub h_verdict: SemicontinuityVerdict<T>,
    pub inverse: SeqMatrixElement<T>,
    pub inverse_verdict: SemicontinuityVerdict<T>,
    pub t0: T,
    pub shifted_inverse: SeqMatrixElement<T>,
    pub shifted_inverse_verdict: SemicontinuityVerdict<T>,
}

impl<T: Scalar> TiltedPlaneExample<T> {
    /// `h ∈ pA_sa p`, `ε > 0`, `h⁻¹` fails the middle condition but is weakly
    /// usc, and `(h − t₀p)⁻¹` is not weakly usc.
    pub fn reproduces(&self) -> bool {
        self.in_compressed_algebra
            && self.eps > T::zero()
            && self.inverse_verdict.middle_usc_necessary == Some(false)
            && self.inverse_verdict.weakly_usc == Some(true)
            && self.shifted_inverse_verdict.weakly_usc == Some(false)
    }
}

/// `θ = π/4`, `h_∞ = [[2, 1], [1, 2]]`.
pub fn default_tilted_plane<T: Scalar>(tol: &ToleranceConfig<T>) -> Result<TiltedPlaneExample<T>> {
    let l = T::lit;
    let h_inf = HermitianMatrix::from_real_rows(&[vec![l(2.0), l(1.0)], vec![l(1.0), l(2.0)]], tol)?;
    tilted_plane_example(T::FRAC_PI_4(), h_inf, tol)
}

pub fn tilted_plane_example<T: Scalar>(theta: T, h_inf: HermitianMatrix<T>, tol: &ToleranceConfig<T>) -> Result<TiltedPlaneExample<T>> {
    let face = FaceModel::TiltedPlane { theta };
    face.validate()?;
    if h_inf.dim() != 2 {
        return Err(LabError::BadParameters(format!("h_inf must be 2x2, got {0}x{0}", h_inf.dim())));
    }
    let lmin = h_inf.min_eigenvalue()?;
    if !(lmin > tol.eig_tol * h_inf.norm().max(T::one())) {
        return Err(LabError::BadParameters(format!("h_inf must be positive invertible, minimum eigenvalue {lmin:e}")));
    }
    if h_inf[(0, 1)].norm() <= tol.residual_tol {
        return Err(LabError::BadParameters("h_inf needs a nonzero off-diagonal entry".into()));
    }
    let h = SeqMatrixElement::constant(face.limit_compression(&h_inf), h_inf)?;
    let in_alg = is_in_compressed_algebra(&h, &face, tol)?;
    let eps = h.cycle.iter().chain([&h.at_infinity]).try_fold(T::infinity(), |acc, e| e.min_eigenvalue().map(|v| acc.min(v)))?;

    let positive = Interval::open_above(T::zero());
    let inv = ScalarFunction::new("1/x", positive, |x: T| x.recip());
    let inverse = face.functional_calculus(&inv, &h, tol)?;

    let t0 = eps * T::lit(0.5);
    let shifted = ScalarFunction::new("1/(x-t0)", Interval::open_above(t0), move |x: T| (x - t0).recip());
    let shifted_inverse = face.functional_calculus(&shifted, &h, tol)?;

    Ok(TiltedPlaneExample {
        theta,
        h_verdict: classify_tilted_plane(&h, theta, tol)?,
        inverse_verdict: classify_tilted_plane(&inverse, theta, tol)?,
        shifted_inverse_verdict: classify_tilted_plane(&shifted_inverse, theta, tol)?,
        h,
        in_compressed_algebra: in_alg,
        eps,
        inverse,
        t0,
        shifted_inverse,
    })
}

/// `(cycle, t_∞)` pairs on the tilted line: ten cycles against twenty limits,
/// including every boundary `t_∞ = 2 min` and `t_∞ = 2 max`.
pub fn tilted_line_grid<T: Scalar>() -> Vec<(Vec<T>, T)> {
    let cycles: [&[f64]; 10] = [
        &[1.0, 0.0],
        &[1.0],
        &[0.5, 1.5],
        &[-1.0, 0.5],
        &[0.0, 0.0, 2.0],
        &[-0.75],
        &[0.25, 0.5, 0.75],
        &[2.0, -2.0],
        &[0.0],
        &[1.25, 1.0, 1.5, 1.75],
    ];
    let mut out = Vec::with_capacity(200);
    for c in cycles {
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut limits = vec![2.0 * lo, 2.0 * hi];
        limits.extend((0..18).map(|i| -4.5 + 0.5 * i as f64));
        for t_inf in limits {
            out.push((c.iter().map(|&v| T::lit(v)).collect(), T::lit(t_inf)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_example_reproduces() {
        let tol = ToleranceConfig::default();
        let ex = default_tilted_plane::<f64>(&tol).unwrap();
        assert!(ex.in_compressed_algebra);
        assert!((ex.eps - (3.0 - 3f64.sqrt()) / 2.0).abs() < 1e-12, "{}", ex.eps);
        assert_eq!(ex.h_verdict.strongly_usc, Some(true));
        assert_eq!(ex.inverse_verdict.middle_usc_necessary, Some(false));
        assert_eq!(ex.inverse_verdict.weakly_usc, Some(true));
        assert_eq!(ex.shifted_inverse_verdict.weakly_usc, Some(false));
        assert!(ex.reproduces());
        for v in [&ex.h_verdict, &ex.inverse_verdict, &ex.shifted_inverse_verdict] {
            assert!(v.check_implications().is_ok());
        }
    }

    #[test]
    fn inverse_is_taken_per_index() {
        let tol = ToleranceConfig::default();
        let ex = default_tilted_plane::<f64>(&tol).unwrap();
        let prod = ex.h.cycle[0].as_matrix() * ex.inverse.cycle[0].as_matrix();
        assert!((&prod - &crate::linalg::GeneralMatrix::identity(2)).max_abs() < 1e-13);
        let prod = ex.h.at_infinity.as_matrix() * ex.inverse.at_infinity.as_matrix();
        assert!((&prod - &crate::linalg::GeneralMatrix::identity(2)).max_abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_limits() {
        let tol = ToleranceConfig::default();
        let diag = HermitianMatrix::from_diag(&[1.0f64, 2.0]);
        assert!(tilted_plane_example(0.5, diag, &tol).is_err());
        let indefinite = HermitianMatrix::from_real_rows(&[vec![1.0f64, 2.0], vec![2.0, 1.0]], &tol).unwrap();
        assert!(tilted_plane_example(0.5, indefinite, &tol).is_err());
    }

    #[test]
    fn grid_has_boundaries() {
        let g = tilted_line_grid::<f64>();
        assert_eq!(g.len(), 200);
        assert!(g.iter().any(|(c, t)| c == &vec![1.0] && *t == 2.0));
    }
}
