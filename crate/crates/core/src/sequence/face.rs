use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::hermitian::{HermitianMatrix, ProjectionMatrix};
use crate::linalg::matrix::GeneralMatrix;
use crate::opfunc::ScalarFunction;
use crate::scalar::Scalar;
use crate::sequence::element::SeqMatrixElement;
use crate::tolerance::ToleranceConfig;

/// The closed faces the sequence model supports.
///
/// Every variant stores its elements as a [`SeqMatrixElement`] whose finite
/// entries are written in a basis of `range(p_n)` followed by the complement,
/// so the corner coordinates of `h_n` are its top-left `corner_dim` block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "face", rename_all = "kebab-case", bound = "")]
pub enum FaceModel<T: Scalar> {
    /// `M_{k+l}`-valued sequences with `p_n = diag(1_k, 0)` and `p_∞ = 1`.
    Block { k: usize, l: usize },
    /// `p_n = v_n v_n*` with `v_n = (e_1 + e_{n+1})/√2` and `p_∞ = e_1 e_1*`.
    /// Elements are scalar sequences `h_n = t_n p_n`, stored as `1 × 1` blocks.
    TiltedLine,
    /// `M_2`-valued sequences with `p_n = p_∞ = diag(1, 0)`.
    ConstantCorner,
    /// `p_n = v_n v_n* + e_2 e_2*` with `v_n = cos θ e_1 + sin θ e_{n+2}` and
    /// `p_∞ = e_1 e_1* + e_2 e_2*`. Entries are `2 × 2` matrices relative to
    /// `{v_n, e_2}` (finite `n`) and `{e_1, e_2}` (at infinity).
    TiltedPlane { theta: T },
}

impl<T: Scalar> fmt::Display for FaceModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Block { k, l } => write!(f, "block(k={k}, l={l})"),
            Self::TiltedLine => write!(f, "tilted-line"),
            Self::ConstantCorner => write!(f, "constant-corner"),
            Self::TiltedPlane { theta } => write!(f, "tilted-plane(theta={theta})"),
        }
    }
}

impl<T: Scalar> FaceModel<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Block { k, .. } if k == 0 => Err(LabError::BadParameters("block face needs k >= 1".into())),
            Self::TiltedPlane { theta } if !(theta > T::zero() && theta < T::FRAC_PI_2()) => {
                Err(LabError::BadParameters(format!("theta = {theta} must lie in (0, pi/2)")))
            }
            _ => Ok(()),
        }
    }

    /// Size `m` of the stored blocks.
    pub fn block_dim(&self) -> usize {
        match *self {
            Self::Block { k, l } => k + l,
            Self::TiltedLine => 1,
            Self::ConstantCorner | Self::TiltedPlane { .. } => 2,
        }
    }

    /// Rank of `p_n` for finite `n`.
    pub fn corner_dim(&self) -> usize {
        match *self {
            Self::Block { k, .. } => k,
            Self::TiltedLine | Self::ConstantCorner => 1,
            Self::TiltedPlane { .. } => 2,
        }
    }

    /// `p_n` (finite `n`) in the stored coordinates.
    pub fn finite_projection(&self) -> ProjectionMatrix<T> {
        let keep: Vec<usize> = (0..self.corner_dim()).collect();
        ProjectionMatrix::coordinate(self.block_dim(), &keep).expect("corner fits in block")
    }

    /// `p_∞` in the stored coordinates.
    pub fn infinite_projection(&self) -> ProjectionMatrix<T> {
        match *self {
            Self::ConstantCorner => ProjectionMatrix::coordinate(2, &[0]).expect("index in range"),
            _ => ProjectionMatrix::identity(self.block_dim()),
        }
    }

    /// Corner coordinates of a finite entry.
    pub fn finite_block(&self, h: &HermitianMatrix<T>) -> HermitianMatrix<T> {
        let d = self.corner_dim();
        HermitianMatrix::symmetrize(&h.submatrix(0..d, 0..d))
    }

    /// The matrix `D` with `φ_∞(h) = tr(r D)` whenever `φ_n(h) = tr(r h_n)`
    /// runs along a convergent family of states; strong upper semicontinuity
    /// is `a′ ≤ D` for every cluster point `a′`.
    pub fn limit_compression(&self, h_inf: &HermitianMatrix<T>) -> HermitianMatrix<T> {
        match *self {
            Self::Block { k, .. } => HermitianMatrix::symmetrize(&h_inf.submatrix(0..k, 0..k)),
            Self::TiltedLine => h_inf.scale(T::lit(0.5)),
            Self::ConstantCorner => HermitianMatrix::symmetrize(&h_inf.submatrix(0..1, 0..1)),
            Self::TiltedPlane { theta } => {
                let c = theta.cos();
                let mut d = h_inf.as_matrix().clone();
                d[(0, 0)] = d[(0, 0)] * c * c;
                d[(0, 1)] = d[(0, 1)] * c;
                d[(1, 0)] = d[(1, 0)] * c;
                HermitianMatrix::symmetrize(&d)
            }
        }
    }

    /// Checks `h_n = p_n h_n p_n` for every finite `n` and at infinity.
    pub fn check_compressed(&self, h: &SeqMatrixElement<T>, tol: &ToleranceConfig<T>) -> Result<()> {
        self.validate()?;
        if h.m != self.block_dim() {
            return Err(LabError::DimensionMismatch {
                expected: format!("{0}x{0} blocks for {self}", self.block_dim()),
                found: format!("{0}x{0}", h.m),
            });
        }
        let bound = tol.residual_tol * h.sup_norm().max(T::one());
        let p = self.finite_projection();
        for (label, e) in h.finite_entries() {
            if off_corner(e, &p) > bound {
                return Err(LabError::NotCompressed { index: label });
            }
        }
        if off_corner(&h.at_infinity, &self.infinite_projection()) > bound {
            return Err(LabError::NotCompressed { index: "inf".into() });
        }
        Ok(())
    }

    /// Builds an element of the face from corner data: finite entries are
    /// `d × d` corner blocks, the value at infinity is a full block.
    pub fn element_from_corners(
        &self,
        prefix: &[HermitianMatrix<T>],
        cycle: &[HermitianMatrix<T>],
        at_infinity: HermitianMatrix<T>,
    ) -> Result<SeqMatrixElement<T>> {
        self.validate()?;
        let m = self.block_dim();
        let d = self.corner_dim();
        let lift = |a: &HermitianMatrix<T>| -> Result<HermitianMatrix<T>> {
            if a.dim() != d {
                return Err(LabError::DimensionMismatch {
                    expected: format!("{d}x{d} corner block"),
                    found: format!("{0}x{0}", a.dim()),
                });
            }
            Ok(HermitianMatrix::symmetrize(&GeneralMatrix::from_fn(m, m, |i, j| {
                if i < d && j < d {
                    a[(i, j)]
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            })))
        };
        let prefix = prefix.iter().map(lift).collect::<Result<Vec<_>>>()?;
        let cycle = cycle.iter().map(lift).collect::<Result<Vec<_>>>()?;
        SeqMatrixElement::new(prefix, cycle, at_infinity)
    }

    /// Applies `f` inside every corner `p_n M p_n` (compress to the range of
    /// `p_n`, apply `f`, embed back).
    pub fn functional_calculus(
        &self,
        f: &ScalarFunction<T>,
        h: &SeqMatrixElement<T>,
        tol: &ToleranceConfig<T>,
    ) -> Result<SeqMatrixElement<T>> {
        self.check_compressed(h, tol)?;
        let pf = self.finite_projection();
        let pi = self.infinite_projection();
        h.try_map(|n, e| {
            let p = if n.is_some() { &pf } else { &pi };
            f.on_corner(p, e, tol).map_err(|err| match err {
                LabError::DomainViolation { domain, offending } => LabError::DomainViolation {
                    domain: format!(
                        "{domain} (at index {})",
                        n.map_or_else(|| "inf".to_string(), |n| n.to_string())
                    ),
                    offending,
                },
                other => other,
            })
        })
    }
}

/// Largest entry of `h − p h p`.
fn off_corner<T: Scalar>(h: &HermitianMatrix<T>, p: &ProjectionMatrix<T>) -> T {
    let php = h.congruence(p.as_matrix());
    (h.as_matrix() - php.as_matrix()).max_abs()
}

/// `f` applied within the corners, as a free function.
pub fn face_functional_calculus<T: Scalar>(
    f: &ScalarFunction<T>,
    h: &SeqMatrixElement<T>,
    face: &FaceModel<T>,
    tol: &ToleranceConfig<T>,
) -> Result<SeqMatrixElement<T>> {
    face.functional_calculus(f, h, tol)
}
