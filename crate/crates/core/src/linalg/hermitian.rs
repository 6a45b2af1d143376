use std::ops::Deref;

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, Result};
use crate::linalg::eigen::{jacobi_eigen, SpectralDecomposition};
use crate::linalg::matrix::GeneralMatrix;
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// Square complex matrix equal to its adjoint.
///
/// Construction validates the Hermitian property against `hermitian_tol`
/// (relative to the largest entry) and then stores the exact Hermitian part
/// `(A + A*)/2`, so downstream code can rely on exact symmetry.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix<T: Scalar> {
    inner: GeneralMatrix<T>,
}

impl<T: Scalar> HermitianMatrix<T> {
    pub fn new(m: GeneralMatrix<T>, tol: &ToleranceConfig<T>) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(LabError::DimensionMismatch {
                expected: "non-empty square matrix".into(),
                found: format!("{}x{}", m.rows(), m.cols()),
            });
        }
        let asym = asymmetry(&m);
        let bound = tol.hermitian_tol * m.max_abs();
        if asym > bound {
            return Err(LabError::NonHermitianInput {
                asymmetry: asym.as_f64(),
                tolerance: bound.as_f64(),
            });
        }
        Ok(Self::symmetrize(&m))
    }

    /// Hermitian part `(A + A*)/2` without validation. Used for results that are
    /// Hermitian in exact arithmetic (`z* z`, `p h p`, sums of Hermitian terms).
    pub fn symmetrize(m: &GeneralMatrix<T>) -> Self {
        assert!(m.is_square(), "symmetrize on non-square matrix");
        let half = T::lit(0.5);
        let inner = GeneralMatrix::from_fn(m.rows(), m.cols(), |i, j| {
            if i == j {
                Complex::new(m[(i, i)].re, T::zero())
            } else {
                (m[(i, j)] + m[(j, i)].conj()) * half
            }
        });
        Self { inner }
    }

    pub fn from_real_rows(rows: &[Vec<T>], tol: &ToleranceConfig<T>) -> Result<Self> {
        Self::new(GeneralMatrix::from_real_rows(rows)?, tol)
    }

    pub fn from_diag(diag: &[T]) -> Self {
        Self {
            inner: GeneralMatrix::from_diag(diag),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: GeneralMatrix::identity(n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: GeneralMatrix::zeros(n, n),
        }
    }

    pub fn scalar(n: usize, value: T) -> Self {
        Self::identity(n).scale(value)
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn as_matrix(&self) -> &GeneralMatrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> GeneralMatrix<T> {
        self.inner
    }

    pub fn spectral(&self) -> Result<SpectralDecomposition<T>> {
        jacobi_eigen(&self.inner)
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        Ok(self.spectral()?.eigenvalues)
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        Ok(self.spectral()?.min_eigenvalue())
    }

    /// Operator norm (spectral radius for Hermitian input).
    pub fn norm(&self) -> T {
        self.spectral().map(|d| d.norm()).unwrap_or_else(|_| self.inner.operator_norm())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::symmetrize(&(&self.inner + &other.inner))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::symmetrize(&(&self.inner - &other.inner))
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            inner: self.inner.scale(s),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::one())
    }

    /// `self + s * 1`.
    pub fn shift(&self, s: T) -> Self {
        Self {
            inner: self.inner.add_identity(s),
        }
    }

    /// `x* self x` for a conformable general matrix.
    pub fn congruence(&self, x: &GeneralMatrix<T>) -> Self {
        Self::symmetrize(&(&(&x.adjoint() * &self.inner) * x))
    }

    pub fn ensure_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(LabError::DimensionMismatch {
                expected: format!("dimension {}", self.dim()),
                found: format!("dimension {}", other.dim()),
            });
        }
        Ok(())
    }
}

impl<T: Scalar> Deref for HermitianMatrix<T> {
    type Target = GeneralMatrix<T>;
    fn deref(&self) -> &GeneralMatrix<T> {
        &self.inner
    }
}

impl<T: Scalar> std::fmt::Debug for HermitianMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Hermitian{:?}", self.inner)
    }
}

fn asymmetry<T: Scalar>(m: &GeneralMatrix<T>) -> T {
    let n = m.rows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Orthogonal projection.
#[derive(Clone, PartialEq)]
pub struct ProjectionMatrix<T: Scalar> {
    matrix: HermitianMatrix<T>,
    rank: usize,
}

impl<T: Scalar> ProjectionMatrix<T> {
    /// Validates `||P² − P|| ≤ proj_tol` and that every eigenvalue sits within
    /// `proj_tol` of 0 or 1.
    pub fn new(matrix: HermitianMatrix<T>, tol: &ToleranceConfig<T>) -> Result<Self> {
        let sq = &*matrix * &*matrix;
        let idem = (&sq - &*matrix).operator_norm();
        if idem > tol.proj_tol {
            return Err(LabError::NotAProjection(format!("||P^2 - P|| = {idem:e}")));
        }
        let dec = matrix.spectral()?;
        let mut rank = 0;
        for &l in &dec.eigenvalues {
            if (l - T::one()).abs() <= tol.proj_tol {
                rank += 1;
            } else if l.abs() > tol.proj_tol {
                return Err(LabError::NotAProjection(format!("eigenvalue {l} not in {{0, 1}}")));
            }
        }
        Ok(Self { matrix, rank })
    }

    /// Projection `V V*` onto the span of orthonormal columns `V`.
    pub fn from_orthonormal_columns(v: &GeneralMatrix<T>) -> Self {
        let matrix = HermitianMatrix::symmetrize(&(v * &v.adjoint()));
        Self {
            matrix,
            rank: v.cols(),
        }
    }

    /// Coordinate projection keeping the listed basis vectors.
    pub fn coordinate(dim: usize, keep: &[usize]) -> Result<Self> {
        let mut diag = vec![T::zero(); dim];
        for &i in keep {
            if i >= dim {
                return Err(LabError::BadRank { rank: i, dim });
            }
            diag[i] = T::one();
        }
        let rank = diag.iter().filter(|&&d| d == T::one()).count();
        Ok(Self {
            matrix: HermitianMatrix::from_diag(&diag),
            rank,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: HermitianMatrix::identity(dim),
            rank: dim,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: HermitianMatrix::zeros(dim),
            rank: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &HermitianMatrix<T> {
        &self.matrix
    }

    /// `1 − P`.
    pub fn complement(&self) -> Self {
        Self {
            matrix: HermitianMatrix::identity(self.dim()).sub(&self.matrix),
            rank: self.dim() - self.rank,
        }
    }

    /// Orthonormal basis of the range, as an `n × rank` matrix.
    pub fn range_basis(&self) -> Result<GeneralMatrix<T>> {
        let dec = self.matrix.spectral()?;
        let n = self.dim();
        let half = T::lit(0.5);
        let cols: Vec<usize> = (0..n).filter(|&j| dec.eigenvalues[j] > half).collect();
        Ok(GeneralMatrix::from_fn(n, cols.len(), |i, j| dec.basis[(i, cols[j])]))
    }
}

impl<T: Scalar> Deref for ProjectionMatrix<T> {
    type Target = HermitianMatrix<T>;
    fn deref(&self) -> &HermitianMatrix<T> {
        &self.matrix
    }
}

impl<T: Scalar> std::fmt::Debug for ProjectionMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Projection(rank {}) {:?}", self.rank, self.matrix.as_matrix())
    }
}

/// Repo-wide matrix encoding: `{"dim": n, "re": [[..]], "im": [[..]]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix<T: Scalar>(m: &GeneralMatrix<T>) -> Self {
        let conv = |rows: Vec<Vec<T>>| rows.into_iter().map(|r| r.into_iter().map(T::as_f64).collect()).collect();
        Self {
            dim: m.rows(),
            re: conv(m.real_parts()),
            im: conv(m.imag_parts()),
        }
    }

    pub fn to_hermitian<T: Scalar>(&self, tol: &ToleranceConfig<T>) -> Result<HermitianMatrix<T>> {
        let conv = |rows: &[Vec<f64>]| -> Vec<Vec<T>> { rows.iter().map(|r| r.iter().map(|&x| T::lit(x)).collect()).collect() };
        let m = GeneralMatrix::from_parts(&conv(&self.re), Some(&conv(&self.im)))?;
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(LabError::Format(format!(
                "declared dim {} but payload is {}x{}",
                self.dim,
                m.rows(),
                m.cols()
            )));
        }
        HermitianMatrix::new(m, tol)
    }
}

impl<T: Scalar> Serialize for HermitianMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(&self.inner).serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for HermitianMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        MatrixJson::deserialize(d)?
            .to_hermitian(&ToleranceConfig::default())
            .map_err(D::Error::custom)
    }
}

impl<T: Scalar> Serialize for ProjectionMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for ProjectionMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let h = HermitianMatrix::<T>::deserialize(d)?;
        ProjectionMatrix::new(h, &ToleranceConfig::default()).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian() {
        let tol = ToleranceConfig::<f64>::default();
        let m = GeneralMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.1, 1.0]]).unwrap();
        assert!(matches!(HermitianMatrix::new(m, &tol), Err(LabError::NonHermitianInput { .. })));
        let sq = GeneralMatrix::<f64>::zeros(2, 3);
        assert!(HermitianMatrix::new(sq, &tol).is_err());
    }

    #[test]
    fn json_reader_rejects_non_hermitian_payload() {
        let bad = r#"{"dim":2,"re":[[1,0],[0,1]],"im":[[0,1],[1,0]]}"#;
        assert!(serde_json::from_str::<HermitianMatrix<f64>>(bad).is_err());
        let good = r#"{"dim":2,"re":[[1,0],[0,1]],"im":[[0,1],[-1,0]]}"#;
        let h: HermitianMatrix<f64> = serde_json::from_str(good).unwrap();
        assert_eq!(h[(0, 1)], Complex::new(0.0, 1.0));
        let wrong_dim = r#"{"dim":3,"re":[[1,0],[0,1]],"im":[[0,0],[0,0]]}"#;
        assert!(serde_json::from_str::<HermitianMatrix<f64>>(wrong_dim).is_err());
    }

    #[test]
    fn projection_validation() {
        let tol = ToleranceConfig::<f64>::default();
        let p = ProjectionMatrix::new(HermitianMatrix::from_diag(&[1.0, 0.0, 1.0]), &tol).unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.complement().rank(), 1);
        assert_eq!(p.range_basis().unwrap().cols(), 2);
        assert!(ProjectionMatrix::new(HermitianMatrix::from_diag(&[0.5, 1.0]), &tol).is_err());
    }
}
