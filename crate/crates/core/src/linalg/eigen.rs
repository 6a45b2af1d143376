//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{LabError, Result};
use crate::linalg::matrix::GeneralMatrix;
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the unitary basis whose columns are the
/// corresponding eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<T: Scalar> {
    pub eigenvalues: Vec<T>,
    pub basis: GeneralMatrix<T>,
}

impl<T: Scalar> SpectralDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigenvalues.last().copied().unwrap_or_else(T::zero)
    }

    /// Spectral radius, i.e. the operator norm of the decomposed matrix.
    pub fn norm(&self) -> T {
        self.min_eigenvalue().abs().max(self.max_eigenvalue().abs())
    }

    /// `U diag(f(λ)) U*` as a raw matrix (Hermitian whenever `f` is real-valued).
    pub fn map_to_matrix(&self, f: impl Fn(T) -> T) -> GeneralMatrix<T> {
        let n = self.dim();
        let u = &self.basis;
        let vals: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = GeneralMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex::zero();
                for (k, &v) in vals.iter().enumerate() {
                    if v == T::zero() {
                        continue;
                    }
                    acc = acc + u[(i, k)] * u[(j, k)].conj() * v;
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)].im = T::zero();
        }
        out
    }

    pub fn reconstruct(&self) -> GeneralMatrix<T> {
        self.map_to_matrix(|l| l)
    }
}

/// Diagonalizes a Hermitian matrix with cyclic Jacobi rotations.
///
/// The input is trusted to be Hermitian; only its upper triangle and the real
/// part of its diagonal influence the result. Iteration stops when the
/// off-diagonal Frobenius mass drops below `1e-14 * ||H||_F` (or a few ulps for
/// lower-precision scalars).
pub fn jacobi_eigen<T: Scalar>(h: &GeneralMatrix<T>) -> Result<SpectralDecomposition<T>> {
    assert!(h.is_square(), "eigen-decomposition of a non-square matrix");
    let n = h.rows();
    let mut a = GeneralMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex::new(h[(i, i)].re, T::zero())
        } else if i < j {
            h[(i, j)]
        } else {
            h[(j, i)].conj()
        }
    });
    let mut v = GeneralMatrix::identity(n);
    let total = a.frobenius_norm();
    let threshold = T::floor_tol(1e-14, 4.0) * total;
    let two = T::lit(2.0);

    let mut converged = n <= 1 || total == T::zero();
    let mut sweep = 0;
    while !converged {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        if sweep == MAX_SWEEPS {
            break;
        }
        sweep += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == T::zero() {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (two * r);
                let t = if theta.abs() > T::lit(1e150) {
                    T::one() / (two * theta)
                } else {
                    let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                // Phase that makes a_pq real, folded into the rotation
                // J = [[c, s], [-s conj(e), c conj(e)]] on columns p, q.
                let e = apq / r;
                let ec = e.conj();
                rotate_columns(&mut a, p, q, c, s, ec);
                rotate_rows(&mut a, p, q, c, s, e);
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
                rotate_columns(&mut v, p, q, c, s, ec);
            }
        }
    }
    if !converged {
        return Err(LabError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let basis = GeneralMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SpectralDecomposition { eigenvalues, basis })
}

fn off_diagonal_norm<T: Scalar>(a: &GeneralMatrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

// m <- m J restricted to columns p, q.
fn rotate_columns<T: Scalar>(m: &mut GeneralMatrix<T>, p: usize, q: usize, c: T, s: T, ec: Complex<T>) {
    for k in 0..m.rows() {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = mp * c - mq * ec * s;
        m[(k, q)] = mp * s + mq * ec * c;
    }
}

// m <- J* m restricted to rows p, q.
fn rotate_rows<T: Scalar>(m: &mut GeneralMatrix<T>, p: usize, q: usize, c: T, s: T, e: Complex<T>) {
    for k in 0..m.cols() {
        let mp = m[(p, k)];
        let mq = m[(q, k)];
        m[(p, k)] = mp * c - mq * e * s;
        m[(q, k)] = mp * s + mq * e * c;
    }
}
