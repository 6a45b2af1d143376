//! One-sided (Hestenes) Jacobi orthogonalization.
//!
//! Singular values come out with small absolute error relative to `σ_max`, which
//! is what rank decisions at `1e-10 · σ_max` need; squaring into `X*X` would
//! not resolve them.

use num_complex::Complex;
use num_traits::Zero;

use crate::linalg::matrix::GeneralMatrix;
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 80;

/// Columns of `X V` for a unitary `V` making them mutually orthogonal.
fn orthogonalized_columns<T: Scalar>(x: &GeneralMatrix<T>) -> Vec<Vec<Complex<T>>> {
    let n = x.cols();
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| x.column(j)).collect();
    let tol = T::epsilon() * T::lit(8.0);
    let two = T::lit(2.0);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha: T = cols[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: T = cols[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma = cols[i]
                    .iter()
                    .zip(&cols[j])
                    .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b);
                let g = gamma.norm();
                if g == T::zero() || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (two * g);
                let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                // y_j = conj(phase) x_j makes <x_i, y_j> real and positive.
                let phase = (gamma / g).conj();
                for k in 0..cols[i].len() {
                    let xi = cols[i][k];
                    let yj = cols[j][k] * phase;
                    cols[i][k] = xi * c - yj * s;
                    cols[j][k] = xi * s + yj * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    cols
}

/// Singular values in descending order (`min(rows, cols)` of them).
pub fn singular_values<T: Scalar>(x: &GeneralMatrix<T>) -> Vec<T> {
    let work = if x.cols() > x.rows() { x.adjoint() } else { x.clone() };
    let mut sv: Vec<T> = orthogonalized_columns(&work)
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// Orthonormal basis (as columns) of the column span of `x`, discarding
/// singular directions with `σ ≤ rank_tol · σ_max`.
pub fn range_basis<T: Scalar>(x: &GeneralMatrix<T>, rank_tol: T) -> GeneralMatrix<T> {
    let rows = x.rows();
    let cols = orthogonalized_columns(x);
    let norms: Vec<T> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt())
        .collect();
    let smax = norms.iter().copied().fold(T::zero(), T::max);
    if smax == T::zero() {
        return GeneralMatrix::zeros(rows, 0);
    }
    let mut kept: Vec<Vec<Complex<T>>> = Vec::new();
    let mut idx: Vec<usize> = (0..cols.len()).filter(|&j| norms[j] > rank_tol * smax).collect();
    idx.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap_or(std::cmp::Ordering::Equal));
    for j in idx {
        // One Gram-Schmidt pass against kept vectors tidies residual overlap.
        let mut v: Vec<Complex<T>> = cols[j].iter().map(|&z| z / norms[j]).collect();
        for u in &kept {
            let proj = u.iter().zip(&v).fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b);
            for (vk, uk) in v.iter_mut().zip(u) {
                *vk = *vk - *uk * proj;
            }
        }
        let nv: T = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if nv > T::lit(0.5) {
            kept.push(v.into_iter().map(|z| z / nv).collect());
        }
        if kept.len() == rows {
            break;
        }
    }
    GeneralMatrix::from_columns(rows, &kept)
}
