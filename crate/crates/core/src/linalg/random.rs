//! Seeded samplers for Hermitian matrices, projections and unitaries.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{LabError, Result};
use crate::interval::Interval;
use crate::linalg::hermitian::{HermitianMatrix, ProjectionMatrix};
use crate::linalg::matrix::GeneralMatrix;
use crate::scalar::Scalar;

pub type LabRng = ChaCha8Rng;

/// Open ends of a sampling interval are pulled in by this fraction of its width.
pub const OPEN_END_INSET: f64 = 1e-3;

pub fn rng_from_seed(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-trial seed derived from a master seed (splitmix64 finalizer).
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn gaussian_matrix<T: Scalar>(rng: &mut impl Rng, rows: usize, cols: usize) -> GeneralMatrix<T> {
    GeneralMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(T::lit(re), T::lit(im))
    })
}

/// Haar-distributed unitary: Gram-Schmidt on a complex Gaussian matrix with the
/// phase convention that makes the implicit `R` diagonal positive.
pub fn haar_unitary<T: Scalar>(rng: &mut impl Rng, n: usize) -> GeneralMatrix<T> {
    loop {
        let g = gaussian_matrix::<T>(rng, n, n);
        if let Some(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

fn orthonormalize_columns<T: Scalar>(g: &GeneralMatrix<T>) -> Option<GeneralMatrix<T>> {
    let n = g.rows();
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(g.cols());
    for j in 0..g.cols() {
        let mut v = g.column(j);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for u in &cols {
                let proj = u.iter().zip(&v).fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * *b);
                for (vk, uk) in v.iter_mut().zip(u) {
                    *vk = *vk - *uk * proj;
                }
            }
        }
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if !(nv > T::lit(1e-6)) {
            return None;
        }
        cols.push(v.into_iter().map(|z| z / nv).collect());
    }
    Some(GeneralMatrix::from_columns(n, &cols))
}

/// `U diag(λ) U*` with Haar `U` and the given spectrum.
pub fn with_spectrum<T: Scalar>(rng: &mut impl Rng, spectrum: &[T]) -> HermitianMatrix<T> {
    let u = haar_unitary::<T>(rng, spectrum.len());
    HermitianMatrix::from_diag(spectrum).congruence(&u.adjoint())
}

/// Hermitian matrix with eigenvalues drawn uniformly from `[lo, hi]`.
pub fn sample_hermitian<T: Scalar>(rng: &mut impl Rng, lo: T, hi: T, dim: usize) -> HermitianMatrix<T> {
    let (a, b) = (lo.as_f64(), hi.as_f64());
    let spectrum: Vec<T> = (0..dim)
        .map(|_| if b > a { T::lit(rng.random_range(a..=b)) } else { lo })
        .collect();
    with_spectrum(rng, &spectrum)
}

/// Positive semidefinite matrix with eigenvalues in `[0, scale]`.
pub fn sample_psd<T: Scalar>(rng: &mut impl Rng, scale: T, dim: usize) -> HermitianMatrix<T> {
    sample_hermitian(rng, T::zero(), scale, dim)
}

/// Uniformly rotated projection of the given rank.
pub fn sample_projection<T: Scalar>(rng: &mut impl Rng, dim: usize, rank: usize) -> Result<ProjectionMatrix<T>> {
    if rank > dim {
        return Err(LabError::BadRank { rank, dim });
    }
    let u = haar_unitary::<T>(rng, dim);
    let v = u.submatrix(0..dim, 0..rank);
    Ok(ProjectionMatrix::from_orthonormal_columns(&v))
}

/// Projection with rank uniform in `[1, dim − 1]` (rank 1 when `dim = 1`).
pub fn sample_proper_projection<T: Scalar>(rng: &mut impl Rng, dim: usize) -> ProjectionMatrix<T> {
    let rank = if dim <= 1 { dim } else { rng.random_range(1..dim) };
    sample_projection(rng, dim, rank).expect("rank below dim")
}

/// Hermitian matrix with spectrum in `interval` (open finite ends pulled in slightly).
pub fn random_hermitian<T: Scalar>(interval: &Interval<T>, dim: usize, seed: u64) -> Result<HermitianMatrix<T>> {
    if dim == 0 {
        return Err(LabError::BadRank { rank: 0, dim });
    }
    let (lo, hi) = interval.sampling_range(T::lit(OPEN_END_INSET))?;
    let mut rng = rng_from_seed(seed);
    Ok(sample_hermitian(&mut rng, lo, hi, dim))
}

pub fn random_projection<T: Scalar>(dim: usize, rank: usize, seed: u64) -> Result<ProjectionMatrix<T>> {
    if dim == 0 {
        return Err(LabError::BadRank { rank, dim });
    }
    let mut rng = rng_from_seed(seed);
    sample_projection(&mut rng, dim, rank)
}
