//! Functional calculus, Löwner comparisons and corner-algebra primitives.

use crate::error::{LabError, Result};
use crate::interval::Interval;
use crate::linalg::eigen::SpectralDecomposition;
use crate::linalg::hermitian::{HermitianMatrix, ProjectionMatrix};
use crate::linalg::matrix::GeneralMatrix;
use crate::linalg::svd;
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

pub fn spectral_decompose<T: Scalar>(h: &HermitianMatrix<T>) -> Result<SpectralDecomposition<T>> {
    h.spectral()
}

pub fn operator_norm<T: Scalar>(x: &GeneralMatrix<T>) -> T {
    x.operator_norm()
}

/// `λ_min(A − B)`.
pub fn min_eigenvalue_of_difference<T: Scalar>(a: &HermitianMatrix<T>, b: &HermitianMatrix<T>) -> Result<T> {
    a.ensure_same_dim(b)?;
    a.sub(b).min_eigenvalue()
}

/// `A ≥ B` up to `tol`, i.e. `λ_min(A − B) ≥ −tol`.
pub fn loewner_geq<T: Scalar>(a: &HermitianMatrix<T>, b: &HermitianMatrix<T>, tol: T) -> Result<bool> {
    Ok(min_eigenvalue_of_difference(a, b)? >= -tol)
}

/// Default absolute tolerance for comparing `a` and `b`.
pub fn default_loewner_tol<T: Scalar>(a: &HermitianMatrix<T>, b: &HermitianMatrix<T>, tol: &ToleranceConfig<T>) -> T {
    tol.loewner_abs(a.norm(), b.norm())
}

/// Positive square root; eigenvalues in `[−eig_tol·||H||, 0)` are clamped to zero.
pub fn psd_sqrt<T: Scalar>(h: &HermitianMatrix<T>, tol: &ToleranceConfig<T>) -> Result<HermitianMatrix<T>> {
    let dec = h.spectral()?;
    let floor = -tol.eig_tol * dec.norm();
    if dec.min_eigenvalue() < floor {
        return Err(LabError::NotPositive {
            min_eigenvalue: dec.min_eigenvalue().as_f64(),
        });
    }
    Ok(HermitianMatrix::symmetrize(&dec.map_to_matrix(|l| l.max(T::zero()).sqrt())))
}

/// `U f(Λ) U*`, requiring the spectrum to lie in `domain`.
///
/// Eigenvalues within `eig_tol·max(||H||, 1)` outside a closed end are snapped
/// onto it before `f` is applied.
pub fn matrix_function<T: Scalar>(
    f: impl Fn(T) -> T,
    domain: &Interval<T>,
    h: &HermitianMatrix<T>,
    tol: &ToleranceConfig<T>,
) -> Result<HermitianMatrix<T>> {
    let dec = h.spectral()?;
    let values = snap_spectrum(&dec.eigenvalues, domain, tol.eig_tol * dec.norm().max(T::one()))?;
    Ok(apply_to_values(&dec, &values, f))
}

/// Same as [`matrix_function`] on an existing decomposition.
pub fn function_of_decomposition<T: Scalar>(
    dec: &SpectralDecomposition<T>,
    f: impl Fn(T) -> T,
    domain: &Interval<T>,
    tol: &ToleranceConfig<T>,
) -> Result<HermitianMatrix<T>> {
    let values = snap_spectrum(&dec.eigenvalues, domain, tol.eig_tol * dec.norm().max(T::one()))?;
    Ok(apply_to_values(dec, &values, f))
}

fn snap_spectrum<T: Scalar>(eigs: &[T], domain: &Interval<T>, slack: T) -> Result<Vec<T>> {
    let mut bad = Vec::new();
    let mut out = Vec::with_capacity(eigs.len());
    for &l in eigs {
        match domain.snap(l, slack) {
            Some(v) => out.push(v),
            None => bad.push(l.as_f64()),
        }
    }
    if !bad.is_empty() {
        return Err(LabError::DomainViolation {
            domain: domain.to_string(),
            offending: bad,
        });
    }
    Ok(out)
}

fn apply_to_values<T: Scalar>(dec: &SpectralDecomposition<T>, values: &[T], f: impl Fn(T) -> T) -> HermitianMatrix<T> {
    let mapped: Vec<T> = values.iter().map(|&v| f(v)).collect();
    let shadow = SpectralDecomposition {
        eigenvalues: mapped,
        basis: dec.basis.clone(),
    };
    HermitianMatrix::symmetrize(&shadow.map_to_matrix(|l| l))
}

/// `P H P`.
pub fn compress<T: Scalar>(p: &ProjectionMatrix<T>, h: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
    p.ensure_same_dim(h)?;
    Ok(h.congruence(p.as_matrix()))
}

/// Restriction `V* H V` of `h` to the range of `p`, with `V` the orthonormal range basis.
pub fn restrict<T: Scalar>(p: &ProjectionMatrix<T>, h: &HermitianMatrix<T>) -> Result<(GeneralMatrix<T>, HermitianMatrix<T>)> {
    p.ensure_same_dim(h)?;
    let v = p.range_basis()?;
    let block = h.congruence(&v);
    Ok((v, block))
}

/// Re-embeds an `r × r` block along the columns of `v` (`V B V*`).
pub fn embed<T: Scalar>(v: &GeneralMatrix<T>, block: &HermitianMatrix<T>) -> HermitianMatrix<T> {
    HermitianMatrix::symmetrize(&(&(v * block.as_matrix()) * &v.adjoint()))
}

/// Applies `f` inside the corner `pMp`: compress to `range(p)`, apply `f`, re-embed.
/// Zero off the range of `p`.
pub fn corner_function<T: Scalar>(
    f: impl Fn(T) -> T,
    domain: &Interval<T>,
    p: &ProjectionMatrix<T>,
    h: &HermitianMatrix<T>,
    tol: &ToleranceConfig<T>,
) -> Result<HermitianMatrix<T>> {
    if p.rank() == 0 {
        p.ensure_same_dim(h)?;
        return Ok(HermitianMatrix::zeros(h.dim()));
    }
    let (v, block) = restrict(p, h)?;
    let fb = matrix_function(f, domain, &block, tol)?;
    Ok(embed(&v, &fb))
}

/// Inverse of `PHP` inside the corner algebra `pMp`.
///
/// Requires `PHP ≥ η P` on the range of `P`; the result `G` satisfies
/// `G = PGP` and `G (PHP) = P`.
pub fn compression_inverse<T: Scalar>(
    p: &ProjectionMatrix<T>,
    h: &HermitianMatrix<T>,
    eta: T,
    tol: &ToleranceConfig<T>,
) -> Result<HermitianMatrix<T>> {
    if !(eta > T::zero()) {
        return Err(LabError::BadParameters(format!("eta must be positive, got {eta}")));
    }
    if p.rank() == 0 {
        p.ensure_same_dim(h)?;
        return Ok(HermitianMatrix::zeros(h.dim()));
    }
    let (v, block) = restrict(p, h)?;
    let dec = block.spectral()?;
    let lmin = dec.min_eigenvalue();
    if lmin < eta - tol.loewner_abs(dec.norm(), T::zero()) {
        return Err(LabError::NotBoundedBelow {
            min_eigenvalue: lmin.as_f64(),
            eta: eta.as_f64(),
        });
    }
    let inv = HermitianMatrix::symmetrize(&dec.map_to_matrix(|l| T::one() / l));
    Ok(embed(&v, &inv))
}

/// `f(PHP)` computed in the corner, where `PHP` must be bounded below by `η` on
/// `range(P)`; used for negative powers such as `(PHP)^{-1/2}`.
pub fn compression_power<T: Scalar>(
    p: &ProjectionMatrix<T>,
    h: &HermitianMatrix<T>,
    power: T,
    eta: T,
    tol: &ToleranceConfig<T>,
) -> Result<HermitianMatrix<T>> {
    let (v, block) = restrict(p, h)?;
    let dec = block.spectral()?;
    if dec.min_eigenvalue() < eta - tol.loewner_abs(dec.norm(), T::zero()) {
        return Err(LabError::NotBoundedBelow {
            min_eigenvalue: dec.min_eigenvalue().as_f64(),
            eta: eta.as_f64(),
        });
    }
    let pw = HermitianMatrix::symmetrize(&dec.map_to_matrix(|l| l.powf(power)));
    Ok(embed(&v, &pw))
}

/// Projection onto the column span of `x`, treating singular values
/// `≤ rank_tol·σ_max` as zero.
pub fn range_projection<T: Scalar>(x: &GeneralMatrix<T>, rank_tol: T) -> ProjectionMatrix<T> {
    let basis = svd::range_basis(x, rank_tol);
    ProjectionMatrix::from_orthonormal_columns(&basis)
}
