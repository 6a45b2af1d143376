//! Norm-constrained completions: keep a column block (or a corner) of a matrix
//! fixed while pulling its norm down to at most one.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::hermitian::{HermitianMatrix, ProjectionMatrix};
use crate::linalg::matrix::GeneralMatrix;
use crate::linalg::random::{gaussian_matrix, sample_proper_projection};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// `s₁` with `‖s₁q‖ ≤ 1` and `‖s₁‖ ≤ 1 + ε`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ColumnConstraint<T: Scalar> {
    pub s1: GeneralMatrix<T>,
    pub q: ProjectionMatrix<T>,
    pub eps: T,
}

impl<T: Scalar> ColumnConstraint<T> {
    pub fn new(s1: GeneralMatrix<T>, q: ProjectionMatrix<T>, eps: T, tol: &ToleranceConfig<T>) -> Result<Self> {
        let c = Self { s1, q, eps };
        c.validate(tol)?;
        Ok(c)
    }

    pub fn validate(&self, tol: &ToleranceConfig<T>) -> Result<()> {
        if !self.s1.is_square() || self.s1.rows() != self.q.dim() {
            return Err(LabError::DimensionMismatch {
                expected: format!("{0}x{0} matrix", self.q.dim()),
                found: format!("{}x{}", self.s1.rows(), self.s1.cols()),
            });
        }
        if !(self.eps >= T::zero()) {
            return Err(LabError::BadParameters(format!("eps must be nonnegative, got {}", self.eps)));
        }
        let fixed = (&self.s1 * self.q.as_matrix()).operator_norm();
        if fixed > T::one() + tol.residual_tol {
            return Err(LabError::InfeasibleColumn { norm: fixed.as_f64() });
        }
        let total = self.s1.operator_norm();
        if total > T::one() + self.eps + tol.residual_tol {
            return Err(LabError::PreconditionViolated(format!(
                "||s1|| <= 1 + eps fails: ||s1|| = {total}, eps = {}",
                self.eps
            )));
        }
        Ok(())
    }
}

/// `t` with `‖ptq‖ ≤ 1` and `‖t‖ ≤ 1 + ε`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CornerConstraint<T: Scalar> {
    pub t: GeneralMatrix<T>,
    pub p: ProjectionMatrix<T>,
    pub q: ProjectionMatrix<T>,
    pub eps: T,
}

impl<T: Scalar> CornerConstraint<T> {
    pub fn new(
        t: GeneralMatrix<T>,
        p: ProjectionMatrix<T>,
        q: ProjectionMatrix<T>,
        eps: T,
        tol: &ToleranceConfig<T>,
    ) -> Result<Self> {
        let c = Self { t, p, q, eps };
        c.validate(tol)?;
        Ok(c)
    }

    pub fn validate(&self, tol: &ToleranceConfig<T>) -> Result<()> {
        let n = self.p.dim();
        if self.q.dim() != n || !self.t.is_square() || self.t.rows() != n {
            return Err(LabError::DimensionMismatch {
                expected: format!("{n}x{n} matrix with projections of dimension {n}"),
                found: format!("{}x{} matrix, q of dimension {}", self.t.rows(), self.t.cols(), self.q.dim()),
            });
        }
        if !(self.eps >= T::zero()) {
            return Err(LabError::BadParameters(format!("eps must be nonnegative, got {}", self.eps)));
        }
        let corner = corner_block(&self.t, &self.p, &self.q).operator_norm();
        if corner > T::one() + tol.residual_tol {
            return Err(LabError::InfeasibleCorner { norm: corner.as_f64() });
        }
        let total = self.t.operator_norm();
        if total > T::one() + self.eps + tol.residual_tol {
            return Err(LabError::PreconditionViolated(format!(
                "||t|| <= 1 + eps fails: ||t|| = {total}, eps = {}",
                self.eps
            )));
        }
        Ok(())
    }
}

fn corner_block<T: Scalar>(t: &GeneralMatrix<T>, p: &ProjectionMatrix<T>, q: &ProjectionMatrix<T>) -> GeneralMatrix<T> {
    &(p.as_matrix() * t) * q.as_matrix()
}

/// `(1 − M)^{1/2} ((1+ε)² − M)^{−1/2}` for `0 ≤ M ≤ (1+ε)²`, clamping `1 − M` at 0.
fn shrink_factor<T: Scalar>(m: &HermitianMatrix<T>, eps: T) -> Result<GeneralMatrix<T>> {
    let top = (T::one() + eps) * (T::one() + eps);
    let dec = m.spectral()?;
    Ok(dec.map_to_matrix(|w| {
        let gap = top - w;
        if gap <= T::zero() {
            T::zero()
        } else {
            (T::one() - w).max(T::zero()).sqrt() / gap.sqrt()
        }
    }))
}

/// The unchecked column construction `s = K + (1−KK*)^{1/2}((1+ε)²−KK*)^{−1/2} B`.
fn column_formula<T: Scalar>(s1: &GeneralMatrix<T>, q: &ProjectionMatrix<T>, eps: T) -> Result<GeneralMatrix<T>> {
    let k = s1 * q.as_matrix();
    let b = s1 * q.complement().as_matrix();
    let kk = HermitianMatrix::symmetrize(&(&k * &k.adjoint()));
    let x = shrink_factor(&kk, eps)?;
    Ok(&k + &(&x * &b))
}

/// Replaces `s₁` by `s` with `sq = s₁q`, `‖s‖ ≤ 1` and `‖s − s₁‖ ≤ √(2ε+ε²)`.
pub fn fix_column<T: Scalar>(c: &ColumnConstraint<T>, tol: &ToleranceConfig<T>) -> Result<GeneralMatrix<T>> {
    c.validate(tol)?;
    if c.eps == T::zero() {
        return Ok(c.s1.clone());
    }
    let s = column_formula(&c.s1, &c.q, c.eps)?;
    audit_column(&c.s1, &s, &c.q, c.eps, tol)?;
    Ok(s)
}

fn audit_column<T: Scalar>(
    s1: &GeneralMatrix<T>,
    s: &GeneralMatrix<T>,
    q: &ProjectionMatrix<T>,
    eps: T,
    tol: &ToleranceConfig<T>,
) -> Result<()> {
    let drift = (&(s - s1) * q.as_matrix()).operator_norm();
    if drift > tol.residual_tol {
        return Err(LabError::ContractViolated(format!("||sq - s1 q|| = {drift:e}")));
    }
    let norm = s.operator_norm();
    if norm > T::one() + tol.residual_tol {
        return Err(LabError::ContractViolated(format!("||s|| = {norm} exceeds 1")));
    }
    let dist = (s - s1).operator_norm();
    let bound = column_distance_bound(eps);
    if dist > bound + tol.residual_tol {
        return Err(LabError::ContractViolated(format!(
            "||s - s1|| = {dist:e} exceeds sqrt(2 eps + eps^2) = {bound:e}"
        )));
    }
    Ok(())
}

/// `√(2ε + ε²)`.
pub fn column_distance_bound<T: Scalar>(eps: T) -> T {
    (T::lit(2.0) * eps + eps * eps).sqrt()
}

/// Outputs of [`fix_corner_detailed`], including the intermediate `t₁`.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct CornerCompletion<T: Scalar> {
    pub t_prime: GeneralMatrix<T>,
    pub t1: GeneralMatrix<T>,
    pub t1_norm: T,
    pub distance: T,
}

/// Replaces `t` by `t′` with `pt′q = ptq`, `‖t′‖ ≤ 1` and `‖t′ − t‖ ≤ 2√(2ε+ε²)`.
pub fn fix_corner<T: Scalar>(c: &CornerConstraint<T>, tol: &ToleranceConfig<T>) -> Result<GeneralMatrix<T>> {
    Ok(fix_corner_detailed(c, tol)?.t_prime)
}

/// Block construction: shrink `b = pt(1−q)` and `c = (1−p)tq` against the
/// corner `a = ptq`, check `‖t₁‖ ≤ 1+ε`, then fix the column `q` of `t₁`.
pub fn fix_corner_detailed<T: Scalar>(c: &CornerConstraint<T>, tol: &ToleranceConfig<T>) -> Result<CornerCompletion<T>> {
    c.validate(tol)?;
    if c.eps == T::zero() {
        return Ok(CornerCompletion {
            t_prime: c.t.clone(),
            t1: c.t.clone(),
            t1_norm: c.t.operator_norm(),
            distance: T::zero(),
        });
    }
    let p = c.p.as_matrix();
    let pc = c.p.complement();
    let q = c.q.as_matrix();
    let qc = c.q.complement();
    let a = &(p * &c.t) * q;
    let b = &(p * &c.t) * qc.as_matrix();
    let cc = &(pc.as_matrix() * &c.t) * q;
    let d = &(pc.as_matrix() * &c.t) * qc.as_matrix();

    let aa = HermitianMatrix::symmetrize(&(&a * &a.adjoint()));
    let a_a = HermitianMatrix::symmetrize(&(&a.adjoint() * &a));
    let b1 = &shrink_factor(&aa, c.eps)? * &b;
    let c1 = &cc * &shrink_factor(&a_a, c.eps)?;
    let t1 = &(&(&a + &b1) + &c1) + &d;

    let t1_norm = t1.operator_norm();
    if t1_norm > T::one() + c.eps + tol.residual_tol {
        return Err(LabError::ContractViolated(format!(
            "intermediate ||t1|| = {t1_norm} exceeds 1 + eps = {}",
            T::one() + c.eps
        )));
    }
    let column = ColumnConstraint {
        s1: t1.clone(),
        q: c.q.clone(),
        eps: c.eps,
    };
    let t_prime = fix_column(&column, tol)?;

    let corner_drift = (&corner_block(&t_prime, &c.p, &c.q) - &a).operator_norm();
    if corner_drift > tol.residual_tol * (T::one() + c.t.operator_norm()) {
        return Err(LabError::ContractViolated(format!("||p t' q - p t q|| = {corner_drift:e}")));
    }
    let distance = (&t_prime - &c.t).operator_norm();
    let bound = T::lit(2.0) * column_distance_bound(c.eps);
    if distance > bound + tol.residual_tol {
        return Err(LabError::ContractViolated(format!(
            "||t' - t|| = {distance:e} exceeds 2 sqrt(2 eps + eps^2) = {bound:e}"
        )));
    }
    Ok(CornerCompletion {
        t_prime,
        t1,
        t1_norm,
        distance,
    })
}

/// Returns `β` with `‖base + β dir‖ ≈ target`, assuming `‖base‖ ≤ target`.
fn norm_bisection<T: Scalar>(base: &GeneralMatrix<T>, dir: &GeneralMatrix<T>, target: T) -> GeneralMatrix<T> {
    let at = |beta: T| base + &dir.scale(beta);
    if dir.operator_norm() == T::zero() {
        return base.clone();
    }
    let mut hi = T::one();
    while at(hi).operator_norm() <= target && hi < T::lit(1e12) {
        hi = hi * T::lit(2.0);
    }
    let mut lo = T::zero();
    for _ in 0..100 {
        let mid = (lo + hi) * T::lit(0.5);
        if at(mid).operator_norm() > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    at(lo)
}

/// Random feasible column instance: `s₁q` of norm in `[0.3, 1]`, with the
/// free block grown until `‖s₁‖` lands uniformly between `‖s₁q‖` and `1+ε`.
pub fn sample_column_instance<T: Scalar>(rng: &mut impl Rng, dim: usize, eps: T) -> ColumnConstraint<T> {
    let q = sample_proper_projection::<T>(rng, dim);
    let g = &gaussian_matrix::<T>(rng, dim, dim) * q.as_matrix();
    let k = scale_to(&g, T::lit(rng.random_range(0.3..=1.0)));
    let free = &gaussian_matrix::<T>(rng, dim, dim) * q.complement().as_matrix();
    let target = draw_between(rng, k.operator_norm(), T::one() + eps);
    let s1 = norm_bisection(&k, &free, target);
    ColumnConstraint { s1, q, eps }
}

/// Random feasible corner instance built the same way around `a = ptq`.
pub fn sample_corner_instance<T: Scalar>(rng: &mut impl Rng, dim: usize, eps: T) -> CornerConstraint<T> {
    let p = sample_proper_projection::<T>(rng, dim);
    let q = sample_proper_projection::<T>(rng, dim);
    let g = corner_block(&gaussian_matrix::<T>(rng, dim, dim), &p, &q);
    let a = scale_to(&g, T::lit(rng.random_range(0.3..=1.0)));
    let r = gaussian_matrix::<T>(rng, dim, dim);
    let free = &r - &corner_block(&r, &p, &q);
    let target = draw_between(rng, a.operator_norm(), T::one() + eps);
    let t = norm_bisection(&a, &free, target);
    CornerConstraint { t, p, q, eps }
}

fn scale_to<T: Scalar>(m: &GeneralMatrix<T>, norm: T) -> GeneralMatrix<T> {
    let n = m.operator_norm();
    if n == T::zero() {
        m.clone()
    } else {
        m.scale(norm / n)
    }
}

fn draw_between<T: Scalar>(rng: &mut impl Rng, lo: T, hi: T) -> T {
    let u: f64 = rng.random_range(0.0..=1.0);
    lo + (hi - lo) * T::lit(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::rng_from_seed;
    use num_complex::Complex;

    fn tol() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    #[test]
    fn zero_slack_is_identity() {
        let mut rng = rng_from_seed(1);
        let c = sample_column_instance::<f64>(&mut rng, 4, 0.0);
        assert_eq!(fix_column(&c, &tol()).unwrap(), c.s1);
        let k = sample_corner_instance::<f64>(&mut rng, 4, 0.0);
        assert_eq!(fix_corner(&k, &tol()).unwrap(), k.t);
    }

    #[test]
    fn full_column_pins_everything() {
        let s1 = GeneralMatrix::from_real_rows(&[vec![0.6f64, 0.0], vec![0.0, -0.8]]).unwrap();
        let c = ColumnConstraint::new(s1.clone(), ProjectionMatrix::identity(2), 0.1, &tol()).unwrap();
        let s = fix_column(&c, &tol()).unwrap();
        assert!((&s - &s1).operator_norm() < 1e-15);
        let too_big = GeneralMatrix::from_diag(&[1.05f64, 0.0]);
        let err = ColumnConstraint::new(too_big, ProjectionMatrix::identity(2), 0.1, &tol());
        assert!(matches!(err, Err(LabError::InfeasibleColumn { .. })));
    }

    #[test]
    fn scalar_inside_unit_disc_is_kept() {
        for v in [0.0, 0.3, -0.99, 1.0] {
            let s1 = GeneralMatrix::from_vec(1, 1, vec![Complex::new(v, 0.0)]).unwrap();
            let c = ColumnConstraint::new(s1.clone(), ProjectionMatrix::identity(1), 0.2, &tol()).unwrap();
            assert_eq!(fix_column(&c, &tol()).unwrap()[(0, 0)], s1[(0, 0)]);
        }
    }

    #[test]
    fn scalar_free_column_is_shrunk_to_unit_norm() {
        // s1 = (1.1) with nothing fixed: K = 0, factor 1/(1+eps), s = 1.
        let s1 = GeneralMatrix::from_vec(1, 1, vec![Complex::new(1.1, 0.0)]).unwrap();
        let c = ColumnConstraint::new(s1, ProjectionMatrix::zero(1), 0.1, &tol()).unwrap();
        let s = fix_column(&c, &tol()).unwrap();
        assert!((s[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_corner_requires_contraction() {
        let t = GeneralMatrix::from_diag(&[0.5f64, -0.9]);
        let id = ProjectionMatrix::identity(2);
        let c = CornerConstraint::new(t.clone(), id.clone(), id.clone(), 0.3, &tol()).unwrap();
        assert!((&fix_corner(&c, &tol()).unwrap() - &t).operator_norm() < 1e-15);
        let big = GeneralMatrix::from_diag(&[1.2f64, 0.0]);
        assert!(matches!(
            CornerConstraint::new(big, id.clone(), id, 0.3, &tol()),
            Err(LabError::InfeasibleCorner { .. })
        ));
    }

    #[test]
    fn random_columns_meet_all_bounds() {
        let mut rng = rng_from_seed(17);
        for i in 0..200 {
            let eps = [1e-1, 1e-2, 1e-3][i % 3];
            let dim = 2 + i % 7;
            let c = sample_column_instance::<f64>(&mut rng, dim, eps);
            let s = fix_column(&c, &tol()).unwrap();
            assert!(s.operator_norm() <= 1.0 + 1e-10);
            assert!((&s - &c.s1).operator_norm() <= column_distance_bound(eps) + 1e-10);
        }
    }

    #[test]
    fn random_corners_meet_all_bounds() {
        let mut rng = rng_from_seed(18);
        for i in 0..200 {
            let eps = [1e-1, 1e-2, 1e-3][i % 3];
            let c = sample_corner_instance::<f64>(&mut rng, 2 + i % 7, eps);
            let out = fix_corner_detailed(&c, &tol()).unwrap();
            assert!(out.t1_norm <= 1.0 + eps + 1e-10);
            assert!(out.t_prime.operator_norm() <= 1.0 + 1e-10);
            assert!(out.distance <= 2.0 * column_distance_bound(eps) + 1e-10);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let tol = ToleranceConfig::<f32>::default();
        let mut rng = rng_from_seed(5);
        let c = sample_column_instance::<f32>(&mut rng, 4, 0.1);
        let s = fix_column(&c, &tol).unwrap();
        assert!(s.operator_norm() <= 1.0 + 1e-4);
    }
}
