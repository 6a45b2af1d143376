//! Rank-one gaps that force a non-convergent interpolant.
//!
//! With `p = diag(1, 0)`, `y = 0` and
//! `h_n = [[t_nδ_n, √δ_n], [√δ_n, ½]]`, `k_n = [[(t_n−1)δ_n, 0], [0, −½]]`,
//! every gap `h_n − k_n = [[δ_n, √δ_n], [√δ_n, 1]]` has rank one, so any
//! `x_n ∈ [k_n, h_n]` lies on the segment `k_n + s_n(h_n − k_n)`. Requiring
//! `p x_n p = 0` pins `s_n = 1 − t_n`, and then `(x_n)_{22} = ½ − t_n`, which
//! has no limit when `t_n` does not converge.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::hermitian::HermitianMatrix;
use crate::linalg::matrix::GeneralMatrix;
use crate::scalar::Scalar;
use crate::sequence::element::SeqMatrixElement;
use crate::tolerance::ToleranceConfig;

/// Positive sequence decreasing to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DeltaSchedule {
    /// `1/n`.
    Harmonic,
    /// `ratio^n` with `0 < ratio < 1`.
    Geometric { ratio: f64 },
    /// `n^{-exponent}` with `exponent > 0`.
    Power { exponent: f64 },
}

impl DeltaSchedule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Harmonic => Ok(()),
            Self::Geometric { ratio } if ratio > 0.0 && ratio < 1.0 => Ok(()),
            Self::Power { exponent } if exponent > 0.0 => Ok(()),
            other => Err(LabError::BadParameters(format!("{other:?} does not decrease to 0"))),
        }
    }

    /// `δ_n` for the 1-based index `n`.
    pub fn value(&self, n: usize) -> f64 {
        let n = n as f64;
        match *self {
            Self::Harmonic => 1.0 / n,
            Self::Geometric { ratio } => ratio.powf(n),
            Self::Power { exponent } => n.powf(-exponent),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct InfeasibilityWitness<T: Scalar> {
    /// Forced `s_n`, one per index `1..=horizon`.
    pub forced_parameters: Vec<T>,
    /// The forced `(x_n)_{22}` over one cycle.
    pub forced_corner: Vec<T>,
    /// `max − min` of the forced `(x_n)_{22}` over the cycle.
    pub oscillation: T,
    pub infeasible: bool,
    pub conclusion: String,
    /// Largest `|det(h_n − k_n)|`.
    pub max_gap_determinant: T,
    /// Smallest eigenvalue of `h_n − k_n` relative to its norm, maximised over `n`.
    pub max_relative_second_eigenvalue: T,
    /// Largest `|s_n − (1 − t_n)|`.
    pub max_forced_residual: T,
    pub horizon: usize,
}

/// `(h_n, k_n)` for given `t` and `δ`.
pub fn obstruction_pair<T: Scalar>(t: T, delta: T) -> (HermitianMatrix<T>, HermitianMatrix<T>) {
    let r = |rows: [[T; 2]; 2]| {
        HermitianMatrix::symmetrize(&GeneralMatrix::from_fn(2, 2, |i, j| Complex::new(rows[i][j], T::zero())))
    };
    let half = T::lit(0.5);
    let sd = delta.sqrt();
    let h = r([[t * delta, sd], [sd, half]]);
    let k = r([[(t - T::one()) * delta, T::zero()], [T::zero(), -half]]);
    (h, k)
}

/// Builds the rank-one gaps over `n = 1..=horizon`, solves `p x_n p = 0` on
/// each segment, and reports whether the forced `(x_n)_{22}` oscillates.
pub fn verify_rank_one_obstruction<T: Scalar>(
    t_cycle: &[T],
    delta: &DeltaSchedule,
    horizon: usize,
    tol: &ToleranceConfig<T>,
) -> Result<InfeasibilityWitness<T>> {
    delta.validate()?;
    if t_cycle.iter().any(|&t| !(t > T::zero() && t < T::one())) {
        return Err(LabError::BadParameters(format!("t_cycle must lie in (0, 1), got {t_cycle:?}")));
    }
    let lo = t_cycle.iter().copied().fold(T::infinity(), T::min);
    let hi = t_cycle.iter().copied().fold(T::neg_infinity(), T::max);
    if t_cycle.len() < 2 || hi - lo <= tol.residual_tol {
        return Err(LabError::BadParameters(
            "t_cycle needs at least two distinct values; a convergent t_n admits an interpolant".into(),
        ));
    }
    if horizon < t_cycle.len() {
        return Err(LabError::BadParameters(format!(
            "horizon {horizon} is shorter than the cycle length {}",
            t_cycle.len()
        )));
    }

    let mut forced = Vec::with_capacity(horizon);
    let mut max_det = T::zero();
    let mut max_second = T::zero();
    let mut max_residual = T::zero();
    let mut tail = vec![T::nan(); t_cycle.len()];
    for n in 1..=horizon {
        let t = t_cycle[(n - 1) % t_cycle.len()];
        let d = T::lit(delta.value(n));
        if !(d > T::zero()) {
            return Err(LabError::BadParameters(format!("delta_{n} = {d} is not positive")));
        }
        let (h, k) = obstruction_pair(t, d);
        let gap = h.sub(&k);
        max_det = max_det.max(gap.determinant().norm());
        let eig = gap.eigenvalues()?;
        let top = eig.iter().copied().fold(T::zero(), |a, b| a.max(b.abs()));
        let low = eig.iter().copied().fold(T::infinity(), |a, b| a.min(b.abs()));
        max_second = max_second.max(low / top);
        // (x_n)_{11} = k_11 + s·gap_11 = 0
        let s = -k[(0, 0)].re / gap[(0, 0)].re;
        if !(s >= -tol.residual_tol && s <= T::one() + tol.residual_tol) {
            return Err(LabError::ContractViolated(format!("forced s_{n} = {s} leaves [0, 1]")));
        }
        max_residual = max_residual.max((s - (T::one() - t)).abs());
        let x22 = k[(1, 1)].re + s * gap[(1, 1)].re;
        tail[(n - 1) % t_cycle.len()] = x22;
        forced.push(s);
    }
    let xmin = tail.iter().copied().fold(T::infinity(), T::min);
    let xmax = tail.iter().copied().fold(T::neg_infinity(), T::max);
    let oscillation = xmax - xmin;
    let infeasible = oscillation > tol.residual_tol;
    let conclusion = if infeasible {
        format!(
            "infeasible: every x in [k, h] with pxp = 0 has (x_n)_22 = 1/2 - t_n, which oscillates by {oscillation:e}, so no convergent x exists"
        )
    } else {
        "not certified: the forced (x_n)_22 does not oscillate".to_string()
    };
    Ok(InfeasibilityWitness {
        forced_parameters: forced,
        forced_corner: tail,
        oscillation,
        infeasible,
        conclusion,
        max_gap_determinant: max_det,
        max_relative_second_eigenvalue: max_second,
        max_forced_residual: max_residual,
        horizon,
    })
}

/// The forced interpolant `x_n = k_n + (1 − t_n)(h_n − k_n)` as a sequence:
/// the prefix covers `n = 1..=horizon − cycle length`, the cycle the last
/// `cycle length` indices, and the value at infinity is the first cycle entry.
pub fn forced_sequence<T: Scalar>(t_cycle: &[T], delta: &DeltaSchedule, horizon: usize) -> Result<SeqMatrixElement<T>> {
    if t_cycle.is_empty() || horizon < t_cycle.len() {
        return Err(LabError::BadParameters("horizon must cover one cycle".into()));
    }
    let mut entries = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        let t = t_cycle[(n - 1) % t_cycle.len()];
        let (h, k) = obstruction_pair(t, T::lit(delta.value(n)));
        entries.push(k.add(&h.sub(&k).scale(T::one() - t)));
    }
    let cycle = entries.split_off(horizon - t_cycle.len());
    let inf = cycle[0].clone();
    SeqMatrixElement::new(entries, cycle, inf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::face::FaceModel;
    use crate::sequence::verdict::is_in_compressed_algebra;

    #[test]
    fn quarter_three_quarter_cycle() {
        let tol = ToleranceConfig::default();
        let w = verify_rank_one_obstruction(&[0.25f64, 0.75], &DeltaSchedule::Harmonic, 64, &tol).unwrap();
        assert!(w.infeasible);
        assert!((w.oscillation - 0.5).abs() < 1e-12);
        assert!((w.forced_parameters[0] - 0.75).abs() < 1e-12);
        assert!((w.forced_parameters[1] - 0.25).abs() < 1e-12);
        assert!(w.max_gap_determinant < 1e-12);
        assert!(w.max_forced_residual < 1e-12);
        assert!(w.max_relative_second_eigenvalue < 1e-12);
    }

    #[test]
    fn gap_is_rank_one() {
        for &d in &[1.0f64, 0.3, 1e-6] {
            let (h, k) = obstruction_pair(0.4, d);
            let g = h.sub(&k);
            assert!(g.determinant().norm() < 1e-15);
            assert!((g[(0, 0)].re - d).abs() < 1e-16);
            assert!((g[(1, 1)].re - 1.0).abs() < 1e-16);
        }
    }

    #[test]
    fn bad_parameters() {
        let tol = ToleranceConfig::default();
        let e = verify_rank_one_obstruction(&[0.5f64, 0.5], &DeltaSchedule::Harmonic, 10, &tol);
        assert!(matches!(e, Err(LabError::BadParameters(_))));
        assert!(verify_rank_one_obstruction(&[0.5f64], &DeltaSchedule::Harmonic, 10, &tol).is_err());
        assert!(verify_rank_one_obstruction(&[0.2f64, 0.6], &DeltaSchedule::Harmonic, 1, &tol).is_err());
        assert!(verify_rank_one_obstruction(&[0.2f64, 1.6], &DeltaSchedule::Harmonic, 10, &tol).is_err());
        assert!(verify_rank_one_obstruction(&[0.2f64, 0.6], &DeltaSchedule::Geometric { ratio: 1.5 }, 10, &tol).is_err());
    }

    #[test]
    fn oscillation_equals_spread_of_t() {
        let tol = ToleranceConfig::default();
        let t = [0.1f64, 0.55, 0.9, 0.3];
        let w = verify_rank_one_obstruction(&t, &DeltaSchedule::Power { exponent: 0.5 }, 40, &tol).unwrap();
        assert!((w.oscillation - 0.8).abs() < 1e-12);
        for (i, &x) in w.forced_corner.iter().enumerate() {
            assert!((x - (0.5 - t[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn forced_sequence_is_not_convergent() {
        let tol = ToleranceConfig::default();
        let x = forced_sequence(&[0.25f64, 0.75], &DeltaSchedule::Harmonic, 20).unwrap();
        assert!(!is_in_compressed_algebra(&x, &FaceModel::Block { k: 2, l: 0 }, &tol).unwrap());
        assert!(!x.is_convergent(&tol));
        for n in 1..=20 {
            assert!(x.entry(n)[(0, 0)].norm() < 1e-15);
        }
    }
}
