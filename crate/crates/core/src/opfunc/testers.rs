//! Randomized searches for violations of operator convexity, strong operator
//! convexity and operator monotonicity.
//!
//! A search that finds nothing reports "passed at N trials"; that is evidence,
//! not proof.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::interval::Interval;
use crate::linalg::calculus::compress;
use crate::linalg::hermitian::{HermitianMatrix, ProjectionMatrix};
use crate::linalg::random::{rng_from_seed, sample_hermitian, sample_proper_projection, sample_psd, trial_seed, OPEN_END_INSET};
use crate::opfunc::function::ScalarFunction;
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// Trials are evaluated in parallel chunks of this size; the first violation by
/// trial index wins regardless of scheduling.
const CHUNK: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// `p f(php) p ≤ p f(h) p`.
    Davis,
    /// `p f(php) p ≤ f(h)`.
    Strong,
    /// `h₁ ≤ h₂ ⇒ f(h₁) ≤ f(h₂)`.
    Monotone,
}

/// Violating input, replayable from its matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "criterion", rename_all = "lowercase", bound = "")]
pub enum Witness<T: Scalar> {
    Davis {
        h: HermitianMatrix<T>,
        p: ProjectionMatrix<T>,
        /// `λ_min(rhs − lhs)` (negative).
        gap: T,
    },
    Strong {
        h: HermitianMatrix<T>,
        p: ProjectionMatrix<T>,
        gap: T,
    },
    Monotone {
        h1: HermitianMatrix<T>,
        h2: HermitianMatrix<T>,
        gap: T,
    },
}

impl<T: Scalar> Witness<T> {
    pub fn gap(&self) -> T {
        match self {
            Self::Davis { gap, .. } | Self::Strong { gap, .. } | Self::Monotone { gap, .. } => *gap,
        }
    }

    pub fn criterion(&self) -> Criterion {
        match self {
            Self::Davis { .. } => Criterion::Davis,
            Self::Strong { .. } => Criterion::Strong,
            Self::Monotone { .. } => Criterion::Monotone,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TestVerdict<T: Scalar> {
    pub criterion: Criterion,
    pub function: String,
    pub passed: bool,
    /// Trials evaluated (up to and including the witness when one was found).
    pub trials: usize,
    /// Smallest `λ_min(rhs − lhs)` seen.
    pub min_gap: T,
    pub witness: Option<Witness<T>>,
    pub sampling: Interval<T>,
}

#[derive(Debug, Clone)]
pub struct TestConfig<T: Scalar> {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Interval test spectra are drawn from; defaults to the function's domain,
    /// which must then be bounded.
    pub sampling: Option<Interval<T>>,
    pub tol: ToleranceConfig<T>,
}

impl<T: Scalar> TestConfig<T> {
    pub fn new(dims: Vec<usize>, trials: usize, seed: u64) -> Self {
        Self {
            dims,
            trials,
            seed,
            sampling: None,
            tol: ToleranceConfig::default(),
        }
    }

    pub fn with_sampling(mut self, sampling: Interval<T>) -> Self {
        self.sampling = Some(sampling);
        self
    }
}

/// `λ_min(p f(h) p − p f(php) p)` with `f(php)` taken in the corner.
pub fn davis_gap<T: Scalar>(f: &ScalarFunction<T>, h: &HermitianMatrix<T>, p: &ProjectionMatrix<T>, tol: &ToleranceConfig<T>) -> Result<(T, T)> {
    let lhs = f.on_corner(p, h, tol)?;
    let rhs = compress(p, &f.on_matrix(h, tol)?)?;
    gap_and_tol(&rhs, &lhs, tol)
}

/// `λ_min(f(h) − p f(php) p)`.
pub fn strong_gap<T: Scalar>(f: &ScalarFunction<T>, h: &HermitianMatrix<T>, p: &ProjectionMatrix<T>, tol: &ToleranceConfig<T>) -> Result<(T, T)> {
    let lhs = f.on_corner(p, h, tol)?;
    let rhs = f.on_matrix(h, tol)?;
    gap_and_tol(&rhs, &lhs, tol)
}

/// `λ_min(f(h₂) − f(h₁))`.
pub fn monotone_gap<T: Scalar>(f: &ScalarFunction<T>, h1: &HermitianMatrix<T>, h2: &HermitianMatrix<T>, tol: &ToleranceConfig<T>) -> Result<(T, T)> {
    let a = f.on_matrix(h1, tol)?;
    let b = f.on_matrix(h2, tol)?;
    gap_and_tol(&b, &a, tol)
}

/// Returns `(λ_min(rhs − lhs), loewner tolerance for the pair)`.
fn gap_and_tol<T: Scalar>(rhs: &HermitianMatrix<T>, lhs: &HermitianMatrix<T>, tol: &ToleranceConfig<T>) -> Result<(T, T)> {
    rhs.ensure_same_dim(lhs)?;
    Ok((rhs.sub(lhs).min_eigenvalue()?, tol.loewner_abs(rhs.norm(), lhs.norm())))
}

/// Re-evaluates a witness; returns `(gap, tolerance)`.
pub fn replay_witness<T: Scalar>(f: &ScalarFunction<T>, w: &Witness<T>, tol: &ToleranceConfig<T>) -> Result<(T, T)> {
    match w {
        Witness::Davis { h, p, .. } => davis_gap(f, h, p, tol),
        Witness::Strong { h, p, .. } => strong_gap(f, h, p, tol),
        Witness::Monotone { h1, h2, .. } => monotone_gap(f, h1, h2, tol),
    }
}

/// `h₂ = h₁ + cΔ` with `Δ ≥ 0` and `c = min(1, (hi − λ_max(h₁))/‖Δ‖)`, so both spectra stay in `[lo, hi]`.
pub fn sample_monotone_pair<T: Scalar>(rng: &mut impl Rng, lo: T, hi: T, dim: usize) -> (HermitianMatrix<T>, HermitianMatrix<T>) {
    let h1 = sample_hermitian(rng, lo, hi, dim);
    let delta = sample_psd(rng, hi - lo, dim);
    let top = h1.eigenvalues().map(|e| e[e.len() - 1]).unwrap_or(hi);
    let dn = delta.norm();
    let c = if dn > T::zero() { T::one().min((hi - top).max(T::zero()) / dn) } else { T::zero() };
    let h2 = h1.add(&delta.scale(c));
    (h1, h2)
}

struct Trial<T: Scalar> {
    gap: T,
    violation: Option<Witness<T>>,
}

fn run_one<T: Scalar>(
    criterion: Criterion,
    f: &ScalarFunction<T>,
    lo: T,
    hi: T,
    cfg: &TestConfig<T>,
    index: usize,
) -> Result<Trial<T>> {
    let mut rng = rng_from_seed(trial_seed(cfg.seed, index as u64));
    let dim = cfg.dims[rng.random_range(0..cfg.dims.len())];
    let tol = &cfg.tol;
    match criterion {
        Criterion::Davis | Criterion::Strong => {
            let h = sample_hermitian(&mut rng, lo, hi, dim);
            let p = sample_proper_projection::<T>(&mut rng, dim);
            let (gap, slack) = if criterion == Criterion::Davis {
                davis_gap(f, &h, &p, tol)?
            } else {
                strong_gap(f, &h, &p, tol)?
            };
            let violation = (gap < -slack).then(|| match criterion {
                Criterion::Davis => Witness::Davis { h, p, gap },
                _ => Witness::Strong { h, p, gap },
            });
            Ok(Trial { gap, violation })
        }
        Criterion::Monotone => {
            let (h1, h2) = sample_monotone_pair(&mut rng, lo, hi, dim);
            let (gap, slack) = monotone_gap(f, &h1, &h2, tol)?;
            let violation = (gap < -slack).then_some(Witness::Monotone { h1, h2, gap });
            Ok(Trial { gap, violation })
        }
    }
}

/// Runs `cfg.trials` seeded trials of `criterion` and stops at the first violation.
pub fn run_test<T: Scalar>(criterion: Criterion, f: &ScalarFunction<T>, cfg: &TestConfig<T>) -> Result<TestVerdict<T>> {
    if cfg.trials == 0 {
        return Err(LabError::BadParameters("trials must be at least 1".into()));
    }
    if cfg.dims.is_empty() || cfg.dims.iter().any(|&d| d < 2) {
        return Err(LabError::BadParameters(format!("dims must be non-empty and at least 2, got {:?}", cfg.dims)));
    }
    let sampling = match cfg.sampling {
        Some(s) => {
            if !s.is_subset_of(f.domain()) {
                return Err(LabError::BadParameters(format!(
                    "sampling interval {s} is not inside the domain {} of {}",
                    f.domain(),
                    f.label()
                )));
            }
            s
        }
        None => *f.domain(),
    };
    let (lo, hi) = sampling.sampling_range(T::lit(OPEN_END_INSET))?;

    let mut min_gap = T::infinity();
    let mut done = 0;
    let mut witness = None;
    while done < cfg.trials && witness.is_none() {
        let end = (done + CHUNK).min(cfg.trials);
        let results: Vec<Result<Trial<T>>> = (done..end)
            .into_par_iter()
            .map(|i| run_one(criterion, f, lo, hi, cfg, i))
            .collect();
        for r in results {
            let t = r?;
            done += 1;
            min_gap = min_gap.min(t.gap);
            if t.violation.is_some() {
                witness = t.violation;
                break;
            }
        }
    }
    Ok(TestVerdict {
        criterion,
        function: f.label().to_string(),
        passed: witness.is_none(),
        trials: done,
        min_gap,
        witness,
        sampling,
    })
}

pub fn davis_convex_test<T: Scalar>(f: &ScalarFunction<T>, cfg: &TestConfig<T>) -> Result<TestVerdict<T>> {
    run_test(Criterion::Davis, f, cfg)
}

pub fn strong_convex_test<T: Scalar>(f: &ScalarFunction<T>, cfg: &TestConfig<T>) -> Result<TestVerdict<T>> {
    run_test(Criterion::Strong, f, cfg)
}

pub fn monotone_test<T: Scalar>(f: &ScalarFunction<T>, cfg: &TestConfig<T>) -> Result<TestVerdict<T>> {
    run_test(Criterion::Monotone, f, cfg)
}

/// `h = [[1,1],[1,1]]`, `p = diag(1,0)`: violates the strong criterion for `x²`.
pub fn square_strong_witness<T: Scalar>() -> Witness<T> {
    let h = HermitianMatrix::symmetrize(
        &crate::linalg::matrix::GeneralMatrix::from_real_rows(&[vec![T::one(), T::one()], vec![T::one(), T::one()]])
            .expect("2x2"),
    );
    Witness::Strong {
        h,
        p: ProjectionMatrix::coordinate(2, &[0]).expect("index in range"),
        gap: T::nan(),
    }
}

/// `h₁ = [[1,1],[1,1]] ≤ h₂ = [[2,1],[1,1]]`: violates monotonicity for `x²`.
pub fn square_monotone_witness<T: Scalar>() -> Witness<T> {
    let m = |rows: [[f64; 2]; 2]| {
        HermitianMatrix::symmetrize(
            &crate::linalg::matrix::GeneralMatrix::from_real_rows(
                &rows.iter().map(|r| r.iter().map(|&v| T::lit(v)).collect()).collect::<Vec<_>>(),
            )
            .expect("2x2"),
        )
    };
    Witness::Monotone {
        h1: m([[1.0, 1.0], [1.0, 1.0]]),
        h2: m([[2.0, 1.0], [1.0, 1.0]]),
        gap: T::nan(),
    }
}
