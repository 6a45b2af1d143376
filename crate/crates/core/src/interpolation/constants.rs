//! Empirical estimate of the constant in `‖x − y‖ ≤ C (ε/η)^{1/4} ‖h − k‖`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::interpolation::instances::{sample_exact_instance, sample_one_sided_instance, Construction, InterpolationInstance};
use crate::interpolation::InterpolationConfig;
use crate::linalg::random::{rng_from_seed, trial_seed};
use crate::scalar::Scalar;

pub const DEFAULT_GRID: [f64; 3] = [1e-2, 1e-4, 1e-6];

/// Worst instance seen for one construction at one grid point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ArgmaxRecord<T: Scalar> {
    pub construction: Construction,
    pub trial: usize,
    pub ratio: T,
    pub instance: InterpolationInstance<T>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FailureRecord {
    pub construction: Construction,
    pub trial: usize,
    pub error: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct GridPoint<T: Scalar> {
    /// `ε/η`.
    pub eps_over_eta: T,
    pub trials: usize,
    pub sup_one_sided: T,
    pub sup_exact: T,
    pub argmax_one_sided: Option<ArgmaxRecord<T>>,
    pub argmax_exact: Option<ArgmaxRecord<T>>,
    pub failures: Vec<FailureRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ConstantsReport<T: Scalar> {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub c_audit: T,
    pub grid: Vec<GridPoint<T>>,
}

impl<T: Scalar> ConstantsReport<T> {
    /// Largest ratio over the whole grid and both constructions.
    pub fn overall_sup(&self) -> T {
        self.grid
            .iter()
            .map(|g| g.sup_one_sided.max(g.sup_exact))
            .fold(T::zero(), T::max)
    }

    pub fn failure_count(&self) -> usize {
        self.grid.iter().map(|g| g.failures.len()).sum()
    }

    /// True when, along grid points ordered by decreasing `ε/η`, neither sup grows.
    pub fn sup_non_increasing(&self) -> bool {
        let mut pts: Vec<&GridPoint<T>> = self.grid.iter().collect();
        pts.sort_by(|a, b| b.eps_over_eta.partial_cmp(&a.eps_over_eta).unwrap_or(std::cmp::Ordering::Equal));
        pts.windows(2)
            .all(|w| w[1].sup_one_sided <= w[0].sup_one_sided && w[1].sup_exact <= w[0].sup_exact)
    }
}

struct TrialOutcome<T: Scalar> {
    one_sided: std::result::Result<(T, InterpolationInstance<T>), String>,
    exact: std::result::Result<(T, InterpolationInstance<T>), String>,
}

fn run_trial<T: Scalar>(dims: &[usize], ratio: T, seed: u64, cfg: &InterpolationConfig<T>) -> TrialOutcome<T> {
    let mut rng = rng_from_seed(seed);
    let dim = dims[rng.random_range(0..dims.len())];
    let a = sample_one_sided_instance(&mut rng, dim, ratio);
    let b = sample_exact_instance(&mut rng, dim, ratio);
    let eval = |inst: InterpolationInstance<T>, c: Construction| match inst.run(c, cfg) {
        Ok(cert) => Ok((cert.ratio.unwrap_or_else(T::zero), inst)),
        Err(e) => Err(e.to_string()),
    };
    TrialOutcome {
        one_sided: eval(a, Construction::OneSided),
        exact: eval(b, Construction::Exact),
    }
}

/// Samples `trials` instances per grid value for both the one-sided and the
/// exact construction and records the sup of the audited ratio.
///
/// Trials run in parallel; seeds depend only on `(seed, grid index, trial)`, so
/// the report is identical for any thread count.
pub fn estimate_constants<T: Scalar>(
    dims: &[usize],
    trials: usize,
    grid: &[T],
    seed: u64,
    cfg: &InterpolationConfig<T>,
) -> Result<ConstantsReport<T>> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(LabError::BadParameters(format!("dims must be non-empty and at least 2, got {dims:?}")));
    }
    if grid.iter().any(|&r| !(r > T::zero() && r < T::one())) {
        return Err(LabError::BadParameters("every eps/eta value must lie in (0, 1)".into()));
    }
    let mut points = Vec::new();
    if trials > 0 {
        for (gi, &ratio) in grid.iter().enumerate() {
            let base = trial_seed(seed, gi as u64);
            let outcomes: Vec<TrialOutcome<T>> = (0..trials)
                .into_par_iter()
                .map(|i| run_trial(dims, ratio, trial_seed(base, i as u64), cfg))
                .collect();
            points.push(summarize(ratio, outcomes));
        }
    }
    Ok(ConstantsReport {
        dims: dims.to_vec(),
        trials,
        seed,
        c_audit: cfg.c_audit,
        grid: points,
    })
}

fn summarize<T: Scalar>(ratio: T, outcomes: Vec<TrialOutcome<T>>) -> GridPoint<T> {
    let trials = outcomes.len();
    let mut point = GridPoint {
        eps_over_eta: ratio,
        trials,
        sup_one_sided: T::zero(),
        sup_exact: T::zero(),
        argmax_one_sided: None,
        argmax_exact: None,
        failures: Vec::new(),
    };
    for (trial, out) in outcomes.into_iter().enumerate() {
        for (construction, res) in [(Construction::OneSided, out.one_sided), (Construction::Exact, out.exact)] {
            let (sup, arg) = match construction {
                Construction::OneSided => (&mut point.sup_one_sided, &mut point.argmax_one_sided),
                _ => (&mut point.sup_exact, &mut point.argmax_exact),
            };
            match res {
                Ok((r, inst)) => {
                    if arg.is_none() || r > *sup {
                        *sup = r;
                        *arg = Some(ArgmaxRecord {
                            construction,
                            trial,
                            ratio: r,
                            instance: inst,
                        });
                    }
                }
                Err(error) => point.failures.push(FailureRecord {
                    construction,
                    trial,
                    error,
                }),
            }
        }
    }
    point
}

/// Re-runs a recorded argmax instance and returns its ratio.
pub fn replay<T: Scalar>(record: &ArgmaxRecord<T>, cfg: &InterpolationConfig<T>) -> Result<T> {
    let cert = record.instance.run(record.construction, cfg)?;
    Ok(cert.ratio.unwrap_or_else(T::zero))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_give_empty_report() {
        let r = estimate_constants::<f64>(&[2, 3], 0, &DEFAULT_GRID, 1, &Default::default()).unwrap();
        assert!(r.grid.is_empty());
        assert_eq!(r.overall_sup(), 0.0);
    }

    #[test]
    fn fixed_seed_is_byte_identical() {
        let cfg = InterpolationConfig::default();
        let a = estimate_constants::<f64>(&[2, 3, 4], 12, &[1e-2, 1e-4], 77, &cfg).unwrap();
        let b = estimate_constants::<f64>(&[2, 3, 4], 12, &[1e-2, 1e-4], 77, &cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn argmax_replays_through_json() {
        let cfg = InterpolationConfig::default();
        let r = estimate_constants::<f64>(&[2, 3, 4, 5, 6], 10, &[1e-2], 3, &cfg).unwrap();
        assert_eq!(r.failure_count(), 0);
        assert!(r.overall_sup().is_finite() && r.overall_sup() > 0.0);
        for rec in [&r.grid[0].argmax_one_sided, &r.grid[0].argmax_exact] {
            let rec = rec.as_ref().unwrap();
            let json = serde_json::to_string(rec).unwrap();
            let back: ArgmaxRecord<f64> = serde_json::from_str(&json).unwrap();
            assert_eq!(replay(&back, &cfg).unwrap(), rec.ratio);
        }
    }

    #[test]
    fn rejects_bad_grid() {
        assert!(estimate_constants::<f64>(&[2], 1, &[1.5], 0, &Default::default()).is_err());
        assert!(estimate_constants::<f64>(&[1], 1, &[0.1], 0, &Default::default()).is_err());
    }
}
