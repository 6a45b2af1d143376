use std::fmt;

use loewner_lab::completion::{
    column_distance_bound, fix_column, fix_corner_detailed, sample_column_instance, sample_corner_instance,
};
use loewner_lab::interpolation::constants::estimate_constants;
use loewner_lab::interpolation::instances::{
    sample_exact_instance, sample_one_sided_instance, sample_slack_instance, Construction, InterpolationInstance,
};
use loewner_lab::interpolation::InterpolationConfig;
use loewner_lab::linalg::random::{rng_from_seed, trial_seed};
use loewner_lab::opfunc::testers::run_test;
use loewner_lab::opfunc::{lookup, replay_witness, Criterion, TestConfig};
use loewner_lab::sequence::{
    classify_tilted_line, testnet_oracle, tilted_plane_example, verify_rank_one_obstruction, DeltaSchedule, FaceModel,
    SeqMatrixElement,
};
use loewner_lab::{HermitianMatrix, Interval, LabError, ToleranceConfig};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{self, Outcome, RunReport};
use crate::{ConstantsArgs, ExampleArgs, Expect, InterpolateArgs, Lemma, Suite, TestArgs, Which};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable input or a violated precondition.
    Invalid(String),
    /// A construction failed its own audit.
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            Self::Invalid(_) => 2,
            Self::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Invalid(m) | Self::Failed(m) => f.write_str(m),
        }
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::ContractViolated(_) | LabError::NoConvergence { .. } => Self::Failed(e.to_string()),
            _ => Self::Invalid(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn to_value<S: Serialize>(s: &S) -> Value {
    serde_json::to_value(s).expect("report payloads serialize")
}

fn check_dims(dims: &[usize]) -> CliResult<()> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(CliError::Invalid(format!("--dims must list sizes of at least 2, got {dims:?}")));
    }
    Ok(())
}

pub fn interpolate(args: &InterpolateArgs) -> CliResult<Outcome> {
    let text = std::fs::read_to_string(&args.instance)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", args.instance.display())))?;
    let mut inst: InterpolationInstance<f64> =
        serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("cannot parse {}: {e}", args.instance.display())))?;
    if let Some(eps) = args.eps {
        inst.eps = eps;
    }
    if args.eta.is_some() {
        inst.eta = args.eta;
    }
    let construction = match args.lemma {
        Lemma::Slack => Construction::Slack,
        Lemma::OneSided => Construction::OneSided,
        Lemma::Exact => Construction::Exact,
    };
    let cfg = InterpolationConfig::default();
    let cert = inst.run(construction, &cfg)?;
    let summary = format!(
        "{construction:?} interpolant in dimension {}: ||pxp - target|| = {:.2e}, margins {:.2e} / {:.2e}, ||x - y|| = {:.4}",
        inst.dim(),
        cert.compression_residual,
        cert.lower_margin,
        cert.upper_margin,
        cert.perturbation
    );
    let results = json!({ "construction": construction, "instance": inst, "certificate": cert });
    Ok(Outcome {
        report: RunReport::new("interpolate", to_value(args), None, true, results),
        summary,
    })
}

pub fn test(args: &TestArgs) -> CliResult<Outcome> {
    match args.suite {
        Suite::Davis => convexity(args, Criterion::Davis),
        Suite::Strong => convexity(args, Criterion::Strong),
        Suite::Monotone => convexity(args, Criterion::Monotone),
        Suite::Lemma25 => construction_suite(args, Construction::Slack),
        Suite::Lemma27 => construction_suite(args, Construction::OneSided),
        Suite::Lemma28 => construction_suite(args, Construction::Exact),
        Suite::Lemma26 => completion_suite(args, false),
        Suite::Corner => completion_suite(args, true),
    }
}

fn resolved_args(args: &TestArgs, trials: usize, dims: &[usize]) -> Value {
    let mut v = to_value(args);
    v["trials"] = json!(trials);
    v["dims"] = json!(dims);
    v
}

fn convexity(args: &TestArgs, criterion: Criterion) -> CliResult<Outcome> {
    let entry = lookup::<f64>(&args.function)?;
    let sampling = match &args.interval {
        Some(v) => {
            if v.len() != 2 || !(v[0] < v[1]) {
                return Err(CliError::Invalid(format!("--interval needs lo,hi with lo < hi, got {v:?}")));
            }
            Interval::closed(v[0], v[1])
        }
        None => entry.sampling,
    };
    let known = match criterion {
        Criterion::Davis => entry.properties.operator_convex,
        Criterion::Strong => entry.properties.strongly_convex,
        Criterion::Monotone => entry.properties.operator_monotone,
    };
    let expect = args.expect.unwrap_or(if known { Expect::Pass } else { Expect::Fail });
    let trials = args.trials.unwrap_or(report::CONVEXITY_TRIALS);
    let dims = args.dims.clone().unwrap_or_else(|| report::CONVEXITY_DIMS.to_vec());
    check_dims(&dims)?;

    let cfg = TestConfig::new(dims.clone(), trials, args.seed).with_sampling(sampling);
    let verdict = run_test(criterion, &entry.function, &cfg)?;
    let replay = match &verdict.witness {
        Some(w) => {
            let (gap, slack) = replay_witness(&entry.function, w, &cfg.tol)?;
            Some(json!({ "gap": gap, "slack": slack, "violates": gap < -slack }))
        }
        None => None,
    };
    let passed = verdict.passed == (expect == Expect::Pass);
    let summary = match (&verdict.witness, expect) {
        (None, Expect::Pass) => format!("{} passed {criterion:?} at {} trials on {sampling}", entry.function.label(), verdict.trials),
        (Some(w), Expect::Fail) => format!(
            "{} fails {criterion:?} as expected: witness at trial {} with gap {:.3e}",
            entry.function.label(),
            verdict.trials,
            w.gap()
        ),
        (None, Expect::Fail) => format!("no witness against {} in {} trials, but one was expected", entry.function.label(), verdict.trials),
        (Some(w), Expect::Pass) => format!("{} violates {criterion:?}: gap {:.3e}", entry.function.label(), w.gap()),
    };
    let results = json!({
        "expected": expect,
        "expected_failure": expect == Expect::Fail,
        "verdict": verdict,
        "witness_replay": replay,
    });
    let mut echo = resolved_args(args, trials, &dims);
    echo["interval"] = to_value(&sampling);
    echo["expect"] = to_value(&expect);
    Ok(Outcome {
        report: RunReport::new("test", echo, Some(args.seed), passed, results),
        summary,
    })
}

#[derive(Debug, Serialize)]
struct ConstructionTrial {
    trial: usize,
    dim: usize,
    eps: f64,
    eta: Option<f64>,
    /// `‖pxp − target‖ / scale`.
    residual: f64,
    /// `λ_min` margins against the lower and upper bounds, divided by `scale`.
    lower_margin: f64,
    upper_margin: f64,
    ratio: Option<f64>,
}

#[derive(Debug, Serialize)]
struct TrialFailure<I: Serialize> {
    trial: usize,
    error: String,
    instance: I,
}

fn max_of(it: impl Iterator<Item = f64>) -> Option<f64> {
    it.fold(None, |a, b| Some(a.map_or(b, |a: f64| a.max(b))))
}

fn min_of(it: impl Iterator<Item = f64>) -> Option<f64> {
    it.fold(None, |a, b| Some(a.map_or(b, |a: f64| a.min(b))))
}

fn construction_suite(args: &TestArgs, construction: Construction) -> CliResult<Outcome> {
    let trials = args.trials.unwrap_or(report::CONSTRUCTION_TRIALS);
    let dims = args.dims.clone().unwrap_or_else(|| report::CONSTRUCTION_DIMS.to_vec());
    check_dims(&dims)?;
    let ratio = args.ratio.unwrap_or(report::SHAPE_RATIO);
    if construction != Construction::Slack && !(ratio > 0.0 && ratio < 1.0) {
        return Err(CliError::Invalid(format!("--ratio must lie in (0, 1), got {ratio}")));
    }
    if let Some(eps) = args.eps {
        if !(eps > 0.0) {
            return Err(CliError::Invalid(format!("--eps must be positive, got {eps}")));
        }
    }
    let cfg = InterpolationConfig::<f64>::default();
    let outcomes: Vec<Result<ConstructionTrial, TrialFailure<InterpolationInstance<f64>>>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(trial_seed(args.seed, i as u64));
            let dim = dims[rng.random_range(0..dims.len())];
            let inst = match construction {
                Construction::Slack => {
                    let eps = args.eps.unwrap_or(report::SLACK_EPS[i % report::SLACK_EPS.len()]);
                    sample_slack_instance(&mut rng, dim, eps)
                }
                Construction::OneSided => sample_one_sided_instance(&mut rng, dim, ratio),
                Construction::Exact => sample_exact_instance(&mut rng, dim, ratio),
            };
            match inst.run(construction, &cfg) {
                Ok(cert) => Ok(ConstructionTrial {
                    trial: i,
                    dim,
                    eps: inst.eps,
                    eta: inst.eta,
                    residual: cert.compression_residual / cert.scale,
                    lower_margin: cert.lower_margin / cert.scale,
                    upper_margin: cert.upper_margin / cert.scale,
                    ratio: cert.ratio,
                }),
                Err(e) => Err(TrialFailure {
                    trial: i,
                    error: e.to_string(),
                    instance: inst,
                }),
            }
        })
        .collect();
    let (ok, failures): (Vec<_>, Vec<_>) = outcomes.into_iter().partition(|r| r.is_ok());
    let ok: Vec<ConstructionTrial> = ok.into_iter().map(|r| r.ok().expect("partitioned")).collect();
    let failures: Vec<_> = failures.into_iter().map(|r| r.err().expect("partitioned")).collect();
    let sup_ratio = max_of(ok.iter().filter_map(|t| t.ratio));
    let results = json!({
        "construction": construction,
        "trials": trials,
        "failures": failures.len(),
        "max_residual_over_scale": max_of(ok.iter().map(|t| t.residual)),
        "min_lower_margin_over_scale": min_of(ok.iter().map(|t| t.lower_margin)),
        "min_upper_margin_over_scale": min_of(ok.iter().map(|t| t.upper_margin)),
        "sup_ratio": sup_ratio,
        "c_audit": cfg.c_audit,
        "first_failure": failures.first(),
    });
    let passed = failures.is_empty();
    let summary = match failures.first() {
        None => format!(
            "{construction:?}: {trials} instances audited{}",
            sup_ratio.map(|r| format!(", sup ratio {r:.4}")).unwrap_or_default()
        ),
        Some(f) => format!("{construction:?}: {} of {trials} instances failed; first at trial {}: {}", failures.len(), f.trial, f.error),
    };
    let mut echo = resolved_args(args, trials, &dims);
    if construction != Construction::Slack {
        echo["ratio"] = json!(ratio);
    }
    Ok(Outcome {
        report: RunReport::new("test", echo, Some(args.seed), passed, results),
        summary,
    })
}

#[derive(Debug, Serialize)]
struct CompletionTrial {
    trial: usize,
    dim: usize,
    eps: f64,
    /// `‖s − s₁‖` (column) or `‖t′ − t‖` (corner).
    distance: f64,
    bound: f64,
    /// `‖s‖` or `‖t₁‖`.
    norm: f64,
    norm_bound: f64,
    /// `‖sq − s₁q‖` for the column suite.
    fixed_drift: Option<f64>,
}

fn completion_suite(args: &TestArgs, corner: bool) -> CliResult<Outcome> {
    let trials = args.trials.unwrap_or(report::CONSTRUCTION_TRIALS);
    let dims = args.dims.clone().unwrap_or_else(|| report::CONSTRUCTION_DIMS.to_vec());
    check_dims(&dims)?;
    if let Some(eps) = args.eps {
        if !(eps >= 0.0) {
            return Err(CliError::Invalid(format!("--eps must be nonnegative, got {eps}")));
        }
    }
    let tol = ToleranceConfig::<f64>::default();
    let outcomes: Vec<Result<CompletionTrial, TrialFailure<Value>>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(trial_seed(args.seed, i as u64));
            let dim = dims[rng.random_range(0..dims.len())];
            let eps = args.eps.unwrap_or(report::SLACK_EPS[i % report::SLACK_EPS.len()]);
            let fail = |error: String, instance: Value| TrialFailure { trial: i, error, instance };
            if corner {
                let c = sample_corner_instance::<f64>(&mut rng, dim, eps);
                let out = fix_corner_detailed(&c, &tol).map_err(|e| fail(e.to_string(), to_value(&c)))?;
                let t = CompletionTrial {
                    trial: i,
                    dim,
                    eps,
                    distance: out.distance,
                    bound: 2.0 * column_distance_bound(eps) + report::DISTANCE_SLACK,
                    norm: out.t1_norm,
                    norm_bound: 1.0 + eps + report::NORM_SLACK,
                    fixed_drift: None,
                };
                if t.distance > t.bound || t.norm > t.norm_bound {
                    return Err(fail(format!("bound exceeded: ||t' - t|| = {:e}, ||t1|| = {}", t.distance, t.norm), to_value(&c)));
                }
                Ok(t)
            } else {
                let c = sample_column_instance::<f64>(&mut rng, dim, eps);
                let s = fix_column(&c, &tol).map_err(|e| fail(e.to_string(), to_value(&c)))?;
                let q = c.q.matrix().as_matrix();
                let t = CompletionTrial {
                    trial: i,
                    dim,
                    eps,
                    distance: (&s - &c.s1).operator_norm(),
                    bound: column_distance_bound(eps) + report::DISTANCE_SLACK,
                    norm: s.operator_norm(),
                    norm_bound: 1.0 + report::NORM_SLACK,
                    fixed_drift: Some((&(&s * q) - &(&c.s1 * q)).operator_norm()),
                };
                let drift = t.fixed_drift.unwrap_or(0.0);
                if t.distance > t.bound || t.norm > t.norm_bound || drift > report::NORM_SLACK {
                    return Err(fail(
                        format!("bound exceeded: ||s - s1|| = {:e}, ||s|| = {}, ||sq - s1q|| = {drift:e}", t.distance, t.norm),
                        to_value(&c),
                    ));
                }
                Ok(t)
            }
        })
        .collect();
    let (ok, failures): (Vec<_>, Vec<_>) = outcomes.into_iter().partition(|r| r.is_ok());
    let ok: Vec<CompletionTrial> = ok.into_iter().map(|r| r.ok().expect("partitioned")).collect();
    let failures: Vec<_> = failures.into_iter().map(|r| r.err().expect("partitioned")).collect();
    let worst_slack = min_of(ok.iter().map(|t| t.bound - t.distance));
    let results = json!({
        "completion": if corner { "corner" } else { "column" },
        "trials": trials,
        "failures": failures.len(),
        "min_distance_headroom": worst_slack,
        "max_norm": max_of(ok.iter().map(|t| t.norm)),
        "max_fixed_drift": max_of(ok.iter().filter_map(|t| t.fixed_drift)),
        "first_failure": failures.first(),
    });
    let passed = failures.is_empty();
    let what = if corner { "corner" } else { "column" };
    let summary = match failures.first() {
        None => format!("{what} completion: {trials} instances within bounds"),
        Some(f) => format!("{what} completion: {} of {trials} failed; first at trial {}: {}", failures.len(), f.trial, f.error),
    };
    Ok(Outcome {
        report: RunReport::new("test", resolved_args(args, trials, &dims), Some(args.seed), passed, results),
        summary,
    })
}

fn parse_delta(s: &str) -> CliResult<DeltaSchedule> {
    let bad = || CliError::Invalid(format!("--delta must be harmonic, geometric:<ratio> or power:<exponent>, got {s:?}"));
    let d = match s.split_once(':') {
        None if s == "harmonic" => DeltaSchedule::Harmonic,
        Some(("geometric", r)) => DeltaSchedule::Geometric {
            ratio: r.parse().map_err(|_| bad())?,
        },
        Some(("power", a)) => DeltaSchedule::Power {
            exponent: a.parse().map_err(|_| bad())?,
        },
        _ => return Err(bad()),
    };
    d.validate()?;
    Ok(d)
}

fn reject_flags(which: Which, given: &[(&str, bool)]) -> CliResult<()> {
    if let Some((flag, _)) = given.iter().find(|(_, set)| *set) {
        let name = to_value(&which);
        return Err(CliError::Invalid(format!("--{flag} does not apply to --which {}", name.as_str().unwrap_or("?"))));
    }
    Ok(())
}

pub fn example(args: &ExampleArgs) -> CliResult<Outcome> {
    let tol = ToleranceConfig::<f64>::default();
    let line_flags = [("cycle", args.cycle.is_some()), ("prefix", args.prefix.is_some()), ("t-inf", args.t_inf.is_some())];
    let gap_flags = [("t-cycle", args.t_cycle.is_some()), ("delta", args.delta.is_some()), ("horizon", args.horizon.is_some())];
    let plane_flags = [("theta", args.theta.is_some()), ("h-inf", args.h_inf.is_some())];
    let mut echo = to_value(args);
    let (passed, results, summary) = match args.which {
        Which::TiltedLine => {
            reject_flags(args.which, &[&gap_flags[..], &plane_flags[..]].concat())?;
            let cycle = args.cycle.clone().unwrap_or_else(|| vec![1.0, 0.0]);
            let prefix = args.prefix.clone().unwrap_or_default();
            let t_inf = args.t_inf.unwrap_or(0.0);
            echo["cycle"] = json!(cycle);
            echo["prefix"] = json!(prefix);
            echo["t_inf"] = json!(t_inf);
            let verdict = classify_tilted_line(&prefix, &cycle, t_inf, &tol)?;
            let h = SeqMatrixElement::from_scalars(&prefix, &cycle, t_inf)?;
            let grid = report::Defaults::default().testnet;
            let oracle = testnet_oracle(&h, &FaceModel::TiltedLine, &grid, &tol)?;
            let agrees = oracle.agrees_with(&verdict);
            let implications = verdict.implication_failures();
            let passed = agrees && verdict.middle_usc == Some(true) && verdict.middle_lsc == Some(true) && implications.is_empty();
            let summary = format!(
                "strongly usc {:?}, strongly lsc {:?}; oracle {} over {} nets",
                verdict.strongly_usc,
                verdict.strongly_lsc,
                if agrees { "agrees" } else { "DISAGREES" },
                oracle.nets
            );
            (passed, json!({ "verdict": verdict, "oracle": oracle, "oracle_agrees": agrees, "implication_failures": implications }), summary)
        }
        Which::RankOne => {
            reject_flags(args.which, &[&line_flags[..], &plane_flags[..]].concat())?;
            let t_cycle = args.t_cycle.clone().unwrap_or_else(|| vec![0.25, 0.75]);
            let delta = parse_delta(args.delta.as_deref().unwrap_or("harmonic"))?;
            let horizon = args.horizon.unwrap_or(64);
            echo["t_cycle"] = json!(t_cycle);
            echo["delta"] = to_value(&delta);
            echo["horizon"] = json!(horizon);
            let w = verify_rank_one_obstruction(&t_cycle, &delta, horizon, &tol)?;
            let summary = format!("oscillation {}; {}", w.oscillation, w.conclusion);
            (w.infeasible, json!({ "witness": w }), summary)
        }
        Which::TiltedPlane => {
            reject_flags(args.which, &[&line_flags[..], &gap_flags[..]].concat())?;
            let theta = args.theta.unwrap_or(std::f64::consts::FRAC_PI_4);
            let abc = args.h_inf.clone().unwrap_or_else(|| vec![2.0, 1.0, 2.0]);
            if abc.len() != 3 {
                return Err(CliError::Invalid(format!("--h-inf takes a,b,c, got {abc:?}")));
            }
            echo["theta"] = json!(theta);
            echo["h_inf"] = json!(abc);
            let h_inf = HermitianMatrix::from_real_rows(&[vec![abc[0], abc[1]], vec![abc[1], abc[2]]], &tol)?;
            let ex = tilted_plane_example(theta, h_inf, &tol)?;
            let passed = ex.reproduces();
            let summary = format!(
                "eps = {:.4}, t0 = {:.4}: h^-1 middle necessary condition {:?}, h^-1 weakly usc {:?}, (h - t0 p)^-1 weakly usc {:?}",
                ex.eps,
                ex.t0,
                ex.inverse_verdict.middle_usc_necessary,
                ex.inverse_verdict.weakly_usc,
                ex.shifted_inverse_verdict.weakly_usc
            );
            (passed, json!({ "example": ex, "reproduces": passed }), summary)
        }
    };
    Ok(Outcome {
        report: RunReport::new("example", echo, None, passed, results),
        summary,
    })
}

pub fn constants(args: &ConstantsArgs) -> CliResult<Outcome> {
    let dims = args.dims.clone().unwrap_or_else(|| report::CONSTRUCTION_DIMS.to_vec());
    let grid = args.grid.clone().unwrap_or_else(|| report::Defaults::default().constants_grid);
    let trials = args.trials.unwrap_or(report::CONSTANTS_TRIALS);
    let cfg = InterpolationConfig::<f64>::default();
    let rep = estimate_constants(&dims, trials, &grid, args.seed, &cfg)?;
    let sup = rep.overall_sup();
    let failures = rep.failure_count();
    let passed = failures == 0 && sup <= cfg.c_audit;
    let summary = if trials == 0 {
        "no trials requested; empty report".to_string()
    } else {
        format!(
            "sup ratio {sup:.4} (C_audit {}), {failures} failures, sup non-increasing along the grid: {}",
            cfg.c_audit,
            rep.sup_non_increasing()
        )
    };
    let results = json!({
        "report": rep,
        "overall_sup": sup,
        "failures": failures,
        "sup_non_increasing": rep.sup_non_increasing(),
    });
    let mut echo = to_value(args);
    echo["dims"] = json!(dims);
    echo["grid"] = json!(grid);
    echo["trials"] = json!(trials);
    Ok(Outcome {
        report: RunReport::new("constants", echo, Some(args.seed), passed, results),
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_schedules_parse() {
        assert_eq!(parse_delta("harmonic").unwrap(), DeltaSchedule::Harmonic);
        assert_eq!(parse_delta("geometric:0.5").unwrap(), DeltaSchedule::Geometric { ratio: 0.5 });
        assert_eq!(parse_delta("power:2").unwrap(), DeltaSchedule::Power { exponent: 2.0 });
        for bad in ["", "geometric", "geometric:x", "power:-1", "cubic:1"] {
            assert!(matches!(parse_delta(bad), Err(CliError::Invalid(_))), "{bad}");
        }
    }

    #[test]
    fn audit_failures_map_to_exit_one() {
        assert_eq!(CliError::from(LabError::ContractViolated("x".into())).code(), 1);
        assert_eq!(CliError::from(LabError::PreconditionViolated("x".into())).code(), 2);
        assert_eq!(CliError::from(LabError::BadParameters("x".into())).code(), 2);
    }

    #[test]
    fn extremes_of_empty_sets() {
        assert_eq!(max_of(std::iter::empty()), None);
        assert_eq!(min_of([3.0, -1.0, 2.0].into_iter()), Some(-1.0));
    }
}
