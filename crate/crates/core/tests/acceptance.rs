//! Acceptance criteria, each at its stated tolerance. Prints one PASS/FAIL line
//! per criterion to stderr (bypassing output capture) and fails if any fails.

use std::io::Write;
use std::time::Instant;

use loewner_lab::completion::{column_distance_bound, fix_column, fix_corner_detailed, sample_column_instance, sample_corner_instance};
use loewner_lab::interpolation::constants::{estimate_constants, DEFAULT_GRID};
use loewner_lab::interpolation::instances::{sample_exact_instance, sample_one_sided_instance, sample_slack_instance, Construction};
use loewner_lab::interpolation::{shape_factor, InterpolationConfig};
use loewner_lab::linalg::random::{rng_from_seed, sample_hermitian, trial_seed};
use loewner_lab::linalg::{compress, loewner_geq, matrix_function};
use loewner_lab::opfunc::corpus::corpus;
use loewner_lab::opfunc::testers::{square_monotone_witness, square_strong_witness};
use loewner_lab::opfunc::{
    davis_convex_test, lookup, matrix_eval_rep, monotone_test, replay_witness, strong_convex_test, TestConfig, Witness,
};
use loewner_lab::sequence::suites::{convex_suite_functions, square_bidual_witness, strong_suite_functions};
use loewner_lab::sequence::{
    block_usc_suite, classify_tilted_line, default_tilted_plane, face_functional_calculus, tilted_line_grid, testnet_oracle,
    usc_in_bidual, verify_rank_one_obstruction, BlockCriterion, DeltaSchedule, FaceModel, SeqMatrixElement, TestnetGrid,
};
use loewner_lab::{Interval, Tolerances};
use rand::Rng;
use rayon::prelude::*;

const SEED: u64 = 20_261_015;
const EPS_SET: [f64; 3] = [1.0, 0.1, 0.01];

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn slack_contract() -> Outcome {
    let cfg = InterpolationConfig::<f64>::default();
    let rows: Vec<Result<(f64, f64, f64), String>> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(trial_seed(SEED, i));
            let dim = rng.random_range(2..=6);
            let eps = EPS_SET[(i % 3) as usize];
            let inst = sample_slack_instance::<f64>(&mut rng, dim, eps);
            let cert = inst.run(Construction::Slack, &cfg).map_err(|e| format!("instance {i}: {e}"))?;
            let scale = cert.scale;
            let residual = compress(&inst.p, &cert.x).unwrap().sub(&inst.y).norm() / scale;
            let lower = cert.x.sub(&inst.k.shift(-eps)).min_eigenvalue().unwrap() / scale;
            let upper = inst.h.shift(eps).sub(&cert.x).min_eigenvalue().unwrap() / scale;
            Ok((residual, lower, upper))
        })
        .collect();
    let (mut res, mut lo, mut hi) = (0.0f64, f64::INFINITY, f64::INFINITY);
    for r in rows {
        let (a, b, c) = r?;
        res = res.max(a);
        lo = lo.min(b);
        hi = hi.min(c);
    }
    check(res <= 1e-8, || format!("compression residual {res:e}·scale"))?;
    check(lo >= -1e-8 && hi >= -1e-8, || format!("margins {lo:e}, {hi:e} (·scale)"))?;
    Ok(format!("1000 instances; max residual {res:.1e}·scale, min margins {lo:.1e}/{hi:.1e}·scale"))
}

fn column_bound() -> Outcome {
    let tol = Tolerances::default();
    let rows: Vec<Result<(f64, f64, f64), String>> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(trial_seed(SEED ^ 0x2, i));
            let dim = rng.random_range(2..=6);
            let eps = EPS_SET[(i % 3) as usize];
            let c = sample_column_instance::<f64>(&mut rng, dim, eps);
            let s = fix_column(&c, &tol).map_err(|e| format!("instance {i}: {e}"))?;
            let dist = (&s - &c.s1).operator_norm() - column_distance_bound(eps);
            let q = c.q.matrix().as_matrix();
            let fixed = (&(&s * q) - &(&c.s1 * q)).operator_norm();
            Ok((dist, s.operator_norm(), fixed))
        })
        .collect();
    let (mut excess, mut norm, mut fixed) = (f64::NEG_INFINITY, 0.0f64, 0.0f64);
    for r in rows {
        let (a, b, c) = r?;
        excess = excess.max(a);
        norm = norm.max(b);
        fixed = fixed.max(c);
    }
    check(excess <= 1e-8, || format!("||s - s1|| exceeds the bound by {excess:e}"))?;
    check(norm <= 1.0 + 1e-10, || format!("||s|| = {norm}"))?;
    check(fixed <= 1e-10, || format!("||sq - s1q|| = {fixed:e}"))?;
    Ok(format!("1000 instances; worst ||s-s1|| - bound {excess:.2e}, max ||s|| - 1 {:.1e}, max ||sq-s1q|| {fixed:.1e}", norm - 1.0))
}

fn corner_bound() -> Outcome {
    let tol = Tolerances::default();
    let rows: Vec<Result<(f64, f64), String>> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(trial_seed(SEED ^ 0x3, i));
            let dim = rng.random_range(2..=6);
            let eps = EPS_SET[(i % 3) as usize];
            let c = sample_corner_instance::<f64>(&mut rng, dim, eps);
            let out = fix_corner_detailed(&c, &tol).map_err(|e| format!("instance {i}: {e}"))?;
            let dist = (&out.t_prime - &c.t).operator_norm() - 2.0 * column_distance_bound(eps);
            let t1 = out.t1.operator_norm() - (1.0 + eps);
            Ok((dist, t1))
        })
        .collect();
    let (mut excess, mut t1) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for r in rows {
        let (a, b) = r?;
        excess = excess.max(a);
        t1 = t1.max(b);
    }
    check(excess <= 1e-8, || format!("||t' - t|| exceeds the bound by {excess:e}"))?;
    check(t1 <= 1e-10, || format!("||t1|| exceeds 1 + eps by {t1:e}"))?;
    Ok(format!("1000 instances; worst ||t'-t|| - bound {excess:.2e}, worst ||t1|| - (1+eps) {t1:.2e}"))
}

fn shape_bound() -> Outcome {
    let cfg = InterpolationConfig::<f64>::default();
    let dims = [2usize, 3, 4, 5, 6];
    let mut sups = Vec::new();
    for (gi, &ratio) in DEFAULT_GRID.iter().enumerate() {
        let base = trial_seed(SEED ^ 0x4, gi as u64);
        let rows: Vec<Result<f64, String>> = (0..500u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_from_seed(trial_seed(base, i));
                let dim = dims[rng.random_range(0..dims.len())];
                let a = sample_one_sided_instance::<f64>(&mut rng, dim, ratio);
                let b = sample_exact_instance::<f64>(&mut rng, dim, ratio);
                let mut worst = 0.0f64;
                for (inst, c) in [(a, Construction::OneSided), (b, Construction::Exact)] {
                    let cert = inst.run(c, &cfg).map_err(|e| format!("ratio {ratio:e}, trial {i}, {c:?}: {e}"))?;
                    let scale = cert.scale;
                    let x = &cert.x;
                    let res = compress(&inst.p, x).unwrap().sub(&compress(&inst.p, &inst.y).unwrap()).norm();
                    let lo = x.sub(&inst.k).min_eigenvalue().unwrap();
                    let hi = inst.h.sub(x).min_eigenvalue().unwrap();
                    if res > 1e-8 * scale || lo < -1e-8 * scale || hi < -1e-8 * scale {
                        return Err(format!("ratio {ratio:e}, trial {i}, {c:?}: residual {res:e}, margins {lo:e}/{hi:e}"));
                    }
                    let width = inst.h.sub(&inst.k).norm();
                    let eta = inst.eta.expect("grid instances carry eta");
                    worst = worst.max(x.sub(&inst.y).norm() / shape_factor(inst.eps, eta, width));
                }
                Ok(worst)
            })
            .collect();
        let mut sup = 0.0f64;
        for r in rows {
            sup = sup.max(r?);
        }
        sups.push(sup);
    }
    let overall = sups.iter().copied().fold(0.0, f64::max);
    let report = estimate_constants(&dims, 500, &DEFAULT_GRID, SEED ^ 0x4, &cfg).map_err(|e| e.to_string())?;
    check(report.failure_count() == 0, || format!("{} estimator failures", report.failure_count()))?;
    check(report.sup_non_increasing(), || "estimator sups grow along the grid".into())?;
    check((report.overall_sup() - overall).abs() <= 1e-9 * overall.max(1.0), || {
        format!("estimator sup {} differs from recomputed {overall}", report.overall_sup())
    })?;
    check(overall <= 50.0, || format!("sup ratio {overall} exceeds C_audit = 50"))?;
    check(sups.windows(2).all(|w| w[1] <= w[0]), || format!("sup grows as eps/eta shrinks: {sups:?}"))?;
    Ok(format!(
        "500 instances per grid point, both constructions; sup ratio at eps/eta = 1e-2, 1e-4, 1e-6: {:.3}, {:.3}, {:.3} (C_audit 50)",
        sups[0], sups[1], sups[2]
    ))
}

fn convexity_testers() -> Outcome {
    let dims = vec![2, 3, 4, 5];
    let cfg = |seed| TestConfig::<f64>::new(dims.clone(), 10_000, seed);
    let tol = Tolerances::default();
    let sq = lookup::<f64>("x^2").map_err(|e| e.to_string())?;
    let cube = lookup::<f64>("x^3").map_err(|e| e.to_string())?;
    let inv = lookup::<f64>("1/x").map_err(|e| e.to_string())?;
    let frac = lookup::<f64>("x/(x+1)").map_err(|e| e.to_string())?;

    let v = davis_convex_test(&sq.function, &cfg(SEED).with_sampling(sq.sampling)).map_err(|e| e.to_string())?;
    check(v.passed && v.trials == 10_000, || format!("x^2 davis: {v:?}"))?;

    let c = Interval::closed(-1.0, 1.0);
    let v = davis_convex_test(&cube.function, &cfg(SEED + 1).with_sampling(c)).map_err(|e| e.to_string())?;
    let w = v.witness.ok_or("x^3 davis found no witness")?;
    let (cgap, slack) = replay_witness(&cube.function, &w, &tol).map_err(|e| e.to_string())?;
    check(cgap < -slack && cgap == w.gap(), || format!("x^3 witness replays to {cgap:e}"))?;

    let half_two = Interval::closed(0.5, 2.0);
    let v = davis_convex_test(&inv.function, &cfg(SEED + 2).with_sampling(half_two)).map_err(|e| e.to_string())?;
    check(v.passed, || "1/x davis failed".into())?;
    let v = strong_convex_test(&inv.function, &cfg(SEED + 3).with_sampling(half_two)).map_err(|e| e.to_string())?;
    check(v.passed, || "1/x strong failed".into())?;

    let w = square_strong_witness::<f64>();
    let (gap, slack) = replay_witness(&sq.function, &w, &tol).map_err(|e| e.to_string())?;
    check(gap < -slack, || format!("x^2 strong witness gap {gap:e}"))?;
    let v = strong_convex_test(&sq.function, &cfg(SEED + 4).with_sampling(sq.sampling)).map_err(|e| e.to_string())?;
    check(!v.passed, || "x^2 strong search found no witness".into())?;

    let w = square_monotone_witness::<f64>();
    if let Witness::Monotone { h1, h2, .. } = &w {
        check(loewner_geq(h2, h1, 0.0).unwrap(), || "monotone witness is not ordered".into())?;
    }
    let (mgap, slack) = replay_witness(&sq.function, &w, &tol).map_err(|e| e.to_string())?;
    check(mgap < -slack, || format!("x^2 monotone witness gap {mgap:e}"))?;

    let v = monotone_test(&frac.function, &cfg(SEED + 5).with_sampling(frac.sampling)).map_err(|e| e.to_string())?;
    check(v.passed && v.trials == 10_000, || "x/(x+1) monotone failed".into())?;
    Ok(format!("10^4 trials, dims 2-5; x^3 davis witness gap {cgap:.3e}; x^2 strong gap {gap:.3e}, monotone gap {mgap:.3e}"))
}

fn representation_consistency() -> Outcome {
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    let mut worst_scalar = 0.0f64;
    let entries = corpus::<f64>();
    for (ei, e) in entries.iter().enumerate() {
        let f = e.rep.to_function(e.name);
        for i in 0..100u64 {
            let mut rng = rng_from_seed(trial_seed(SEED ^ (0x60 + ei as u64), i));
            let dim = rng.random_range(2..=6);
            let h = sample_hermitian(&mut rng, e.sampling.lo, e.sampling.hi, dim);
            let by_rep = matrix_eval_rep(&e.rep, &h, &tol).map_err(|err| format!("{}: {err}", e.name))?;
            let direct = matrix_function(|x| f.call(x), f.domain(), &h, &tol).map_err(|err| format!("{}: {err}", e.name))?;
            let scale = direct.norm().max(1.0);
            let diff = by_rep.sub(&direct).norm() / scale;
            check(diff <= 1e-8, || format!("{}: matrix routes differ by {diff:e}·scale", e.name))?;
            worst = worst.max(diff);
        }
        if let Some(closed) = e.closed_form {
            for i in 0..100 {
                let x = e.sampling.lo + e.sampling.width() * (i as f64 + 0.5) / 100.0;
                let d = (e.rep.eval(x).unwrap() - closed(x)).abs() / closed(x).abs().max(1.0);
                check(d <= 1e-12, || format!("{} at {x}: {d:e}", e.name))?;
                worst_scalar = worst_scalar.max(d);
            }
        }
    }
    Ok(format!(
        "{} representations x 100 matrices, worst {worst:.1e}·scale; closed forms worst {worst_scalar:.1e}",
        entries.len()
    ))
}

fn rank_one_obstruction() -> Outcome {
    let tol = Tolerances::default();
    let t = [0.25, 0.75];
    let w = verify_rank_one_obstruction(&t, &DeltaSchedule::Harmonic, 64, &tol).map_err(|e| e.to_string())?;
    check(w.max_gap_determinant <= 1e-12, || format!("det {:e}", w.max_gap_determinant))?;
    check(w.max_forced_residual <= 1e-12, || format!("s_n residual {:e}", w.max_forced_residual))?;
    check((w.oscillation - 0.5).abs() <= 1e-12 && w.oscillation > 0.0, || format!("oscillation {}", w.oscillation))?;
    check(w.infeasible, || w.conclusion.clone())?;
    Ok(format!(
        "t cycle (1/4, 3/4), delta_n = 1/n, 64 indices: oscillation {}, max |det| {:.1e}; {}",
        w.oscillation,
        w.max_gap_determinant,
        w.conclusion.split(':').next().unwrap_or("")
    ))
}

fn tilted_line() -> Outcome {
    let tol = Tolerances::default();
    let grid = TestnetGrid::default();
    let mut disagreements = 0;
    let points = tilted_line_grid::<f64>();
    for (cycle, t_inf) in &points {
        let v = classify_tilted_line(&[], cycle, *t_inf, &tol).map_err(|e| e.to_string())?;
        let lo = cycle.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = cycle.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        check(v.strongly_lsc == Some(0.5 * t_inf <= lo), || format!("lsc at {cycle:?}, {t_inf}"))?;
        check(v.strongly_usc == Some(0.5 * t_inf >= hi), || format!("usc at {cycle:?}, {t_inf}"))?;
        check(v.middle_usc == Some(true) && v.middle_lsc == Some(true), || "middle verdicts".into())?;
        let h = SeqMatrixElement::from_scalars(&[], cycle, *t_inf).unwrap();
        let o = testnet_oracle(&h, &FaceModel::TiltedLine, &grid, &tol).map_err(|e| e.to_string())?;
        if !o.agrees_with(&v) {
            disagreements += 1;
        }
    }
    check(disagreements == 0, || format!("{disagreements} oracle disagreements"))?;
    Ok(format!("{} grid points incl. boundaries; oracle disagreements 0 at margin 1e-6", points.len()))
}

fn tilted_plane() -> Outcome {
    let tol = Tolerances::default();
    let ex = default_tilted_plane::<f64>(&tol).map_err(|e| e.to_string())?;
    check(ex.in_compressed_algebra, || "h is not in pA_sa p".into())?;
    check(ex.eps > 0.0, || format!("eps = {}", ex.eps))?;
    check(ex.inverse_verdict.middle_usc_necessary == Some(false), || "h^-1 passes the middle condition".into())?;
    check(ex.shifted_inverse_verdict.weakly_usc == Some(false), || "(h - t0 p)^-1 is weakly usc".into())?;
    check(ex.inverse_verdict.weakly_usc == Some(true), || "h^-1 is not weakly usc".into())?;
    Ok(format!(
        "theta = pi/4, eps = {:.4}, t0 = {:.4}: h^-1 fails middle, (h-t0 p)^-1 fails weak, h^-1 weakly usc",
        ex.eps, ex.t0
    ))
}

fn block_suites() -> Outcome {
    let tol = Tolerances::default();
    let mut lines = Vec::new();
    for (f, s) in convex_suite_functions::<f64>() {
        let r = block_usc_suite(BlockCriterion::OnFace, &f, &s, 200, SEED ^ 0xa, &tol).map_err(|e| e.to_string())?;
        check(r.violations == 0, || format!("{} violates the face criterion: {:?}", f.label(), r.first_violation))?;
        lines.push(format!("{} {:.1e}", f.label(), r.min_gap));
    }
    for (f, s) in strong_suite_functions::<f64>() {
        let r = block_usc_suite(BlockCriterion::InBidual, &f, &s, 200, SEED ^ 0xb, &tol).map_err(|e| e.to_string())?;
        check(r.violations == 0, || format!("{} violates x_n <= x_inf: {:?}", f.label(), r.first_violation))?;
    }
    let (sq, s) = convex_suite_functions::<f64>().remove(0);
    let r = block_usc_suite(BlockCriterion::InBidual, &sq, &s, 200, SEED ^ 0xc, &tol).map_err(|e| e.to_string())?;
    let w = r.first_violation.ok_or("no x^2 witness found")?;
    let fx = face_functional_calculus(&sq, &w.h, &w.face, &tol).map_err(|e| e.to_string())?;
    check(!usc_in_bidual(&fx, &tol).unwrap(), || "x^2 witness does not replay".into())?;
    let (face, h) = square_bidual_witness::<f64>();
    let fx = face_functional_calculus(&sq, &h, &face, &tol).map_err(|e| e.to_string())?;
    check(!usc_in_bidual(&fx, &tol).unwrap(), || "fixed x^2 witness passes".into())?;
    Ok(format!(
        "200 instances per function, 0 violations; x^2 breaks x_n <= x_inf in {} of 200 (first gap {:.3})",
        r.violations, w.gap
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome, Option<f64>); 10] = [
        ("slack interpolation contract", slack_contract, Some(60.0)),
        ("column completion bound", column_bound, None),
        ("corner completion bound", corner_bound, None),
        ("exact interpolation shape bound", shape_bound, None),
        ("convexity and monotonicity testers", convexity_testers, Some(120.0)),
        ("integral representation consistency", representation_consistency, None),
        ("rank-one obstruction", rank_one_obstruction, None),
        ("tilted-line criteria and oracle", tilted_line, None),
        ("tilted-plane example", tilted_plane, None),
        ("block-face usc suites", block_suites, None),
    ];
    let mut err = std::io::stderr();
    let _ = writeln!(err);
    let mut failed = Vec::new();
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let secs = start.elapsed().as_secs_f64();
        if let (Ok(_), Some(limit)) = (&outcome, budget) {
            if secs >= *limit {
                outcome = Err(format!("took {secs:.1} s, budget {limit} s"));
            }
        }
        let line = match &outcome {
            Ok(detail) => format!("PASS {:>2} {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                failed.push(i + 1);
                format!("FAIL {:>2} {name} ({secs:.2} s): {why}", i + 1)
            }
        };
        writeln!(err, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
