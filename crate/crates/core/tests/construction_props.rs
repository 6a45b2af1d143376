use loewner_lab::completion::{
    column_distance_bound, fix_column, fix_corner, fix_corner_detailed, sample_column_instance, sample_corner_instance,
    ColumnConstraint,
};
use loewner_lab::interpolation::instances::{
    sample_exact_instance, sample_one_sided_instance, sample_slack_instance, Construction, InterpolationInstance,
};
use loewner_lab::interpolation::{shape_factor, InterpolationConfig};
use loewner_lab::linalg::compress;
use loewner_lab::linalg::random::rng_from_seed;
use loewner_lab::{Hermitian, LabError, Matrix, Projection, Tolerances};
use proptest::prelude::*;

fn eps_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(0.1), Just(0.01), 1e-4..2.0f64]
}

/// Recomputes the slack contract from the returned `x` alone.
fn slack_holds(inst: &InterpolationInstance<f64>, x: &Hermitian) -> Result<(), String> {
    let scale = inst.k.norm().max(inst.h.norm()).max(1.0);
    let res = compress(&inst.p, x).unwrap().sub(&inst.y).norm();
    let lo = x.sub(&inst.k.shift(-inst.eps)).min_eigenvalue().unwrap();
    let hi = inst.h.shift(inst.eps).sub(x).min_eigenvalue().unwrap();
    if res > 1e-8 * scale || lo < -1e-8 * scale || hi < -1e-8 * scale {
        return Err(format!("residual {res:e}, margins {lo:e}/{hi:e}"));
    }
    Ok(())
}

/// `pxp = pyp` and `k ≤ x ≤ h` without slack.
fn exact_holds(inst: &InterpolationInstance<f64>, x: &Hermitian) -> Result<(), String> {
    let scale = inst.k.norm().max(inst.h.norm()).max(1.0);
    let res = compress(&inst.p, x).unwrap().sub(&compress(&inst.p, &inst.y).unwrap()).norm();
    let lo = x.sub(&inst.k).min_eigenvalue().unwrap();
    let hi = inst.h.sub(x).min_eigenvalue().unwrap();
    if res > 1e-8 * scale || lo < -1e-8 * scale || hi < -1e-8 * scale {
        return Err(format!("residual {res:e}, margins {lo:e}/{hi:e}"));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn slack_interpolant_meets_contract(seed in any::<u64>(), dim in 2usize..7, eps in eps_strategy()) {
        let inst = sample_slack_instance::<f64>(&mut rng_from_seed(seed), dim, eps);
        let cert = inst.run(Construction::Slack, &InterpolationConfig::default()).unwrap();
        prop_assert!(slack_holds(&inst, &cert.x).is_ok(), "{:?}", slack_holds(&inst, &cert.x));
    }

    #[test]
    fn one_sided_and_exact_stay_in_interval(seed in any::<u64>(), dim in 2usize..7, log_ratio in -6.0..-1.0f64) {
        let ratio = 10f64.powf(log_ratio);
        let cfg = InterpolationConfig::default();
        let mut rng = rng_from_seed(seed);
        for (inst, c) in [
            (sample_one_sided_instance::<f64>(&mut rng, dim, ratio), Construction::OneSided),
            (sample_exact_instance::<f64>(&mut rng, dim, ratio), Construction::Exact),
        ] {
            let cert = inst.run(c, &cfg).unwrap();
            prop_assert!(exact_holds(&inst, &cert.x).is_ok(), "{c:?}: {:?}", exact_holds(&inst, &cert.x));
            let width = inst.h.sub(&inst.k).norm();
            let bound = cfg.c_audit * shape_factor(inst.eps, inst.eta.unwrap(), width);
            prop_assert!(cert.x.sub(&inst.y).norm() <= bound);
        }
    }

    #[test]
    fn column_fix_respects_bounds(seed in any::<u64>(), dim in 2usize..7, eps in eps_strategy()) {
        let tol = Tolerances::default();
        let c = sample_column_instance::<f64>(&mut rng_from_seed(seed), dim, eps);
        let s = fix_column(&c, &tol).unwrap();
        let q = c.q.matrix().as_matrix();
        prop_assert!((&s - &c.s1).operator_norm() <= column_distance_bound(eps) + 1e-8);
        prop_assert!(s.operator_norm() <= 1.0 + 1e-10);
        prop_assert!((&(&s * q) - &(&c.s1 * q)).operator_norm() <= 1e-10);
    }

    #[test]
    fn corner_fix_respects_bounds(seed in any::<u64>(), dim in 2usize..7, eps in eps_strategy()) {
        let tol = Tolerances::default();
        let c = sample_corner_instance::<f64>(&mut rng_from_seed(seed), dim, eps);
        let out = fix_corner_detailed(&c, &tol).unwrap();
        prop_assert!((&out.t_prime - &c.t).operator_norm() <= 2.0 * column_distance_bound(eps) + 1e-8);
        prop_assert!(out.t1_norm <= 1.0 + eps + 1e-10);
        prop_assert!(out.t_prime.operator_norm() <= 1.0 + 1e-8);
        let (p, q) = (c.p.matrix().as_matrix(), c.q.matrix().as_matrix());
        let corner = |m: &Matrix| &(p * m) * q;
        prop_assert!((&corner(&out.t_prime) - &corner(&c.t)).operator_norm() <= 1e-9);
        let plain = fix_corner(&c, &tol).unwrap();
        prop_assert!((&plain - &out.t_prime).operator_norm() == 0.0);
    }
}

#[test]
fn distance_bound_formula() {
    assert_eq!(column_distance_bound(0.0f64), 0.0);
    assert!((column_distance_bound(1.0f64) - 3f64.sqrt()).abs() < 1e-15);
    assert!((column_distance_bound(0.01f64) - 0.0201f64.sqrt()).abs() < 1e-15);
}

#[test]
fn column_with_too_large_fixed_part_is_infeasible() {
    let tol = Tolerances::default();
    let s1 = Matrix::from_diag(&[2.0, 0.0]);
    let q = Projection::coordinate(2, &[0]).unwrap();
    let err = ColumnConstraint::new(s1, q, 5.0, &tol).unwrap_err();
    assert!(matches!(err, LabError::InfeasibleColumn { .. }));
}

#[test]
fn target_above_upper_corner_is_rejected() {
    let cfg = InterpolationConfig::default();
    let mut inst = sample_slack_instance::<f64>(&mut rng_from_seed(1), 3, 0.1);
    inst.y = inst.y.add(&compress(&inst.p, &Hermitian::identity(3)).unwrap().scale(100.0));
    let err = inst.run(Construction::Slack, &cfg).unwrap_err();
    assert!(matches!(err, LabError::PreconditionViolated(ref m) if m.contains("php >= y")), "{err}");
}

#[test]
fn instance_json_roundtrip_gives_same_certificate() {
    let cfg = InterpolationConfig::default();
    let inst = sample_exact_instance::<f64>(&mut rng_from_seed(8), 4, 1e-3);
    let text = serde_json::to_string(&inst).unwrap();
    let back: InterpolationInstance<f64> = serde_json::from_str(&text).unwrap();
    let a = inst.run(Construction::Exact, &cfg).unwrap();
    let b = back.run(Construction::Exact, &cfg).unwrap();
    assert_eq!(a.ratio, b.ratio);
    assert_eq!(a.perturbation, b.perturbation);
}
