use loewner_lab::linalg::random::{rng_from_seed, sample_hermitian, sample_psd, trial_seed};
use loewner_lab::sequence::{
    classify, forced_sequence, is_in_compressed_algebra, testnet_oracle, verify_rank_one_obstruction, DeltaSchedule, FaceModel,
    SeqMatrixElement, TestnetGrid,
};
use loewner_lab::{Hermitian, Tolerances};
use proptest::prelude::*;
use rand::Rng;

/// Corner entries placed around `D`: equal to it, below it, above it, or on
/// both sides of it, so every strong verdict combination occurs.
fn sample_element(face: &FaceModel<f64>, seed: u64) -> SeqMatrixElement<f64> {
    let mut rng = rng_from_seed(seed);
    let (m, d) = (face.block_dim(), face.corner_dim());
    let mut h_inf: Hermitian = sample_hermitian(&mut rng, -2.0, 2.0, m);
    if matches!(face, FaceModel::ConstantCorner) {
        let a = h_inf[(0, 0)].re;
        h_inf = Hermitian::from_diag(&[a, 0.0]);
    }
    let limit = face.limit_compression(&h_inf);
    let cycle: Vec<Hermitian> = (0..rng.random_range(1..=3))
        .map(|_| {
            let bump = sample_psd(&mut rng, 1.0, d).scale(rng.random_range(0.2..1.0));
            match rng.random_range(0..4) {
                0 => limit.clone(),
                1 => limit.sub(&bump),
                2 => limit.add(&bump),
                // `c₁vv* − c₂ww*` with `v ⊥ w`: a violation large enough for the lattice to see
                _ if d == 1 => limit.clone(),
                _ => {
                    let basis = sample_hermitian(&mut rng, -1.0f64, 1.0, d).spectral().unwrap().basis;
                    let mut signs = vec![0.0; d];
                    signs[0] = rng.random_range(0.3..1.0);
                    signs[1] = -rng.random_range(0.3..1.0);
                    limit.add(&Hermitian::from_diag(&signs).congruence(&basis))
                }
            }
        })
        .collect();
    let prefix: Vec<Hermitian> = (0..rng.random_range(0..=2)).map(|_| sample_hermitian(&mut rng, -5.0, 5.0, d)).collect();
    face.element_from_corners(&prefix, &cycle, h_inf).unwrap()
}

fn faces() -> Vec<FaceModel<f64>> {
    vec![
        FaceModel::Block { k: 1, l: 1 },
        FaceModel::Block { k: 2, l: 1 },
        FaceModel::Block { k: 2, l: 0 },
        FaceModel::TiltedLine,
        FaceModel::ConstantCorner,
        FaceModel::TiltedPlane { theta: 0.4 },
        FaceModel::TiltedPlane { theta: std::f64::consts::FRAC_PI_4 },
    ]
}

#[test]
fn oracle_agrees_with_classifier_on_every_face() {
    let tol = Tolerances::default();
    let grid = TestnetGrid::default();
    for (fi, face) in faces().into_iter().enumerate() {
        let mut seen = [[0usize; 2]; 2];
        for i in 0..200 {
            let h = sample_element(&face, trial_seed(fi as u64, i));
            let v = classify(&h, &face, &tol).unwrap();
            let o = testnet_oracle(&h, &face, &grid, &tol).unwrap();
            assert!(o.agrees_with(&v), "{face} element {i}: classifier {:?}/{:?}, oracle {o:?}", v.strongly_usc, v.strongly_lsc);
            seen[v.strongly_usc.unwrap() as usize][v.strongly_lsc.unwrap() as usize] += 1;
        }
        assert!(seen.iter().flatten().all(|&n| n > 0), "{face}: verdict mix {seen:?}");
    }
}

#[test]
fn verdicts_respect_implications_and_mirror() {
    let tol = Tolerances::default();
    for (fi, face) in faces().into_iter().enumerate() {
        for i in 0..100 {
            let h = sample_element(&face, trial_seed(100 + fi as u64, i));
            let v = classify(&h, &face, &tol).unwrap();
            assert!(v.check_implications().is_ok(), "{face}: {:?}", v.implication_failures());
            let neg = h.try_map(|_, e| Ok(e.neg())).unwrap();
            let w = classify(&neg, &face, &tol).unwrap();
            assert_eq!(v.strongly_usc, w.strongly_lsc, "{face}");
            assert_eq!(v.strongly_lsc, w.strongly_usc, "{face}");
        }
    }
}

#[test]
fn prefix_never_changes_the_verdict() {
    let tol = Tolerances::default();
    for face in faces() {
        let h = sample_element(&face, 77);
        let bare = SeqMatrixElement::new(vec![], h.cycle.clone(), h.at_infinity.clone()).unwrap();
        let big = h.cycle[0].scale(1e3);
        let padded = SeqMatrixElement::new(vec![big], h.cycle.clone(), h.at_infinity.clone()).unwrap();
        let a = classify(&bare, &face, &tol).unwrap();
        let b = classify(&padded, &face, &tol).unwrap();
        assert_eq!((a.strongly_usc, a.strongly_lsc), (b.strongly_usc, b.strongly_lsc), "{face}");
    }
}

#[test]
fn forced_interpolant_leaves_the_algebra() {
    let tol = Tolerances::default();
    let x = forced_sequence(&[0.2, 0.9, 0.5], &DeltaSchedule::Geometric { ratio: 0.5 }, 30).unwrap();
    assert!(!is_in_compressed_algebra(&x, &FaceModel::Block { k: 2, l: 0 }, &tol).unwrap());
}

fn t_cycle() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01..0.99f64, 2..6).prop_filter("two distinct values", |v| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo > 1e-6
    })
}

fn schedule() -> impl Strategy<Value = DeltaSchedule> {
    prop_oneof![
        Just(DeltaSchedule::Harmonic),
        (0.1..0.95f64).prop_map(|ratio| DeltaSchedule::Geometric { ratio }),
        (0.2..3.0f64).prop_map(|exponent| DeltaSchedule::Power { exponent }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn oscillation_is_the_spread_of_t(t in t_cycle(), delta in schedule(), extra in 0usize..40) {
        let tol = Tolerances::default();
        let horizon = t.len() + extra;
        let w = verify_rank_one_obstruction(&t, &delta, horizon, &tol).unwrap();
        let lo = t.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((w.oscillation - (hi - lo)).abs() <= 1e-12);
        prop_assert!(w.infeasible);
        for (i, s) in w.forced_parameters.iter().enumerate() {
            prop_assert!((s - (1.0 - t[i % t.len()])).abs() <= 1e-12);
        }
        prop_assert!(w.max_forced_residual <= 1e-12);
    }

    #[test]
    fn json_roundtrip_preserves_elements(seed in any::<u64>(), fi in 0usize..7) {
        let face = faces()[fi];
        let h = sample_element(&face, seed);
        let text = serde_json::to_string(&h).unwrap();
        let back: SeqMatrixElement<f64> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, h);
        let ftext = serde_json::to_string(&face).unwrap();
        let fback: FaceModel<f64> = serde_json::from_str(&ftext).unwrap();
        prop_assert_eq!(fback, face);
    }
}

