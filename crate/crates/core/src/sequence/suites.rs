//! Randomized checks of the usc criteria on block faces.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::interval::Interval;
use crate::linalg::hermitian::HermitianMatrix;
use crate::linalg::random::{rng_from_seed, sample_hermitian, trial_seed, OPEN_END_INSET};
use crate::opfunc::corpus::corpus;
use crate::opfunc::rep::IntegralRep;
use crate::opfunc::ScalarFunction;
use crate::scalar::Scalar;
use crate::sequence::element::SeqMatrixElement;
use crate::sequence::face::FaceModel;
use crate::sequence::verdict::{bidual_usc_gap, classify};
use crate::tolerance::ToleranceConfig;

/// Which usc criterion a suite checks on `f(h)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockCriterion {
    /// `f(a′) ≤ pr f(h_∞)` on the face.
    OnFace,
    /// `x′ ≤ x_∞` for the whole sequence.
    InBidual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SuiteViolation<T: Scalar> {
    pub index: usize,
    pub face: FaceModel<T>,
    pub h: SeqMatrixElement<T>,
    pub gap: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SuiteReport<T: Scalar> {
    pub function: String,
    pub criterion: BlockCriterion,
    pub trials: usize,
    pub violations: usize,
    pub min_gap: T,
    pub first_violation: Option<SuiteViolation<T>>,
}

/// A random element of `pA_sa p` on a block face with `k, l ∈ [1, max_kl]`:
/// random `h_∞` with spectrum in `[lo, hi]`, a constant cycle equal to its
/// top-left block, and up to two unrelated prefix blocks.
pub fn sample_block_instance<T: Scalar>(
    rng: &mut impl Rng,
    lo: T,
    hi: T,
    max_kl: usize,
) -> Result<(FaceModel<T>, SeqMatrixElement<T>)> {
    let k = rng.random_range(1..=max_kl);
    let l = rng.random_range(1..=max_kl);
    let face = FaceModel::Block { k, l };
    let h_inf = sample_hermitian(rng, lo, hi, k + l);
    let a_inf = face.finite_block(&h_inf);
    let prefix: Vec<HermitianMatrix<T>> = (0..rng.random_range(0..=2)).map(|_| sample_hermitian(rng, lo, hi, k)).collect();
    let h = face.element_from_corners(&prefix, &[a_inf], h_inf)?;
    Ok((face, h))
}

fn gap_for<T: Scalar>(
    criterion: BlockCriterion,
    f: &ScalarFunction<T>,
    face: &FaceModel<T>,
    h: &SeqMatrixElement<T>,
    tol: &ToleranceConfig<T>,
) -> Result<(T, T)> {
    let fh = face.functional_calculus(f, h, tol)?;
    match criterion {
        BlockCriterion::OnFace => {
            let v = classify(&fh, face, tol)?;
            let gap = v.certificate.usc_gaps.iter().copied().fold(T::infinity(), T::min);
            Ok((gap, v.certificate.slack))
        }
        BlockCriterion::InBidual => bidual_usc_gap(&fh, tol),
    }
}

/// Runs `trials` seeded block-face instances with spectra drawn from
/// `sampling` and records every violation of `criterion` for `f(h)`.
pub fn block_usc_suite<T: Scalar>(
    criterion: BlockCriterion,
    f: &ScalarFunction<T>,
    sampling: &Interval<T>,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig<T>,
) -> Result<SuiteReport<T>> {
    if !sampling.is_subset_of(f.domain()) {
        return Err(LabError::BadParameters(format!(
            "sampling interval {sampling} is not inside the domain {} of {}",
            f.domain(),
            f.label()
        )));
    }
    let (lo, hi) = sampling.sampling_range(T::lit(OPEN_END_INSET))?;
    let results: Vec<Result<(usize, FaceModel<T>, SeqMatrixElement<T>, T, T)>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(trial_seed(seed, i as u64));
            let (face, h) = sample_block_instance(&mut rng, lo, hi, 3)?;
            let (gap, slack) = gap_for(criterion, f, &face, &h, tol)?;
            Ok((i, face, h, gap, slack))
        })
        .collect();
    let mut report = SuiteReport {
        function: f.label().to_string(),
        criterion,
        trials,
        violations: 0,
        min_gap: T::infinity(),
        first_violation: None,
    };
    for r in results {
        let (index, face, h, gap, slack) = r?;
        report.min_gap = report.min_gap.min(gap);
        if gap < -slack {
            report.violations += 1;
            if report.first_violation.is_none() {
                report.first_violation = Some(SuiteViolation { index, face, h, gap });
            }
        }
    }
    Ok(report)
}

/// Operator convex functions with `f(0) ≤ 0` on intervals containing 0, and
/// the intervals to draw spectra from.
pub fn convex_suite_functions<T: Scalar>() -> Vec<(ScalarFunction<T>, Interval<T>)> {
    let l = T::lit;
    let two = l(2.0);
    let half = l(0.5);
    vec![
        (ScalarFunction::new("x^2", Interval::real_line(), |x: T| x * x), Interval::closed(-two, two)),
        (ScalarFunction::new("-sqrt", Interval::closed_above(T::zero()), |x: T| -x.sqrt()), Interval::closed(T::zero(), l(4.0))),
        (
            ScalarFunction::new("1/(x+2)-1/2", Interval::open_above(-two), move |x: T| (x + two).recip() - half),
            Interval::closed(l(-1.9), l(3.0)),
        ),
    ]
}

/// The strongly operator convex corpus entries, as functions with their
/// sampling intervals.
pub fn strong_suite_functions<T: Scalar>() -> Vec<(ScalarFunction<T>, Interval<T>)> {
    corpus::<T>()
        .into_iter()
        .filter(|e| matches!(e.rep, IntegralRep::Strong(_)))
        .map(|e| (e.rep.to_function(e.name), e.sampling))
        .collect()
}

/// `h_∞ = [[1, 1], [1, 1]]` on the `k = l = 1` block face: `x²` gives
/// `x_n = diag(1, 0)` against `x_∞ = [[2, 2], [2, 2]]`.
pub fn square_bidual_witness<T: Scalar>() -> (FaceModel<T>, SeqMatrixElement<T>) {
    let face = FaceModel::Block { k: 1, l: 1 };
    let one = T::one();
    let h_inf = HermitianMatrix::symmetrize(&crate::linalg::GeneralMatrix::from_real_rows(&[vec![one, one], vec![one, one]]).expect("2x2"));
    let h = face
        .element_from_corners(&[], &[HermitianMatrix::from_diag(&[one])], h_inf)
        .expect("valid block element");
    (face, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convex_functions_pass_on_face() {
        let tol = ToleranceConfig::default();
        for (f, s) in convex_suite_functions::<f64>() {
            let r = block_usc_suite(BlockCriterion::OnFace, &f, &s, 60, 3, &tol).unwrap();
            assert_eq!(r.violations, 0, "{}: {:?}", f.label(), r.first_violation);
        }
    }

    #[test]
    fn strong_functions_pass_in_bidual() {
        let tol = ToleranceConfig::default();
        let fs = strong_suite_functions::<f64>();
        assert_eq!(fs.len(), 3);
        for (f, s) in fs {
            let r = block_usc_suite(BlockCriterion::InBidual, &f, &s, 60, 4, &tol).unwrap();
            assert_eq!(r.violations, 0, "{}: {:?}", f.label(), r.first_violation);
        }
    }

    #[test]
    fn square_fails_in_bidual() {
        let tol = ToleranceConfig::default();
        let (f, s) = convex_suite_functions::<f64>().remove(0);
        let r = block_usc_suite(BlockCriterion::InBidual, &f, &s, 200, 5, &tol).unwrap();
        assert!(r.violations > 0);
        let w = r.first_violation.unwrap();
        let (gap, slack) = gap_for(BlockCriterion::InBidual, &f, &w.face, &w.h, &tol).unwrap();
        assert_eq!(gap, w.gap);
        assert!(gap < -slack);

        let (face, h) = square_bidual_witness::<f64>();
        let (gap, _) = gap_for(BlockCriterion::InBidual, &f, &face, &h, &tol).unwrap();
        assert!((gap - (3.0 - 17f64.sqrt()) / 2.0).abs() < 1e-12, "{gap}");
    }

    #[test]
    fn reports_are_deterministic() {
        let tol = ToleranceConfig::default();
        let (f, s) = convex_suite_functions::<f64>().remove(0);
        let a = block_usc_suite(BlockCriterion::InBidual, &f, &s, 50, 9, &tol).unwrap();
        let b = block_usc_suite(BlockCriterion::InBidual, &f, &s, 50, 9, &tol).unwrap();
        assert_eq!(a, b);
    }
}
