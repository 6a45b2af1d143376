use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::calculus::min_eigenvalue_of_difference;
use crate::linalg::hermitian::HermitianMatrix;
use crate::scalar::Scalar;
use crate::sequence::element::SeqMatrixElement;
use crate::sequence::face::FaceModel;
use crate::tolerance::ToleranceConfig;

/// Semicontinuity classification of one element on one face.
///
/// `None` means the face has no closed-form criterion for that notion.
/// `middle_usc_necessary` is only a necessary condition for middle upper
/// semicontinuity; it is reported where no sufficient criterion is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SemicontinuityVerdict<T: Scalar> {
    pub face: FaceModel<T>,
    pub strongly_usc: Option<bool>,
    pub middle_usc: Option<bool>,
    pub middle_usc_necessary: Option<bool>,
    pub weakly_usc: Option<bool>,
    pub strongly_lsc: Option<bool>,
    pub middle_lsc: Option<bool>,
    pub weakly_lsc: Option<bool>,
    pub certificate: VerdictCertificate<T>,
}

/// The data a verdict was read off.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct VerdictCertificate<T: Scalar> {
    /// Distinct cycle entries in corner coordinates.
    pub cluster_points: Vec<HermitianMatrix<T>>,
    /// What the cluster points are compared against.
    pub limit: HermitianMatrix<T>,
    /// `λ_min(limit − a′)` per cluster point.
    pub usc_gaps: Vec<T>,
    /// `λ_min(a′ − limit)` per cluster point.
    pub lsc_gaps: Vec<T>,
    /// Absolute slack applied to the gaps.
    pub slack: T,
}

impl<T: Scalar> SemicontinuityVerdict<T> {
    /// Names of the implications `strong ⇒ middle ⇒ weak` that fail among the
    /// defined fields. The necessary middle condition stands in for the middle
    /// verdict when only it is available.
    pub fn implication_failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mid_usc = self.middle_usc.or(self.middle_usc_necessary);
        let chains = [
            ("strongly_usc => middle_usc", self.strongly_usc, mid_usc),
            ("middle_usc => weakly_usc", mid_usc, self.weakly_usc),
            ("strongly_usc => weakly_usc", self.strongly_usc, self.weakly_usc),
            ("strongly_lsc => middle_lsc", self.strongly_lsc, self.middle_lsc),
            ("middle_lsc => weakly_lsc", self.middle_lsc, self.weakly_lsc),
            ("strongly_lsc => weakly_lsc", self.strongly_lsc, self.weakly_lsc),
        ];
        for (name, a, b) in chains {
            if a == Some(true) && b == Some(false) {
                out.push(name);
            }
        }
        out
    }

    pub fn check_implications(&self) -> Result<()> {
        let bad = self.implication_failures();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(LabError::ContractViolated(format!("semicontinuity implications fail: {}", bad.join(", "))))
        }
    }

    fn strong_only(face: FaceModel<T>, usc: bool, lsc: bool, certificate: VerdictCertificate<T>) -> Self {
        Self {
            face,
            strongly_usc: Some(usc),
            middle_usc: None,
            middle_usc_necessary: None,
            weakly_usc: None,
            strongly_lsc: Some(lsc),
            middle_lsc: None,
            weakly_lsc: None,
            certificate,
        }
    }
}

/// Distinct cycle entries after `extract`, deduplicated within `residual_tol`.
pub fn cluster_points<T: Scalar>(
    seq: &SeqMatrixElement<T>,
    extract: impl Fn(&HermitianMatrix<T>) -> HermitianMatrix<T>,
    tol: &ToleranceConfig<T>,
) -> Vec<HermitianMatrix<T>> {
    let bound = tol.residual_tol * seq.sup_norm().max(T::one());
    let mut out: Vec<HermitianMatrix<T>> = Vec::new();
    for h in &seq.cycle {
        let a = extract(h);
        if !out.iter().any(|b| b.sub(&a).as_matrix().max_abs() <= bound) {
            out.push(a);
        }
    }
    out
}

/// Compares every cluster point of the corner blocks with the face's limit
/// compression of `h_∞`.
fn compare_with_limit<T: Scalar>(
    h: &SeqMatrixElement<T>,
    face: &FaceModel<T>,
    tol: &ToleranceConfig<T>,
) -> Result<VerdictCertificate<T>> {
    let points = cluster_points(h, |e| face.finite_block(e), tol);
    let limit = face.limit_compression(&h.at_infinity);
    let mut usc_gaps = Vec::with_capacity(points.len());
    let mut lsc_gaps = Vec::with_capacity(points.len());
    let mut scale = limit.norm();
    for a in &points {
        usc_gaps.push(min_eigenvalue_of_difference(&limit, a)?);
        lsc_gaps.push(min_eigenvalue_of_difference(a, &limit)?);
        scale = scale.max(a.norm());
    }
    Ok(VerdictCertificate {
        cluster_points: points,
        limit,
        usc_gaps,
        lsc_gaps,
        slack: tol.loewner_abs(scale, T::zero()),
    })
}

impl<T: Scalar> VerdictCertificate<T> {
    fn all_usc(&self) -> bool {
        self.usc_gaps.iter().all(|&g| g >= -self.slack)
    }

    fn all_lsc(&self) -> bool {
        self.lsc_gaps.iter().all(|&g| g >= -self.slack)
    }
}

/// Whether `h` lies in `pA_sa p`: the corner blocks converge to the limit
/// compression of `h_∞`.
pub fn is_in_compressed_algebra<T: Scalar>(h: &SeqMatrixElement<T>, face: &FaceModel<T>, tol: &ToleranceConfig<T>) -> Result<bool> {
    face.check_compressed(h, tol)?;
    let limit = face.limit_compression(&h.at_infinity);
    let bound = tol.residual_tol * h.sup_norm().max(T::one());
    Ok(h.cycle.iter().all(|e| face.finite_block(e).sub(&limit).as_matrix().max_abs() <= bound))
}

fn require_block<T: Scalar>(face: &FaceModel<T>) -> Result<()> {
    match face {
        FaceModel::Block { .. } => Ok(()),
        other => Err(LabError::BadParameters(format!("expected a block face, got {other}"))),
    }
}

/// `a′ ≤ a_∞` for every cluster point of the top-left blocks.
pub fn usc_on_blockface<T: Scalar>(h: &SeqMatrixElement<T>, face: &FaceModel<T>, tol: &ToleranceConfig<T>) -> Result<bool> {
    require_block(face)?;
    face.check_compressed(h, tol)?;
    Ok(compare_with_limit(h, face, tol)?.all_usc())
}

/// `a′ ≥ a_∞` for every cluster point of the top-left blocks.
pub fn lsc_on_blockface<T: Scalar>(h: &SeqMatrixElement<T>, face: &FaceModel<T>, tol: &ToleranceConfig<T>) -> Result<bool> {
    require_block(face)?;
    face.check_compressed(h, tol)?;
    Ok(compare_with_limit(h, face, tol)?.all_lsc())
}

/// Smallest `λ_min(x_∞ − x′)` over cluster points `x′` of the full sequence,
/// with the slack it is judged against.
pub fn bidual_usc_gap<T: Scalar>(x: &SeqMatrixElement<T>, tol: &ToleranceConfig<T>) -> Result<(T, T)> {
    let points = cluster_points(x, |e| e.clone(), tol);
    let mut gap = T::infinity();
    let mut scale = x.at_infinity.norm();
    for a in &points {
        gap = gap.min(min_eigenvalue_of_difference(&x.at_infinity, a)?);
        scale = scale.max(a.norm());
    }
    Ok((gap, tol.loewner_abs(scale, T::zero())))
}

/// Strong upper semicontinuity in the bidual: `x′ ≤ x_∞` for every cluster
/// point of the full sequence.
pub fn usc_in_bidual<T: Scalar>(x: &SeqMatrixElement<T>, tol: &ToleranceConfig<T>) -> Result<bool> {
    let (gap, slack) = bidual_usc_gap(x, tol)?;
    Ok(gap >= -slack)
}

/// Scalar criteria on the tilted line: strongly lsc iff `½t_∞ ≤ lim inf t_n`,
/// strongly usc iff `½t_∞ ≥ lim sup t_n`; every element is middle (hence
/// weakly) usc and lsc.
pub fn classify_tilted_line<T: Scalar>(
    t_prefix: &[T],
    t_cycle: &[T],
    t_inf: T,
    tol: &ToleranceConfig<T>,
) -> Result<SemicontinuityVerdict<T>> {
    let h = SeqMatrixElement::from_scalars(t_prefix, t_cycle, t_inf)?;
    let cert = compare_with_limit(&h, &FaceModel::TiltedLine, tol)?;
    Ok(SemicontinuityVerdict {
        face: FaceModel::TiltedLine,
        strongly_usc: Some(cert.all_usc()),
        middle_usc: Some(true),
        middle_usc_necessary: None,
        weakly_usc: Some(true),
        strongly_lsc: Some(cert.all_lsc()),
        middle_lsc: Some(true),
        weakly_lsc: Some(true),
        certificate: cert,
    })
}

/// Criteria on the tilted plane, with `D = [[a_∞cos²θ, b_∞cosθ], [b̄_∞cosθ, c_∞]]`:
/// strongly usc iff `D ≥ a′` for every cluster point `a′ = [[a, b], [b̄, c]]`;
/// weakly usc iff `c_∞ ≥ c`; middle usc requires `c_∞ > c`, or `c_∞ = c` and
/// `b = b_∞cosθ`. The lsc side mirrors these under `h ↦ −h`.
pub fn classify_tilted_plane<T: Scalar>(h: &SeqMatrixElement<T>, theta: T, tol: &ToleranceConfig<T>) -> Result<SemicontinuityVerdict<T>> {
    let face = FaceModel::TiltedPlane { theta };
    face.check_compressed(h, tol)?;
    let cert = compare_with_limit(h, &face, tol)?;
    let slack = cert.slack;
    let c_inf = cert.limit[(1, 1)].re;
    let b_lim = cert.limit[(0, 1)];
    let mut middle = true;
    let mut weak_usc = true;
    let mut weak_lsc = true;
    for a in &cert.cluster_points {
        let c = a[(1, 1)].re;
        let b = a[(0, 1)];
        let strictly_above = c_inf > c + slack;
        let level = (c_inf - c).abs() <= slack;
        middle &= strictly_above || (level && (b - b_lim).norm() <= slack);
        weak_usc &= c_inf >= c - slack;
        weak_lsc &= c_inf <= c + slack;
    }
    Ok(SemicontinuityVerdict {
        face,
        strongly_usc: Some(cert.all_usc()),
        middle_usc: None,
        middle_usc_necessary: Some(middle),
        weakly_usc: Some(weak_usc),
        strongly_lsc: Some(cert.all_lsc()),
        middle_lsc: None,
        weakly_lsc: Some(weak_lsc),
        certificate: cert,
    })
}

/// Dispatches to the criterion of `face`.
pub fn classify<T: Scalar>(h: &SeqMatrixElement<T>, face: &FaceModel<T>, tol: &ToleranceConfig<T>) -> Result<SemicontinuityVerdict<T>> {
    face.check_compressed(h, tol)?;
    match *face {
        FaceModel::TiltedLine => {
            let t = |e: &HermitianMatrix<T>| e[(0, 0)].re;
            let prefix: Vec<T> = h.prefix.iter().map(t).collect();
            let cycle: Vec<T> = h.cycle.iter().map(t).collect();
            classify_tilted_line(&prefix, &cycle, t(&h.at_infinity), tol)
        }
        FaceModel::TiltedPlane { theta } => classify_tilted_plane(h, theta, tol),
        FaceModel::Block { .. } | FaceModel::ConstantCorner => {
            let cert = compare_with_limit(h, face, tol)?;
            Ok(SemicontinuityVerdict::strong_only(*face, cert.all_usc(), cert.all_lsc(), cert))
        }
    }
}
