//! Interpolants in a Löwner interval `[k, h]` with a prescribed compression.
//!
//! Three constructions:
//! * [`interpolate_with_slack`]: `pxp = y` exactly with `k − ε ≤ x ≤ h + ε`;
//! * [`interpolate_one_sided`]: `pxp = pyp` with `k ≤ x ≤ h` when `y` overshoots `h` by at most `ε`;
//! * [`interpolate_exact`]: the same when `y` may overshoot on both sides.
//!
//! Every construction re-audits its output and returns
//! [`LabError::ContractViolated`] rather than an unverified matrix.

pub mod constants;
pub mod instances;

use serde::{Deserialize, Serialize};

use crate::completion::{fix_column, ColumnConstraint};
use crate::error::{LabError, Result};
use crate::linalg::calculus::{compress, compression_inverse, psd_sqrt, range_projection, restrict};
use crate::linalg::hermitian::{HermitianMatrix, ProjectionMatrix};
use crate::linalg::matrix::GeneralMatrix;
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// Validated pair `k ≤ h`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct OperatorInterval<T: Scalar> {
    pub k: HermitianMatrix<T>,
    pub h: HermitianMatrix<T>,
}

impl<T: Scalar> OperatorInterval<T> {
    pub fn new(k: HermitianMatrix<T>, h: HermitianMatrix<T>, tol: &ToleranceConfig<T>) -> Result<Self> {
        k.ensure_same_dim(&h)?;
        require_geq(&h, &k, "h >= k", tol)?;
        Ok(Self { k, h })
    }

    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    /// `h − k`.
    pub fn width(&self) -> HermitianMatrix<T> {
        self.h.sub(&self.k)
    }

    /// `max(‖h‖, ‖k‖, 1)`, the scale all absolute audit tolerances multiply.
    pub fn scale(&self) -> T {
        self.h.norm().max(self.k.norm()).max(T::one())
    }
}

/// Projection `p` with a target `y` living in the corner `pMp`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CompressionTarget<T: Scalar> {
    pub p: ProjectionMatrix<T>,
    pub y: HermitianMatrix<T>,
}

impl<T: Scalar> CompressionTarget<T> {
    pub fn new(p: ProjectionMatrix<T>, y: HermitianMatrix<T>, tol: &ToleranceConfig<T>) -> Result<Self> {
        p.ensure_same_dim(&y)?;
        let drift = compress(&p, &y)?.sub(&y).norm();
        if drift > tol.residual_tol * y.norm().max(T::one()) {
            return Err(LabError::NotCompressed {
                index: format!("||pyp - y|| = {drift:e}"),
            });
        }
        Ok(Self { p, y })
    }

    /// Checks `pkp ≤ y ≤ php`.
    pub fn check_against(&self, interval: &OperatorInterval<T>, tol: &ToleranceConfig<T>) -> Result<()> {
        interval.k.ensure_same_dim(&self.y)?;
        let pkp = compress(&self.p, &interval.k)?;
        let php = compress(&self.p, &interval.h)?;
        require_geq(&self.y, &pkp, "y >= pkp", tol)?;
        require_geq(&php, &self.y, "php >= y", tol)
    }
}

/// Intermediate contraction checks of the one-sided construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ContractionAudit<T: Scalar> {
    /// `‖(t₁ t₂)‖`.
    pub row_norm: T,
    /// `‖s₁q‖`.
    pub fixed_column_norm: T,
    /// `‖s₁ − t₁‖` and its bound `(ε/η)^{1/2}`.
    pub s1_minus_t1: T,
    pub s1_bound: T,
}

/// Report-only comparison against `2‖h−k‖(ε/η + ε²/η²)^{1/2}`, evaluated when
/// `h − k ≥ η` holds on the whole space.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SharpenedBoundReport<T: Scalar> {
    pub bound: T,
    pub holds: bool,
}

/// Audit record for a constructed interpolant.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct InterpolationCertificate<T: Scalar> {
    pub x: HermitianMatrix<T>,
    /// `‖pxp − target‖`.
    pub compression_residual: T,
    /// `λ_min(x − lower)` and `λ_min(upper − x)` for the bounds of the contract.
    pub lower_margin: T,
    pub upper_margin: T,
    /// `‖x − y‖`.
    pub perturbation: T,
    /// `‖x − y‖ / ((ε/η)^{1/4}‖h − k‖)`, for the constructions that promise it.
    pub ratio: Option<T>,
    /// `C_audit (ε/η)^{1/4} ‖h − k‖`.
    pub audited_bound: Option<T>,
    pub contraction: Vec<ContractionAudit<T>>,
    pub sharpened: Option<SharpenedBoundReport<T>>,
    pub scale: T,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct InterpolationConfig<T: Scalar> {
    pub tol: ToleranceConfig<T>,
    /// Constant in the audited perturbation bound `‖x − y‖ ≤ C (ε/η)^{1/4} ‖h − k‖`.
    pub c_audit: T,
    /// Relative tolerance (times `scale`) for compression residuals and margins.
    pub audit_tol: T,
    /// Slack on the intermediate contraction estimates.
    pub contraction_tol: T,
    /// Singular values `≤ rank_tol · σ_max` are dropped from range projections.
    pub rank_tol: T,
}

impl<T: Scalar> Default for InterpolationConfig<T> {
    fn default() -> Self {
        Self {
            tol: ToleranceConfig::default(),
            c_audit: T::lit(50.0),
            audit_tol: T::floor_tol(1e-8, 16384.0),
            contraction_tol: T::floor_tol(1e-10, 1024.0),
            rank_tol: T::floor_tol(1e-10, 64.0),
        }
    }
}

fn require_geq<T: Scalar>(a: &HermitianMatrix<T>, b: &HermitianMatrix<T>, what: &str, tol: &ToleranceConfig<T>) -> Result<()> {
    let gap = a.sub(b).min_eigenvalue()?;
    let slack = tol.loewner_abs(a.norm(), b.norm());
    if gap < -slack {
        return Err(LabError::PreconditionViolated(format!(
            "{what} fails: smallest eigenvalue of the difference is {gap:e} (tolerance {slack:e})"
        )));
    }
    Ok(())
}

fn require_eps<T: Scalar>(eps: T) -> Result<()> {
    if !(eps > T::zero()) || !eps.is_finite() {
        return Err(LabError::PreconditionViolated(format!("eps > 0 fails: eps = {eps}")));
    }
    Ok(())
}

fn audit_margins<T: Scalar>(
    x: &HermitianMatrix<T>,
    lower: &HermitianMatrix<T>,
    upper: &HermitianMatrix<T>,
    scale: T,
    cfg: &InterpolationConfig<T>,
) -> Result<(T, T)> {
    let lo = x.sub(lower).min_eigenvalue()?;
    let hi = upper.sub(x).min_eigenvalue()?;
    let slack = cfg.audit_tol * scale;
    if lo < -slack {
        return Err(LabError::ContractViolated(format!("x >= lower bound fails by {:e}", -lo)));
    }
    if hi < -slack {
        return Err(LabError::ContractViolated(format!("x <= upper bound fails by {:e}", -hi)));
    }
    Ok((lo, hi))
}

fn audit_compression<T: Scalar>(
    p: &ProjectionMatrix<T>,
    x: &HermitianMatrix<T>,
    target: &HermitianMatrix<T>,
    scale: T,
    cfg: &InterpolationConfig<T>,
) -> Result<T> {
    let residual = compress(p, x)?.sub(target).norm();
    if residual > cfg.audit_tol * scale {
        return Err(LabError::ContractViolated(format!("||pxp - target|| = {residual:e}")));
    }
    Ok(residual)
}

/// `x = k − ε + z*z` with `pxp = y` and `k − ε ≤ x ≤ h + ε`.
///
/// With `D = h − k + 2ε`: `t = (y − pkp + εp)^{1/2} (pDp)⁻¹ D^{1/2}` (inverse in
/// the corner) and `z = t D^{1/2}`.
pub fn interpolate_with_slack<T: Scalar>(
    interval: &OperatorInterval<T>,
    target: &CompressionTarget<T>,
    eps: T,
    cfg: &InterpolationConfig<T>,
) -> Result<InterpolationCertificate<T>> {
    require_eps(eps)?;
    target.check_against(interval, &cfg.tol)?;
    let tol = &cfg.tol;
    let (k, h, p, y) = (&interval.k, &interval.h, &target.p, &target.y);
    let two_eps = eps + eps;

    let d = interval.width().shift(two_eps);
    let d_half = psd_sqrt(&d, tol)?;
    let pkp = compress(p, k)?;
    let lifted = y.sub(&pkp).add(&p.matrix().scale(eps));
    let a = psd_sqrt(&lifted, tol)?;
    let g = compression_inverse(p, &d, eps, tol)?;
    let t = &(a.as_matrix() * g.as_matrix()) * d_half.as_matrix();
    let z = &t * d_half.as_matrix();
    let x = HermitianMatrix::symmetrize(&(&z.adjoint() * &z)).add(&k.shift(-eps));

    let scale = interval.scale();
    let compression_residual = audit_compression(p, &x, y, scale, cfg)?;
    let (lower_margin, upper_margin) = audit_margins(&x, &k.shift(-eps), &h.shift(eps), scale, cfg)?;
    Ok(InterpolationCertificate {
        perturbation: x.sub(y).norm(),
        x,
        compression_residual,
        lower_margin,
        upper_margin,
        ratio: None,
        audited_bound: None,
        contraction: Vec::new(),
        sharpened: None,
        scale,
    })
}

/// Factors `(y − k)^{1/2} = t₁(h − k)^{1/2} + ε^{1/2} t₂` with `‖(t₁ t₂)‖ ≤ 1`:
/// `t₁ = (y−k)^{1/2} w⁻² (h−k)^{1/2}`, `t₂ = ε^{1/2} (y−k)^{1/2} w⁻²`, `w² = h − k + ε`.
pub fn row_contraction_factor<T: Scalar>(
    interval: &OperatorInterval<T>,
    y: &HermitianMatrix<T>,
    eps: T,
    cfg: &InterpolationConfig<T>,
) -> Result<(GeneralMatrix<T>, GeneralMatrix<T>)> {
    let f = contraction_factors(interval, y, eps, cfg)?;
    Ok((f.t1, f.t2))
}

struct Factors<T: Scalar> {
    t1: GeneralMatrix<T>,
    t2: GeneralMatrix<T>,
    root_width: HermitianMatrix<T>,
    row_norm: T,
}

fn contraction_factors<T: Scalar>(
    interval: &OperatorInterval<T>,
    y: &HermitianMatrix<T>,
    eps: T,
    cfg: &InterpolationConfig<T>,
) -> Result<Factors<T>> {
    require_eps(eps)?;
    let tol = &cfg.tol;
    let (k, h) = (&interval.k, &interval.h);
    k.ensure_same_dim(y)?;
    require_geq(y, k, "y >= k", tol)?;
    require_geq(&h.shift(eps), y, "y <= h + eps", tol)?;

    let width = interval.width();
    let root_width = psd_sqrt(&width, tol)?;
    let s = psd_sqrt(&y.sub(k), tol)?;
    let w2 = width.shift(eps);
    let w2_inv = HermitianMatrix::symmetrize(&w2.spectral()?.map_to_matrix(|l| T::one() / l));
    let sw = s.as_matrix() * w2_inv.as_matrix();
    let t1 = &sw * root_width.as_matrix();
    let t2 = sw.scale(eps.sqrt());

    // ‖(t₁ t₂)‖² = ‖t₁t₁* + t₂t₂*‖
    let gram = HermitianMatrix::symmetrize(&(&(&t1 * &t1.adjoint()) + &(&t2 * &t2.adjoint())));
    let row_norm = gram.norm().sqrt();
    if row_norm > T::one() + cfg.contraction_tol {
        return Err(LabError::ContractViolated(format!("||(t1 t2)|| = {row_norm} exceeds 1")));
    }
    let rebuilt = &(&t1 * root_width.as_matrix()) + &t2.scale(eps.sqrt());
    let drift = (&rebuilt - s.as_matrix()).operator_norm();
    if drift > cfg.audit_tol * interval.scale().sqrt() {
        return Err(LabError::ContractViolated(format!(
            "t1 (h-k)^(1/2) + eps^(1/2) t2 misses (y-k)^(1/2) by {drift:e}"
        )));
    }
    Ok(Factors {
        t1,
        t2,
        root_width,
        row_norm,
    })
}

fn one_sided_preconditions<T: Scalar>(
    interval: &OperatorInterval<T>,
    p: &ProjectionMatrix<T>,
    y: &HermitianMatrix<T>,
    eps: T,
    eta: T,
    lower_slack: T,
    cfg: &InterpolationConfig<T>,
) -> Result<()> {
    let tol = &cfg.tol;
    let (k, h) = (&interval.k, &interval.h);
    p.ensure_same_dim(k)?;
    p.ensure_same_dim(y)?;
    require_eps(eps)?;
    if !(eta > eps) {
        return Err(LabError::PreconditionViolated(format!("eps < eta fails: eps = {eps}, eta = {eta}")));
    }
    let width = interval.width();
    let width_norm = width.norm();
    if eta > width_norm * (T::one() + tol.eig_tol) {
        return Err(LabError::PreconditionViolated(format!(
            "eta <= ||h - k|| fails: eta = {eta}, ||h - k|| = {width_norm}"
        )));
    }
    let (pkp, pyp, php) = (compress(p, k)?, compress(p, y)?, compress(p, h)?);
    require_geq(&php, &pyp, "php >= pyp", tol)?;
    require_geq(&pyp, &pkp, "pyp >= pkp", tol)?;
    require_geq(y, &k.shift(-lower_slack), if lower_slack > T::zero() { "y >= k - eps" } else { "y >= k" }, tol)?;
    require_geq(&h.shift(eps), y, "y <= h + eps", tol)?;
    if p.rank() > 0 {
        let (_, block) = restrict(p, &width)?;
        let lmin = block.min_eigenvalue()?;
        if lmin < eta - tol.loewner_abs(width_norm, T::zero()) {
            return Err(LabError::PreconditionViolated(format!(
                "p(h-k)p >= eta p fails: smallest eigenvalue on the range of p is {lmin}, eta = {eta}"
            )));
        }
    }
    Ok(())
}

/// `(ε/η)^{1/4} ‖h − k‖`.
pub fn shape_factor<T: Scalar>(eps: T, eta: T, width_norm: T) -> T {
    (eps / eta).sqrt().sqrt() * width_norm
}

/// Interpolant `x = k + (s(h−k)^{1/2})* s(h−k)^{1/2}` with `pxp = pyp` and
/// `k ≤ x ≤ h`, for `y` exceeding `h` by at most `ε`.
///
/// `s₁ = t₁ + ε^{1/2} t₂ (p(h−k)p)⁻¹ (h−k)^{1/2}`; `s` is the column fix of `s₁`
/// along `q = range((h−k)^{1/2} p)` with slack `(ε/η)^{1/2}`.
pub fn interpolate_one_sided<T: Scalar>(
    interval: &OperatorInterval<T>,
    p: &ProjectionMatrix<T>,
    y: &HermitianMatrix<T>,
    eps: T,
    eta: T,
    cfg: &InterpolationConfig<T>,
) -> Result<InterpolationCertificate<T>> {
    one_sided_preconditions(interval, p, y, eps, eta, T::zero(), cfg)?;
    one_sided_unchecked(interval, p, y, eps, eta, cfg)
}

fn one_sided_unchecked<T: Scalar>(
    interval: &OperatorInterval<T>,
    p: &ProjectionMatrix<T>,
    y: &HermitianMatrix<T>,
    eps: T,
    eta: T,
    cfg: &InterpolationConfig<T>,
) -> Result<InterpolationCertificate<T>> {
    let tol = &cfg.tol;
    let k = &interval.k;
    let f = contraction_factors(interval, y, eps, cfg)?;
    let width = interval.width();
    let r = f.root_width.as_matrix();
    let g = compression_inverse(p, &width, eta, tol)?;

    let correction = &(&f.t2 * g.as_matrix()) * r;
    let s1 = &f.t1 + &correction.scale(eps.sqrt());
    let q = range_projection(&(r * p.as_matrix()), cfg.rank_tol);
    let fixed_column_norm = (&s1 * q.as_matrix()).operator_norm();
    if fixed_column_norm > T::one() + cfg.contraction_tol {
        return Err(LabError::ContractViolated(format!("||s1 q|| = {fixed_column_norm} exceeds 1")));
    }
    let slack = (eps / eta).sqrt();
    let s1_minus_t1 = (&s1 - &f.t1).operator_norm();
    if s1_minus_t1 > slack + cfg.contraction_tol {
        return Err(LabError::ContractViolated(format!(
            "||s1 - t1|| = {s1_minus_t1:e} exceeds (eps/eta)^(1/2) = {slack:e}"
        )));
    }
    let s = fix_column(&ColumnConstraint { s1, q, eps: slack }, tol)?;
    let z = &s * r;
    let x = HermitianMatrix::symmetrize(&(&z.adjoint() * &z)).add(k);

    let scale = interval.scale();
    let compression_residual = audit_compression(p, &x, &compress(p, y)?, scale, cfg)?;
    let (lower_margin, upper_margin) = audit_margins(&x, k, &interval.h, scale, cfg)?;
    let perturbation = x.sub(y).norm();
    let shape = shape_factor(eps, eta, width.norm());
    let (ratio, audited_bound) = audit_ratio(perturbation, shape, cfg)?;
    Ok(InterpolationCertificate {
        x,
        compression_residual,
        lower_margin,
        upper_margin,
        perturbation,
        ratio: Some(ratio),
        audited_bound: Some(audited_bound),
        contraction: vec![ContractionAudit {
            row_norm: f.row_norm,
            fixed_column_norm,
            s1_minus_t1,
            s1_bound: slack,
        }],
        sharpened: None,
        scale,
    })
}

fn audit_ratio<T: Scalar>(perturbation: T, shape: T, cfg: &InterpolationConfig<T>) -> Result<(T, T)> {
    let ratio = if shape > T::zero() { perturbation / shape } else { T::zero() };
    let bound = cfg.c_audit * shape;
    if ratio > cfg.c_audit {
        return Err(LabError::ContractViolated(format!(
            "||x - y|| = {perturbation:e} exceeds C (eps/eta)^(1/4) ||h - k|| = {bound:e}"
        )));
    }
    Ok((ratio, bound))
}

/// Interpolant with `pxp = pyp` and `k ≤ x ≤ h` when `k − ε ≤ y ≤ h + ε`.
///
/// Runs the one-sided construction on `[k − ε, h]`, then again on the reflected
/// interval `[−h, −k]` with target `−x₁`, and negates.
pub fn interpolate_exact<T: Scalar>(
    interval: &OperatorInterval<T>,
    p: &ProjectionMatrix<T>,
    y: &HermitianMatrix<T>,
    eps: T,
    eta: T,
    cfg: &InterpolationConfig<T>,
) -> Result<InterpolationCertificate<T>> {
    one_sided_preconditions(interval, p, y, eps, eta, eps, cfg)?;
    let (k, h) = (&interval.k, &interval.h);
    let lowered = OperatorInterval {
        k: k.shift(-eps),
        h: h.clone(),
    };
    let first = one_sided_unchecked(&lowered, p, y, eps, eta, cfg)?;
    let reflected = OperatorInterval {
        k: h.neg(),
        h: k.neg(),
    };
    let second = one_sided_unchecked(&reflected, p, &first.x.neg(), eps, eta, cfg)?;
    let x = second.x.neg();

    let scale = interval.scale();
    let compression_residual = audit_compression(p, &x, &compress(p, y)?, scale, cfg)?;
    let (lower_margin, upper_margin) = audit_margins(&x, k, h, scale, cfg)?;
    let perturbation = x.sub(y).norm();
    let width = interval.width();
    let width_norm = width.norm();
    let (ratio, audited_bound) = audit_ratio(perturbation, shape_factor(eps, eta, width_norm), cfg)?;

    let sharpened = if width.min_eigenvalue()? >= eta - cfg.tol.loewner_abs(width_norm, T::zero()) {
        let r = eps / eta;
        let bound = T::lit(2.0) * width_norm * (r + r * r).sqrt();
        Some(SharpenedBoundReport {
            bound,
            holds: perturbation <= bound + cfg.audit_tol * scale,
        })
    } else {
        None
    };
    let mut contraction = first.contraction;
    contraction.extend(second.contraction);
    Ok(InterpolationCertificate {
        x,
        compression_residual,
        lower_margin,
        upper_margin,
        perturbation,
        ratio: Some(ratio),
        audited_bound: Some(audited_bound),
        contraction,
        sharpened,
        scale,
    })
}
