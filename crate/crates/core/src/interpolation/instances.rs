//! Serializable interpolation instances and random generators for each construction.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::interpolation::{
    interpolate_exact, interpolate_one_sided, interpolate_with_slack, CompressionTarget, InterpolationCertificate,
    InterpolationConfig, OperatorInterval,
};
use crate::linalg::calculus::{compress, psd_sqrt, restrict};
use crate::linalg::hermitian::{HermitianMatrix, ProjectionMatrix};
use crate::linalg::random::{sample_hermitian, sample_proper_projection, sample_psd};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// File format `{"k": .., "h": .., "p": .., "y": .., "eps": .., "eta": ..}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct InterpolationInstance<T: Scalar> {
    pub k: HermitianMatrix<T>,
    pub h: HermitianMatrix<T>,
    pub p: ProjectionMatrix<T>,
    pub y: HermitianMatrix<T>,
    pub eps: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// `pxp = y`, `k − ε ≤ x ≤ h + ε`.
    Slack,
    /// `pxp = pyp`, `k ≤ x ≤ h`, `y ≤ h + ε`.
    OneSided,
    /// `pxp = pyp`, `k ≤ x ≤ h`, `k − ε ≤ y ≤ h + ε`.
    Exact,
}

impl<T: Scalar> InterpolationInstance<T> {
    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    pub fn interval(&self, tol: &ToleranceConfig<T>) -> Result<OperatorInterval<T>> {
        OperatorInterval::new(self.k.clone(), self.h.clone(), tol)
    }

    fn eta(&self) -> Result<T> {
        self.eta
            .ok_or_else(|| LabError::BadParameters("this construction needs eta in the instance".into()))
    }

    pub fn run(&self, construction: Construction, cfg: &InterpolationConfig<T>) -> Result<InterpolationCertificate<T>> {
        let interval = self.interval(&cfg.tol)?;
        match construction {
            Construction::Slack => {
                let target = CompressionTarget::new(self.p.clone(), self.y.clone(), &cfg.tol)?;
                interpolate_with_slack(&interval, &target, self.eps, cfg)
            }
            Construction::OneSided => interpolate_one_sided(&interval, &self.p, &self.y, self.eps, self.eta()?, cfg),
            Construction::Exact => interpolate_exact(&interval, &self.p, &self.y, self.eps, self.eta()?, cfg),
        }
    }
}

/// Target `y = pkp + X C X` with `X = (p(h−k)p)^{1/2}` and `0 ≤ C ≤ 1` in the
/// corner, so `pkp ≤ y ≤ php`.
pub fn sample_slack_instance<T: Scalar>(rng: &mut impl Rng, dim: usize, eps: T) -> InterpolationInstance<T> {
    let tol = ToleranceConfig::default();
    let k = sample_hermitian(rng, -T::one(), T::one(), dim);
    let scale = T::lit(rng.random_range(0.5..=3.0));
    let width = sample_psd(rng, scale, dim);
    let h = k.add(&width);
    let p = sample_proper_projection::<T>(rng, dim);
    let c = compress(&p, &sample_psd(rng, T::one(), dim)).expect("same dimension");
    let x = psd_sqrt(&compress(&p, &width).expect("same dimension"), &tol).expect("compression of PSD");
    let y = compress(&p, &k).expect("same dimension").add(&c.congruence(x.as_matrix()));
    InterpolationInstance { k, h, p, y, eps, eta: None }
}

/// Draws `k`, a PSD width `Δ` and `p` with `η = λ_min(pΔp|range p) ≥ 0.05·scale`.
fn sample_gap<T: Scalar>(
    rng: &mut impl Rng,
    dim: usize,
) -> (HermitianMatrix<T>, HermitianMatrix<T>, ProjectionMatrix<T>, T) {
    let k = sample_hermitian(rng, -T::one(), T::one(), dim);
    let scale = T::lit(rng.random_range(0.5..=3.0));
    loop {
        let p = sample_proper_projection::<T>(rng, dim);
        let width = sample_psd(rng, scale, dim);
        let (_, block) = restrict(&p, &width).expect("same dimension");
        let eta = block.min_eigenvalue().expect("small Hermitian block");
        if eta >= T::lit(0.05) * scale {
            return (k, width, p, eta);
        }
    }
}

/// `y = k + λ (Δ+ε)^{1/2} C (Δ+ε)^{1/2}` with `0 ≤ C ≤ 1`, `λ = η/(η+ε)` and `ε = ratio·η`.
pub fn sample_one_sided_instance<T: Scalar>(rng: &mut impl Rng, dim: usize, ratio: T) -> InterpolationInstance<T> {
    let tol = ToleranceConfig::default();
    let (k, width, p, eta) = sample_gap::<T>(rng, dim);
    let eps = ratio * eta;
    let c = sample_psd(rng, T::one(), dim);
    let lambda = eta / (eta + eps);
    let w = psd_sqrt(&width.shift(eps), &tol).expect("PSD plus eps");
    let y = k.add(&c.congruence(w.as_matrix()).scale(lambda));
    InterpolationInstance {
        h: k.add(&width),
        k,
        p,
        y,
        eps,
        eta: Some(eta),
    }
}

/// `y = x₀ + E` with `k ≤ x₀ ≤ h`, `pEp = 0` and `‖E‖ ≤ ε`, where `ε = ratio·η`.
pub fn sample_exact_instance<T: Scalar>(rng: &mut impl Rng, dim: usize, ratio: T) -> InterpolationInstance<T> {
    let tol = ToleranceConfig::default();
    let (k, width, p, eta) = sample_gap::<T>(rng, dim);
    let eps = ratio * eta;
    let root = psd_sqrt(&width, &tol).expect("PSD width");
    let x0 = k.add(&sample_psd(rng, T::one(), dim).congruence(root.as_matrix()));
    let e = sample_hermitian(rng, -T::one(), T::one(), dim);
    let e = e.sub(&compress(&p, &e).expect("same dimension"));
    let norm = e.norm();
    let e = if norm > T::zero() {
        e.scale(eps * T::lit(rng.random_range(0.0..=1.0)) / norm)
    } else {
        e
    };
    InterpolationInstance {
        h: k.add(&width),
        k,
        p,
        y: x0.add(&e),
        eps,
        eta: Some(eta),
    }
}
