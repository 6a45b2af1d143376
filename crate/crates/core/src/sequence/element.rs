use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::hermitian::HermitianMatrix;
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// Eventually-periodic sequence of `m × m` Hermitian matrices with an
/// independent value at infinity.
///
/// Index `n` (1-based) reads `prefix[n-1]` while `n <= prefix.len()`, and
/// `cycle[(n - N - 1) mod len]` afterwards. The cluster points of the sequence
/// are exactly the cycle entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SeqMatrixElement<T: Scalar> {
    pub m: usize,
    #[serde(default)]
    pub prefix: Vec<HermitianMatrix<T>>,
    pub cycle: Vec<HermitianMatrix<T>>,
    #[serde(rename = "inf")]
    pub at_infinity: HermitianMatrix<T>,
}

impl<T: Scalar> SeqMatrixElement<T> {
    pub fn new(prefix: Vec<HermitianMatrix<T>>, cycle: Vec<HermitianMatrix<T>>, at_infinity: HermitianMatrix<T>) -> Result<Self> {
        let s = Self {
            m: at_infinity.dim(),
            prefix,
            cycle,
            at_infinity,
        };
        s.validate()?;
        Ok(s)
    }

    /// `h_n = value` for every finite `n`.
    pub fn constant(value: HermitianMatrix<T>, at_infinity: HermitianMatrix<T>) -> Result<Self> {
        Self::new(Vec::new(), vec![value], at_infinity)
    }

    /// Scalar sequence as `1 × 1` matrices.
    pub fn from_scalars(prefix: &[T], cycle: &[T], at_infinity: T) -> Result<Self> {
        let one = |t: T| HermitianMatrix::from_diag(&[t]);
        Self::new(prefix.iter().map(|&t| one(t)).collect(), cycle.iter().map(|&t| one(t)).collect(), one(at_infinity))
    }

    pub fn validate(&self) -> Result<()> {
        if self.cycle.is_empty() {
            return Err(LabError::BadParameters("cycle must be non-empty".into()));
        }
        if self.m == 0 {
            return Err(LabError::BadParameters("block dimension m must be positive".into()));
        }
        let check = |label: String, h: &HermitianMatrix<T>| {
            if h.dim() != self.m {
                return Err(LabError::DimensionMismatch {
                    expected: format!("{0}x{0} at {label}", self.m),
                    found: format!("{0}x{0}", h.dim()),
                });
            }
            if !h.as_slice().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(LabError::BadParameters(format!("non-finite entry at {label}")));
            }
            Ok(())
        };
        check("inf".into(), &self.at_infinity)?;
        for (i, h) in self.prefix.iter().enumerate() {
            check(format!("prefix[{i}]"), h)?;
        }
        for (i, h) in self.cycle.iter().enumerate() {
            check(format!("cycle[{i}]"), h)?;
        }
        Ok(())
    }

    /// Entry at the 1-based finite index `n`.
    pub fn entry(&self, n: usize) -> &HermitianMatrix<T> {
        assert!(n >= 1, "sequence indices start at 1");
        let np = self.prefix.len();
        if n <= np {
            &self.prefix[n - 1]
        } else {
            &self.cycle[(n - np - 1) % self.cycle.len()]
        }
    }

    /// Labelled finite entries: prefix first, then one full cycle.
    pub fn finite_entries(&self) -> impl Iterator<Item = (String, &HermitianMatrix<T>)> {
        let p = self.prefix.iter().enumerate().map(|(i, h)| (format!("prefix[{i}]"), h));
        let c = self.cycle.iter().enumerate().map(|(i, h)| (format!("cycle[{i}]"), h));
        p.chain(c)
    }

    /// `sup_n ||h_n||` including `n = ∞`.
    pub fn sup_norm(&self) -> T {
        self.finite_entries()
            .map(|(_, h)| h.norm())
            .fold(self.at_infinity.norm(), T::max)
    }

    /// Membership in the sequence algebra itself: every cycle entry equals the
    /// value at infinity.
    pub fn is_convergent(&self, tol: &ToleranceConfig<T>) -> bool {
        let bound = tol.residual_tol * self.sup_norm().max(T::one());
        self.cycle
            .iter()
            .all(|h| h.sub(&self.at_infinity).norm() <= bound)
    }

    /// Applies `f` to every entry, finite and infinite, passing the 1-based
    /// index (`None` for infinity).
    pub fn try_map(&self, mut f: impl FnMut(Option<usize>, &HermitianMatrix<T>) -> Result<HermitianMatrix<T>>) -> Result<Self> {
        let np = self.prefix.len();
        let prefix = self
            .prefix
            .iter()
            .enumerate()
            .map(|(i, h)| f(Some(i + 1), h))
            .collect::<Result<Vec<_>>>()?;
        let cycle = self
            .cycle
            .iter()
            .enumerate()
            .map(|(i, h)| f(Some(np + i + 1), h))
            .collect::<Result<Vec<_>>>()?;
        let at_infinity = f(None, &self.at_infinity)?;
        Self::new(prefix, cycle, at_infinity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_wraps_through_cycle() {
        let s = SeqMatrixElement::from_scalars(&[5.0f64], &[1.0, 2.0, 3.0], 0.0).unwrap();
        let t = |n| s.entry(n)[(0, 0)].re;
        assert_eq!(t(1), 5.0);
        assert_eq!(t(2), 1.0);
        assert_eq!(t(4), 3.0);
        assert_eq!(t(5), 1.0);
        assert_eq!(t(8), 1.0);
    }

    #[test]
    fn rejects_empty_cycle_and_mixed_sizes() {
        let one = HermitianMatrix::<f64>::identity(1);
        let two = HermitianMatrix::<f64>::identity(2);
        assert!(SeqMatrixElement::new(vec![], vec![], one.clone()).is_err());
        assert!(SeqMatrixElement::new(vec![two], vec![one.clone()], one).is_err());
    }

    #[test]
    fn convergence_means_cycle_equals_limit() {
        let tol = ToleranceConfig::default();
        let s = SeqMatrixElement::from_scalars(&[9.0f64], &[2.0], 2.0).unwrap();
        assert!(s.is_convergent(&tol));
        let s = SeqMatrixElement::from_scalars(&[], &[2.0f64, 1.0], 2.0).unwrap();
        assert!(!s.is_convergent(&tol));
        assert_eq!(s.sup_norm(), 2.0);
    }

    #[test]
    fn json_shape() {
        let s = SeqMatrixElement::from_scalars(&[], &[1.0f64], 2.0).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["m"], 1);
        assert!(v.get("inf").is_some());
        let back: SeqMatrixElement<f64> = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }
}
