use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::interval::Interval;
use crate::scalar::Scalar;

/// Which side of the representation interval a measure lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Support strictly left of the interval.
    Minus,
    /// Support strictly right of the interval.
    Plus,
}

/// Finite positive measure: point masses plus piecewise-constant densities.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MeasureOnLine<T: Scalar> {
    /// `(location, weight)`.
    pub atoms: Vec<(T, T)>,
    /// `(u, v, density)` on `[u, v]`.
    pub pieces: Vec<(T, T, T)>,
}

impl<T: Scalar> MeasureOnLine<T> {
    pub fn zero() -> Self {
        Self {
            atoms: Vec::new(),
            pieces: Vec::new(),
        }
    }

    pub fn atom(t: T, w: T) -> Self {
        Self {
            atoms: vec![(t, w)],
            pieces: Vec::new(),
        }
    }

    pub fn piece(u: T, v: T, rho: T) -> Self {
        Self {
            atoms: Vec::new(),
            pieces: vec![(u, v, rho)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.pieces.is_empty()
    }

    pub fn total_mass(&self) -> T {
        let a: T = self.atoms.iter().map(|&(_, w)| w).sum();
        let p: T = self.pieces.iter().map(|&(u, v, r)| r * (v - u)).sum();
        a + p
    }

    /// Checks nonnegative weights, `u < v`, and support strictly on `side` of `interval`.
    pub fn validate(&self, side: Side, interval: &Interval<T>) -> Result<()> {
        let outside = |t: T| match side {
            Side::Minus => interval.is_left_of(t),
            Side::Plus => interval.is_right_of(t),
        };
        for &(t, w) in &self.atoms {
            if !(w >= T::zero()) || !t.is_finite() {
                return Err(LabError::BadParameters(format!("atom ({t}, {w}) needs finite location and weight >= 0")));
            }
            if !outside(t) {
                return Err(LabError::BadParameters(format!(
                    "atom at {t} is not strictly {} of {interval}",
                    side_word(side)
                )));
            }
        }
        for &(u, v, r) in &self.pieces {
            if !(u < v) || !u.is_finite() || !v.is_finite() || !(r >= T::zero()) {
                return Err(LabError::BadParameters(format!("piece [{u}, {v}] density {r} needs u < v and density >= 0")));
            }
            if !outside(u) || !outside(v) {
                return Err(LabError::BadParameters(format!(
                    "piece [{u}, {v}] is not strictly {} of {interval}",
                    side_word(side)
                )));
            }
        }
        Ok(())
    }

    /// Splits a mixed measure by location relative to `interval`.
    pub fn split(&self, interval: &Interval<T>) -> Result<(Self, Self)> {
        let mut minus = Self::zero();
        let mut plus = Self::zero();
        for &(t, w) in &self.atoms {
            if interval.is_left_of(t) {
                minus.atoms.push((t, w));
            } else if interval.is_right_of(t) {
                plus.atoms.push((t, w));
            } else {
                return Err(LabError::BadParameters(format!("atom at {t} lies in {interval}")));
            }
        }
        for &(u, v, r) in &self.pieces {
            if interval.is_left_of(v) && interval.is_left_of(u) {
                minus.pieces.push((u, v, r));
            } else if interval.is_right_of(u) && interval.is_right_of(v) {
                plus.pieces.push((u, v, r));
            } else {
                return Err(LabError::BadParameters(format!("piece [{u}, {v}] meets {interval}")));
            }
        }
        minus.validate(Side::Minus, interval)?;
        plus.validate(Side::Plus, interval)?;
        Ok((minus, plus))
    }

    pub fn merged(&self, other: &Self) -> Self {
        Self {
            atoms: self.atoms.iter().chain(&other.atoms).copied().collect(),
            pieces: self.pieces.iter().chain(&other.pieces).copied().collect(),
        }
    }
}

fn side_word(side: Side) -> &'static str {
    match side {
        Side::Minus => "left",
        Side::Plus => "right",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_by_location() {
        let iv = Interval::open(0.0f64, 1.0);
        let m = MeasureOnLine {
            atoms: vec![(0.0, 1.0), (2.0, 0.5)],
            pieces: vec![(-3.0, -1.0, 1.0), (1.0, 4.0, 2.0)],
        };
        let (minus, plus) = m.split(&iv).unwrap();
        assert_eq!(minus.atoms, vec![(0.0, 1.0)]);
        assert_eq!(plus.atoms, vec![(2.0, 0.5)]);
        assert_eq!(minus.pieces.len(), 1);
        assert_eq!(plus.pieces.len(), 1);
        assert!((m.total_mass() - 9.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_support_inside_interval() {
        let iv = Interval::closed(0.0, 1.0);
        assert!(MeasureOnLine::atom(0.0, 1.0).split(&iv).is_err());
        assert!(MeasureOnLine::piece(-1.0, 0.5, 1.0).split(&iv).is_err());
        assert!(MeasureOnLine::atom(-1.0, -1.0).validate(Side::Minus, &iv).is_err());
        assert!(MeasureOnLine::atom(2.0, 1.0).validate(Side::Minus, &iv).is_err());
    }
}
