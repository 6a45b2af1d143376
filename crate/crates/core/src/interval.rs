use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, Result};
use crate::scalar::Scalar;

/// Real interval with independently open or closed ends; ends may be infinite.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval<T: Scalar> {
    pub lo: T,
    pub hi: T,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        let iv = Self {
            lo,
            hi,
            lo_closed: lo_closed && lo.is_finite(),
            hi_closed: hi_closed && hi.is_finite(),
        };
        if lo.is_nan() || hi.is_nan() || lo > hi || (lo == hi && !(iv.lo_closed && iv.hi_closed)) {
            return Err(LabError::BadParameters(format!("empty interval {iv}")));
        }
        Ok(iv)
    }

    pub fn closed(lo: T, hi: T) -> Self {
        Self::new(lo, hi, true, true).expect("closed interval with lo <= hi")
    }

    pub fn open(lo: T, hi: T) -> Self {
        Self::new(lo, hi, false, false).expect("open interval with lo < hi")
    }

    pub fn real_line() -> Self {
        Self::open(T::neg_infinity(), T::infinity())
    }

    /// `(lo, ∞)`.
    pub fn open_above(lo: T) -> Self {
        Self::open(lo, T::infinity())
    }

    /// `[lo, ∞)`.
    pub fn closed_above(lo: T) -> Self {
        Self::new(lo, T::infinity(), true, false).expect("half line")
    }

    pub fn contains(&self, x: T) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn contains_interior(&self, x: T) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    /// Moves a value lying just outside a closed end (within `slack`) onto that
    /// end; returns `None` when the value is genuinely outside.
    pub fn snap(&self, x: T, slack: T) -> Option<T> {
        if self.contains(x) {
            return Some(x);
        }
        if self.lo_closed && x < self.lo && self.lo - x <= slack {
            return Some(self.lo);
        }
        if self.hi_closed && x > self.hi && x - self.hi <= slack {
            return Some(self.hi);
        }
        None
    }

    /// True when `t` lies strictly to the left of every point of the interval.
    pub fn is_left_of(&self, t: T) -> bool {
        t < self.lo || (t == self.lo && !self.lo_closed)
    }

    pub fn is_right_of(&self, t: T) -> bool {
        t > self.hi || (t == self.hi && !self.hi_closed)
    }

    /// Closed sub-interval suitable for drawing sample spectra. Open finite ends
    /// are pulled inward by `inset · width`.
    pub fn sampling_range(&self, inset: T) -> Result<(T, T)> {
        if !self.is_bounded() {
            return Err(LabError::BadParameters(format!(
                "cannot sample spectra from unbounded interval {self}"
            )));
        }
        let d = self.width() * inset;
        let lo = if self.lo_closed { self.lo } else { self.lo + d };
        let hi = if self.hi_closed { self.hi } else { self.hi - d };
        Ok((lo, hi))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        let lo_ok = self.lo > other.lo || (self.lo == other.lo && (other.lo_closed || !self.lo_closed));
        let hi_ok = self.hi < other.hi || (self.hi == other.hi && (other.hi_closed || !self.hi_closed));
        lo_ok && hi_ok
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl<T: Scalar> fmt::Debug for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// JSON form; infinite ends are `null`.
#[derive(Serialize, Deserialize)]
struct IntervalJson {
    lo: Option<f64>,
    hi: Option<f64>,
    #[serde(default)]
    lo_closed: bool,
    #[serde(default)]
    hi_closed: bool,
}

impl<T: Scalar> Serialize for Interval<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let fin = |x: T| x.is_finite().then(|| x.as_f64());
        IntervalJson {
            lo: fin(self.lo),
            hi: fin(self.hi),
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Interval<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = IntervalJson::deserialize(d)?;
        Interval::new(
            raw.lo.map_or(T::neg_infinity(), T::lit),
            raw.hi.map_or(T::infinity(), T::lit),
            raw.lo_closed,
            raw.hi_closed,
        )
        .map_err(D::Error::custom)
    }
}
