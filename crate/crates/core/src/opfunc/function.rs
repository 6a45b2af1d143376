use std::fmt;
use std::sync::Arc;

use crate::error::{LabError, Result};
use crate::interval::Interval;
use crate::linalg::calculus::{corner_function, matrix_function};
use crate::linalg::hermitian::{HermitianMatrix, ProjectionMatrix};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

type Evaluator<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Real function on an interval, applied to matrices by functional calculus.
#[derive(Clone)]
pub struct ScalarFunction<T: Scalar> {
    label: String,
    domain: Interval<T>,
    eval: Evaluator<T>,
}

impl<T: Scalar> ScalarFunction<T> {
    pub fn new(label: impl Into<String>, domain: Interval<T>, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            domain,
            eval: Arc::new(f),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> &Interval<T> {
        &self.domain
    }

    pub fn eval(&self, x: T) -> Result<T> {
        if !self.domain.contains(x) {
            return Err(LabError::DomainViolation {
                domain: self.domain.to_string(),
                offending: vec![x.as_f64()],
            });
        }
        Ok((self.eval)(x))
    }

    /// Evaluates without the domain check.
    pub fn call(&self, x: T) -> T {
        (self.eval)(x)
    }

    /// Same function on a sub-interval of its domain.
    pub fn restricted(&self, interval: Interval<T>) -> Result<Self> {
        if !interval.is_subset_of(&self.domain) {
            return Err(LabError::BadParameters(format!(
                "{interval} is not contained in the domain {} of {}",
                self.domain, self.label
            )));
        }
        Ok(Self {
            label: self.label.clone(),
            domain: interval,
            eval: self.eval.clone(),
        })
    }

    /// `f(h)`.
    pub fn on_matrix(&self, h: &HermitianMatrix<T>, tol: &ToleranceConfig<T>) -> Result<HermitianMatrix<T>> {
        let f = self.eval.clone();
        matrix_function(move |x| f(x), &self.domain, h, tol)
    }

    /// `f` applied to `php` inside the corner `pMp`.
    pub fn on_corner(
        &self,
        p: &ProjectionMatrix<T>,
        h: &HermitianMatrix<T>,
        tol: &ToleranceConfig<T>,
    ) -> Result<HermitianMatrix<T>> {
        let f = self.eval.clone();
        corner_function(move |x| f(x), &self.domain, p, h, tol)
    }
}

impl<T: Scalar> fmt::Debug for ScalarFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarFunction({} on {})", self.label, self.domain)
    }
}

/// What is known about a registry function on its sampling interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct KnownProperties {
    pub operator_convex: bool,
    pub strongly_convex: bool,
    pub operator_monotone: bool,
}

#[derive(Debug, Clone)]
pub struct RegistryEntry<T: Scalar> {
    pub function: ScalarFunction<T>,
    /// Default interval that test spectra are drawn from.
    pub sampling: Interval<T>,
    pub properties: KnownProperties,
}

pub const REGISTRY_LABELS: [&str; 9] = ["x^2", "x^3", "1/x", "-sqrt", "sqrt", "x/(x+1)", "exp", "log", "const:<c>"];

fn props(operator_convex: bool, strongly_convex: bool, operator_monotone: bool) -> KnownProperties {
    KnownProperties {
        operator_convex,
        strongly_convex,
        operator_monotone,
    }
}

/// Looks up a built-in function by label; `const:<c>` parses the constant.
pub fn lookup<T: Scalar>(label: &str) -> Result<RegistryEntry<T>> {
    let lit = T::lit;
    let real = Interval::<T>::real_line();
    let positive = Interval::open_above(T::zero());
    let nonneg = Interval::closed_above(T::zero());
    let entry = |f: ScalarFunction<T>, sampling: Interval<T>, p: KnownProperties| RegistryEntry {
        function: f,
        sampling,
        properties: p,
    };
    let e = match label {
        "x^2" => entry(ScalarFunction::new(label, real, |x| x * x), Interval::closed(lit(-2.0), lit(2.0)), props(true, false, false)),
        "x^3" => entry(ScalarFunction::new(label, real, |x| x * x * x), Interval::closed(lit(-1.0), lit(1.0)), props(false, false, false)),
        "1/x" => entry(ScalarFunction::new(label, positive, |x| x.recip()), Interval::closed(lit(0.5), lit(2.0)), props(true, true, false)),
        "-sqrt" => entry(ScalarFunction::new(label, nonneg, |x| -x.sqrt()), Interval::closed(T::zero(), lit(4.0)), props(true, false, false)),
        "sqrt" => entry(ScalarFunction::new(label, nonneg, |x| x.sqrt()), Interval::closed(T::zero(), lit(4.0)), props(false, false, true)),
        "x/(x+1)" => entry(
            ScalarFunction::new(label, Interval::open_above(-T::one()), |x| x / (x + T::one())),
            Interval::new(-T::one(), lit(3.0), false, true)?,
            props(false, false, true),
        ),
        "exp" => entry(ScalarFunction::new(label, real, |x| x.exp()), Interval::closed(lit(-1.0), lit(1.0)), props(false, false, false)),
        "log" => entry(ScalarFunction::new(label, positive, |x| x.ln()), Interval::closed(lit(0.5), lit(2.0)), props(false, false, true)),
        other => match other.strip_prefix("const:") {
            Some(c) => {
                let c: f64 = c
                    .parse()
                    .map_err(|_| LabError::BadParameters(format!("cannot parse constant in {other:?}")))?;
                let v = lit(c);
                entry(ScalarFunction::new(label, real, move |_| v), Interval::closed(lit(-1.0), lit(1.0)), props(true, c >= 0.0, true))
            }
            None => {
                return Err(LabError::BadParameters(format!(
                    "unknown function {other:?}; known: {}",
                    REGISTRY_LABELS.join(", ")
                )))
            }
        },
    };
    Ok(e)
}
