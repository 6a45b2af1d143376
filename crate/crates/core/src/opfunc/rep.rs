//! Integral representations of operator convex, strongly operator convex and
//! operator monotone functions, with scalar and matrix evaluation.
//!
//! Scalar evaluation integrates each density piece in closed form. Matrix
//! evaluation works independently of the scalar path: resolvents by direct
//! inversion, piece integrals by matrix logarithms of shifted arguments,
//! polynomial terms by products.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, Result};
use crate::interval::Interval;
use crate::linalg::calculus::matrix_function;
use crate::linalg::hermitian::HermitianMatrix;
use crate::linalg::matrix::GeneralMatrix;
use crate::opfunc::function::ScalarFunction;
use crate::opfunc::measure::{MeasureOnLine, Side};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

/// `f(x) = ax² + bx + c + ∫ (x−x₀)²/((x−t)(x₀−t)²) dμ₋(t) + ∫ (x−x₀)²/((t−x)(t−x₀)²) dμ₊(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexIntegralRep<T: Scalar> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub x0: T,
    pub interval: Interval<T>,
    pub mu_minus: MeasureOnLine<T>,
    pub mu_plus: MeasureOnLine<T>,
}

/// `f(x) = c + ∫ 1/(x−t) dμ₋(t) + ∫ 1/(t−x) dμ₊(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrongConvexRep<T: Scalar> {
    pub c: T,
    pub interval: Interval<T>,
    pub mu_minus: MeasureOnLine<T>,
    pub mu_plus: MeasureOnLine<T>,
}

/// `f(x) = ax + b + ∫ (x−x₀)/((x−t)(x₀−t)) dμ₋(t) + ∫ (x−x₀)/((t−x)(t−x₀)) dμ₊(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneRep<T: Scalar> {
    pub a: T,
    pub b: T,
    pub x0: T,
    pub interval: Interval<T>,
    pub mu_minus: MeasureOnLine<T>,
    pub mu_plus: MeasureOnLine<T>,
}

fn check_measures<T: Scalar>(i: &Interval<T>, minus: &MeasureOnLine<T>, plus: &MeasureOnLine<T>) -> Result<()> {
    minus.validate(Side::Minus, i)?;
    plus.validate(Side::Plus, i)
}

fn nonneg<T: Scalar>(name: &str, v: T) -> Result<()> {
    if !(v >= T::zero()) {
        return Err(LabError::BadParameters(format!("{name} must be >= 0, got {v}")));
    }
    Ok(())
}

fn in_domain<T: Scalar>(i: &Interval<T>, x: T) -> Result<()> {
    if !i.contains(x) {
        return Err(LabError::DomainViolation {
            domain: i.to_string(),
            offending: vec![x.as_f64()],
        });
    }
    Ok(())
}

impl<T: Scalar> ConvexIntegralRep<T> {
    pub fn new(
        a: T,
        b: T,
        c: T,
        x0: T,
        interval: Interval<T>,
        mu_minus: MeasureOnLine<T>,
        mu_plus: MeasureOnLine<T>,
    ) -> Result<Self> {
        nonneg("a", a)?;
        if !interval.contains_interior(x0) {
            return Err(LabError::BadParameters(format!("x0 = {x0} must be interior to {interval}")));
        }
        check_measures(&interval, &mu_minus, &mu_plus)?;
        Ok(Self {
            a,
            b,
            c,
            x0,
            interval,
            mu_minus,
            mu_plus,
        })
    }

    pub fn eval(&self, x: T) -> Result<T> {
        in_domain(&self.interval, x)?;
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: T) -> T {
        let x0 = self.x0;
        let d = x - x0;
        let mut acc = self.a * x * x + self.b * x + self.c;
        for &(t, w) in &self.mu_minus.atoms {
            acc = acc + w * d * d / ((x - t) * (x0 - t) * (x0 - t));
        }
        for &(t, w) in &self.mu_plus.atoms {
            acc = acc + w * d * d / ((t - x) * (t - x0) * (t - x0));
        }
        for &(u, v, r) in &self.mu_minus.pieces {
            let term = ((x - u) / (x - v)).ln() - ((x0 - u) / (x0 - v)).ln()
                + d * ((x0 - v).recip() - (x0 - u).recip());
            acc = acc + r * term;
        }
        for &(u, v, r) in &self.mu_plus.pieces {
            let term = ((v - x) / (u - x)).ln() - ((v - x0) / (u - x0)).ln()
                - d * ((u - x0).recip() - (v - x0).recip());
            acc = acc + r * term;
        }
        acc
    }
}

impl<T: Scalar> StrongConvexRep<T> {
    pub fn new(c: T, interval: Interval<T>, mu_minus: MeasureOnLine<T>, mu_plus: MeasureOnLine<T>) -> Result<Self> {
        nonneg("c", c)?;
        check_measures(&interval, &mu_minus, &mu_plus)?;
        Ok(Self {
            c,
            interval,
            mu_minus,
            mu_plus,
        })
    }

    pub fn eval(&self, x: T) -> Result<T> {
        in_domain(&self.interval, x)?;
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: T) -> T {
        let mut acc = self.c;
        for &(t, w) in &self.mu_minus.atoms {
            acc = acc + w / (x - t);
        }
        for &(t, w) in &self.mu_plus.atoms {
            acc = acc + w / (t - x);
        }
        for &(u, v, r) in &self.mu_minus.pieces {
            acc = acc + r * ((x - u) / (x - v)).ln();
        }
        for &(u, v, r) in &self.mu_plus.pieces {
            acc = acc + r * ((v - x) / (u - x)).ln();
        }
        acc
    }
}

impl<T: Scalar> MonotoneRep<T> {
    pub fn new(
        a: T,
        b: T,
        x0: T,
        interval: Interval<T>,
        mu_minus: MeasureOnLine<T>,
        mu_plus: MeasureOnLine<T>,
    ) -> Result<Self> {
        nonneg("a", a)?;
        if !interval.contains(x0) {
            return Err(LabError::BadParameters(format!("x0 = {x0} must lie in {interval}")));
        }
        check_measures(&interval, &mu_minus, &mu_plus)?;
        Ok(Self {
            a,
            b,
            x0,
            interval,
            mu_minus,
            mu_plus,
        })
    }

    pub fn eval(&self, x: T) -> Result<T> {
        in_domain(&self.interval, x)?;
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: T) -> T {
        let x0 = self.x0;
        let d = x - x0;
        let mut acc = self.a * x + self.b;
        for &(t, w) in &self.mu_minus.atoms {
            acc = acc + w * d / ((x - t) * (x0 - t));
        }
        for &(t, w) in &self.mu_plus.atoms {
            acc = acc + w * d / ((t - x) * (t - x0));
        }
        for &(u, v, r) in &self.mu_minus.pieces {
            acc = acc + r * (((x0 - u) / (x0 - v)).ln() - ((x - u) / (x - v)).ln());
        }
        for &(u, v, r) in &self.mu_plus.pieces {
            acc = acc + r * (((v - x) / (u - x)).ln() - ((v - x0) / (u - x0)).ln());
        }
        acc
    }
}

/// Any of the three representations.
#[derive(Debug, Clone, PartialEq)]
pub enum IntegralRep<T: Scalar> {
    Convex(ConvexIntegralRep<T>),
    Strong(StrongConvexRep<T>),
    Monotone(MonotoneRep<T>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    Convex,
    Strong,
    Monotone,
}

impl<T: Scalar> IntegralRep<T> {
    pub fn kind(&self) -> RepKind {
        match self {
            Self::Convex(_) => RepKind::Convex,
            Self::Strong(_) => RepKind::Strong,
            Self::Monotone(_) => RepKind::Monotone,
        }
    }

    pub fn interval(&self) -> &Interval<T> {
        match self {
            Self::Convex(r) => &r.interval,
            Self::Strong(r) => &r.interval,
            Self::Monotone(r) => &r.interval,
        }
    }

    pub fn eval(&self, x: T) -> Result<T> {
        match self {
            Self::Convex(r) => r.eval(x),
            Self::Strong(r) => r.eval(x),
            Self::Monotone(r) => r.eval(x),
        }
    }

    fn eval_unchecked(&self, x: T) -> T {
        match self {
            Self::Convex(r) => r.eval_unchecked(x),
            Self::Strong(r) => r.eval_unchecked(x),
            Self::Monotone(r) => r.eval_unchecked(x),
        }
    }

    /// The represented function, evaluated through the scalar closed forms.
    pub fn to_function(&self, label: impl Into<String>) -> ScalarFunction<T> {
        let rep = self.clone();
        ScalarFunction::new(label, *self.interval(), move |x| rep.eval_unchecked(x))
    }
}

pub fn eval_convex_rep<T: Scalar>(rep: &ConvexIntegralRep<T>, x: T) -> Result<T> {
    rep.eval(x)
}

pub fn eval_strong_rep<T: Scalar>(rep: &StrongConvexRep<T>, x: T) -> Result<T> {
    rep.eval(x)
}

pub fn eval_monotone_rep<T: Scalar>(rep: &MonotoneRep<T>, x: T) -> Result<T> {
    rep.eval(x)
}

/// Matrix argument: accumulates `Σ coeff · term` as a general matrix.
struct MatrixTerms<'a, T: Scalar> {
    h: &'a HermitianMatrix<T>,
    acc: GeneralMatrix<T>,
    tol: &'a ToleranceConfig<T>,
}

impl<'a, T: Scalar> MatrixTerms<'a, T> {
    fn new(h: &'a HermitianMatrix<T>, tol: &'a ToleranceConfig<T>) -> Self {
        Self {
            h,
            acc: GeneralMatrix::zeros(h.dim(), h.dim()),
            tol,
        }
    }

    fn add(&mut self, m: &GeneralMatrix<T>, coeff: T) {
        self.acc = &self.acc + &m.scale(coeff);
    }

    fn add_identity(&mut self, coeff: T) {
        self.acc = self.acc.add_identity(coeff);
    }

    /// `coeff · (H − x₀)`.
    fn add_shifted(&mut self, x0: T, coeff: T) {
        let m = self.h.as_matrix().add_identity(-x0);
        self.add(&m, coeff);
    }

    /// `coeff · (H − t)⁻¹` by Gauss-Jordan inversion.
    fn add_resolvent(&mut self, t: T, coeff: T) -> Result<()> {
        let inv = self.h.as_matrix().add_identity(-t).inverse()?;
        self.add(&inv, coeff);
        Ok(())
    }

    /// `coeff · log(s(H − t))` with `s = ±1`, via the spectral calculus of the shifted matrix.
    fn add_log(&mut self, t: T, sign: T, coeff: T) -> Result<()> {
        let shifted = self.h.shift(-t).scale(sign);
        let log = matrix_function(|x| x.ln(), &Interval::open_above(T::zero()), &shifted, self.tol)?;
        self.add(log.as_matrix(), coeff);
        Ok(())
    }

    fn finish(self) -> HermitianMatrix<T> {
        HermitianMatrix::symmetrize(&self.acc)
    }
}

fn check_spectrum<T: Scalar>(interval: &Interval<T>, h: &HermitianMatrix<T>, tol: &ToleranceConfig<T>) -> Result<()> {
    let dec = h.spectral()?;
    let slack = tol.eig_tol * dec.norm().max(T::one());
    let bad: Vec<f64> = dec
        .eigenvalues
        .iter()
        .filter(|&&l| interval.snap(l, slack).is_none())
        .map(|l| l.as_f64())
        .collect();
    if !bad.is_empty() {
        return Err(LabError::DomainViolation {
            domain: interval.to_string(),
            offending: bad,
        });
    }
    Ok(())
}

/// Evaluates a representation at a Hermitian matrix whose spectrum lies in its interval.
pub fn matrix_eval_rep<T: Scalar>(
    rep: &IntegralRep<T>,
    h: &HermitianMatrix<T>,
    tol: &ToleranceConfig<T>,
) -> Result<HermitianMatrix<T>> {
    check_spectrum(rep.interval(), h, tol)?;
    let mut m = MatrixTerms::new(h, tol);
    let one = T::one();
    match rep {
        IntegralRep::Convex(r) => {
            let x0 = r.x0;
            let sq = h.as_matrix() * h.as_matrix();
            m.add(&sq, r.a);
            m.add(h.as_matrix(), r.b);
            m.add_identity(r.c);
            for &(t, w) in &r.mu_minus.atoms {
                m.add_resolvent(t, w)?;
                m.add_identity(-w / (x0 - t));
                m.add_shifted(x0, w / ((x0 - t) * (x0 - t)));
            }
            for &(t, w) in &r.mu_plus.atoms {
                m.add_resolvent(t, -w)?;
                m.add_identity(-w / (t - x0));
                m.add_shifted(x0, -w / ((t - x0) * (t - x0)));
            }
            for &(u, v, rho) in &r.mu_minus.pieces {
                m.add_log(u, one, rho)?;
                m.add_log(v, one, -rho)?;
                m.add_identity(-rho * ((x0 - u) / (x0 - v)).ln());
                m.add_shifted(x0, rho * ((x0 - v).recip() - (x0 - u).recip()));
            }
            for &(u, v, rho) in &r.mu_plus.pieces {
                m.add_log(v, -one, rho)?;
                m.add_log(u, -one, -rho)?;
                m.add_identity(-rho * ((v - x0) / (u - x0)).ln());
                m.add_shifted(x0, -rho * ((u - x0).recip() - (v - x0).recip()));
            }
        }
        IntegralRep::Strong(r) => {
            m.add_identity(r.c);
            for &(t, w) in &r.mu_minus.atoms {
                m.add_resolvent(t, w)?;
            }
            for &(t, w) in &r.mu_plus.atoms {
                m.add_resolvent(t, -w)?;
            }
            for &(u, v, rho) in &r.mu_minus.pieces {
                m.add_log(u, one, rho)?;
                m.add_log(v, one, -rho)?;
            }
            for &(u, v, rho) in &r.mu_plus.pieces {
                m.add_log(v, -one, rho)?;
                m.add_log(u, -one, -rho)?;
            }
        }
        IntegralRep::Monotone(r) => {
            let x0 = r.x0;
            m.add(h.as_matrix(), r.a);
            m.add_identity(r.b);
            for &(t, w) in &r.mu_minus.atoms {
                m.add_identity(w / (x0 - t));
                m.add_resolvent(t, -w)?;
            }
            for &(t, w) in &r.mu_plus.atoms {
                m.add_resolvent(t, -w)?;
                m.add_identity(-w / (t - x0));
            }
            for &(u, v, rho) in &r.mu_minus.pieces {
                m.add_identity(rho * ((x0 - u) / (x0 - v)).ln());
                m.add_log(u, one, -rho)?;
                m.add_log(v, one, rho)?;
            }
            for &(u, v, rho) in &r.mu_plus.pieces {
                m.add_log(v, -one, rho)?;
                m.add_log(u, -one, -rho)?;
                m.add_identity(-rho * ((v - x0) / (u - x0)).ln());
            }
        }
    }
    Ok(m.finish())
}

/// JSON form `{kind, a, b, c, x0, I, atoms: [[t, w]], pieces: [[u, v, ρ]]}`;
/// the side of each atom or piece is read off its position relative to `I`.
#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
struct RepJson<T: Scalar> {
    kind: RepKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x0: Option<T>,
    #[serde(rename = "I")]
    interval: Interval<T>,
    #[serde(default)]
    atoms: Vec<(T, T)>,
    #[serde(default)]
    pieces: Vec<(T, T, T)>,
}

impl<T: Scalar> Serialize for IntegralRep<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (a, b, c, x0, minus, plus) = match self {
            Self::Convex(r) => (Some(r.a), Some(r.b), Some(r.c), Some(r.x0), &r.mu_minus, &r.mu_plus),
            Self::Strong(r) => (None, None, Some(r.c), None, &r.mu_minus, &r.mu_plus),
            Self::Monotone(r) => (Some(r.a), Some(r.b), None, Some(r.x0), &r.mu_minus, &r.mu_plus),
        };
        let all = minus.merged(plus);
        RepJson {
            kind: self.kind(),
            a,
            b,
            c,
            x0,
            interval: *self.interval(),
            atoms: all.atoms,
            pieces: all.pieces,
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for IntegralRep<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let j = RepJson::<T>::deserialize(d)?;
        let measure = MeasureOnLine {
            atoms: j.atoms,
            pieces: j.pieces,
        };
        let build = || -> Result<Self> {
            let (minus, plus) = measure.split(&j.interval)?;
            let need = |v: Option<T>, name: &str| {
                v.ok_or_else(|| LabError::Format(format!("{:?} representation needs field {name}", j.kind)))
            };
            Ok(match j.kind {
                RepKind::Convex => Self::Convex(ConvexIntegralRep::new(
                    j.a.unwrap_or_else(T::zero),
                    j.b.unwrap_or_else(T::zero),
                    j.c.unwrap_or_else(T::zero),
                    need(j.x0, "x0")?,
                    j.interval,
                    minus,
                    plus,
                )?),
                RepKind::Strong => Self::Strong(StrongConvexRep::new(j.c.unwrap_or_else(T::zero), j.interval, minus, plus)?),
                RepKind::Monotone => Self::Monotone(MonotoneRep::new(
                    j.a.unwrap_or_else(T::zero),
                    j.b.unwrap_or_else(T::zero),
                    need(j.x0, "x0")?,
                    j.interval,
                    minus,
                    plus,
                )?),
            })
        };
        build().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn zero() -> MeasureOnLine<f64> {
        MeasureOnLine::zero()
    }

    #[test]
    fn convex_examples() {
        let quad = ConvexIntegralRep::new(1.0, 0.0, 0.0, 0.0, Interval::real_line(), zero(), zero()).unwrap();
        assert_eq!(quad.eval(3.0).unwrap(), 9.0);
        let atom = ConvexIntegralRep::new(0.0, 0.0, 0.0, 1.0, Interval::open_above(0.0), MeasureOnLine::atom(0.0, 1.0), zero()).unwrap();
        assert!((atom.eval(2.0).unwrap() - 0.5).abs() < 1e-15);
        let poly = ConvexIntegralRep::new(0.5f64, -1.0, 2.0, 1.0, Interval::open(0.0, 3.0), MeasureOnLine::atom(0.0, 1.0), MeasureOnLine::piece(3.0, 4.0, 2.0)).unwrap();
        assert!((poly.eval(1.0).unwrap() - (0.5 - 1.0 + 2.0)).abs() < 1e-15);
        assert!(matches!(atom.eval(-1.0), Err(LabError::DomainViolation { .. })));
    }

    #[test]
    fn strong_examples() {
        let inv = StrongConvexRep::new(0.0, Interval::open_above(0.0), MeasureOnLine::atom(0.0, 1.0), zero()).unwrap();
        assert_eq!(inv.eval(4.0).unwrap(), 0.25);
        let five = StrongConvexRep::new(5.0, Interval::real_line(), zero(), zero()).unwrap();
        assert_eq!(five.eval(-3.0).unwrap(), 5.0);
        let piece = StrongConvexRep::new(0.0, Interval::open_above(0.0), MeasureOnLine::piece(-2.0, -1.0, 1.0), zero()).unwrap();
        assert!((piece.eval(1.0).unwrap() - 1.5f64.ln()).abs() < 1e-15);
        assert!(StrongConvexRep::new(-1.0, Interval::real_line(), zero(), zero()).is_err());
    }

    #[test]
    fn monotone_examples() {
        let id = MonotoneRep::new(1.0, 0.0, 0.0, Interval::real_line(), zero(), zero()).unwrap();
        assert_eq!(id.eval(7.0).unwrap(), 7.0);
        let frac = MonotoneRep::new(0.0, 0.0, 0.0, Interval::open_above(-1.0), MeasureOnLine::atom(-1.0, 1.0), zero()).unwrap();
        assert!((frac.eval(1.0).unwrap() - 0.5).abs() < 1e-15);
        let shifted = MonotoneRep::new(2.0f64, 3.0, 0.5, Interval::open(-1.0, 1.0), MeasureOnLine::atom(-1.0, 1.0), MeasureOnLine::piece(1.0, 2.0, 1.0)).unwrap();
        assert!((shifted.eval(0.5).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn pieces_match_fine_quadrature() {
        // midpoint rule against the closed forms
        let iv = Interval::open(-1.0, 1.0);
        let integrand = |x: f64, t: f64, x0: f64| {
            if t < x { (x - x0).powi(2) / ((x - t) * (x0 - t).powi(2)) } else { (x - x0).powi(2) / ((t - x) * (t - x0).powi(2)) }
        };
        let rep = ConvexIntegralRep::new(0.0, 0.0, 0.0, 0.2, iv, MeasureOnLine::piece(-3.0, -1.5, 0.7), MeasureOnLine::piece(1.5, 2.5, 1.3)).unwrap();
        let n = 200_000;
        for &x in &[-0.9, -0.3, 0.2, 0.8] {
            let quad = |u: f64, v: f64, rho: f64| {
                let hstep = (v - u) / n as f64;
                (0..n).map(|i| integrand(x, u + (i as f64 + 0.5) * hstep, 0.2)).sum::<f64>() * hstep * rho
            };
            let expect = quad(-3.0, -1.5, 0.7) + quad(1.5, 2.5, 1.3);
            assert!((rep.eval(x).unwrap() - expect).abs() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn matrix_route_examples() {
        let inv = IntegralRep::Strong(StrongConvexRep::new(0.0, Interval::open_above(0.0), MeasureOnLine::atom(0.0, 1.0), zero()).unwrap());
        let h = HermitianMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]], &tol()).unwrap();
        let m = matrix_eval_rep(&inv, &h, &tol()).unwrap();
        let expect = [[2.0 / 3.0, -1.0 / 3.0], [-1.0 / 3.0, 2.0 / 3.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[(i, j)].re - expect[i][j]).abs() < 1e-14);
            }
        }
        let d = HermitianMatrix::from_diag(&[0.5, 3.0]);
        let md = matrix_eval_rep(&inv, &d, &tol()).unwrap();
        assert!((md[(0, 0)].re - 2.0).abs() < 1e-14 && md[(0, 1)].norm() < 1e-15);
        let bad = HermitianMatrix::from_diag(&[-1.0, 3.0]);
        match matrix_eval_rep(&inv, &bad, &tol()) {
            Err(LabError::DomainViolation { offending, .. }) => assert_eq!(offending, vec![-1.0]),
            other => panic!("expected domain violation, got {other:?}"),
        }
    }

    #[test]
    fn json_infers_sides() {
        let s = r#"{"kind":"convex","a":0,"b":-1,"c":2,"x0":1,"I":{"lo":0,"hi":3},"atoms":[[0,1]],"pieces":[[3,4,0.5]]}"#;
        let rep: IntegralRep<f64> = serde_json::from_str(s).unwrap();
        match &rep {
            IntegralRep::Convex(r) => {
                assert_eq!(r.mu_minus.atoms, vec![(0.0, 1.0)]);
                assert_eq!(r.mu_plus.pieces, vec![(3.0, 4.0, 0.5)]);
            }
            _ => panic!("wrong kind"),
        }
        let back: IntegralRep<f64> = serde_json::from_str(&serde_json::to_string(&rep).unwrap()).unwrap();
        assert_eq!(back, rep);
        let inside = r#"{"kind":"strong","c":0,"I":{"lo":0,"hi":null},"atoms":[[1,1]]}"#;
        assert!(serde_json::from_str::<IntegralRep<f64>>(inside).is_err());
    }
}
