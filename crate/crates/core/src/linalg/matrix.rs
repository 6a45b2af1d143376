use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, Result};
use crate::scalar::Scalar;

/// Dense complex matrix stored row-major.
///
/// Carries the non-Hermitian intermediates of the constructions (contractions,
/// row factors, completion blocks).
#[derive(Clone, PartialEq)]
pub struct GeneralMatrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> GeneralMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major complex entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LabError::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Real matrix from nested rows.
    pub fn from_real_rows(rows: &[Vec<T>]) -> Result<Self> {
        Self::from_parts(rows, None)
    }

    /// Matrix from separate real and imaginary row-major parts.
    pub fn from_parts(re: &[Vec<T>], im: Option<&[Vec<T>]>) -> Result<Self> {
        let rows = re.len();
        let cols = re.first().map_or(0, Vec::len);
        if re.iter().any(|r| r.len() != cols) {
            return Err(LabError::Format("ragged real part".into()));
        }
        if let Some(im) = im {
            if im.len() != rows || im.iter().any(|r| r.len() != cols) {
                return Err(LabError::DimensionMismatch {
                    expected: format!("{rows}x{cols} imaginary part"),
                    found: format!("{} rows", im.len()),
                });
            }
        }
        Ok(Self::from_fn(rows, cols, |i, j| {
            Complex::new(re[i][j], im.map_or(T::zero(), |im| im[i][j]))
        }))
    }

    pub fn from_diag(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn real_parts(&self) -> Vec<Vec<T>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].re).collect())
            .collect()
    }

    pub fn imag_parts(&self) -> Vec<Vec<T>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].im).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// `self + s * 1`; panics on non-square input.
    pub fn add_identity(&self, s: T) -> Self {
        assert!(self.is_square(), "add_identity on non-square matrix");
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)].re = m[(i, i)].re + s;
        }
        m
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).fold(Complex::zero(), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> T {
        crate::linalg::svd::singular_values(self)
            .first()
            .copied()
            .unwrap_or_else(T::zero)
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Complex<T>>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows.start + i, cols.start + j)])
    }

    /// Checked product.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(LabError::DimensionMismatch {
                expected: format!("{} rows on the right factor", self.cols),
                found: format!("{}", rhs.rows),
            });
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![Complex::zero(); n * m];
        for i in 0..n {
            for l in 0..k {
                let a = self.data[i * k + l];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[l * m..(l + 1) * m];
                let dst = &mut out[i * m..(i + 1) * m];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        Self { rows: n, cols: m, data: out }
    }

    pub fn ensure_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(LabError::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    ///
    /// Kept separate from the spectral machinery so resolvents can be cross-checked
    /// against functional calculus.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(LabError::DimensionMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", self.rows, self.cols),
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(T::min_positive_value());
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].norm().partial_cmp(&a[(y, col)].norm()).unwrap())
                .unwrap();
            if a[(pivot, col)].norm() <= T::epsilon() * scale {
                return Err(LabError::PreconditionViolated("matrix is singular".into()));
            }
            if pivot != col {
                for j in 0..n {
                    let (x, y) = (a[(pivot, j)], a[(col, j)]);
                    a[(pivot, j)] = y;
                    a[(col, j)] = x;
                    let (x, y) = (inv[(pivot, j)], inv[(col, j)]);
                    inv[(pivot, j)] = y;
                    inv[(col, j)] = x;
                }
            }
            let d = a[(col, col)].inv();
            for j in 0..n {
                a[(col, j)] = a[(col, j)] * d;
                inv[(col, j)] = inv[(col, j)] * d;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let factor = a[(i, col)];
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                    a[(i, j)] = a[(i, j)] - factor * ac;
                    inv[(i, j)] = inv[(i, j)] - factor * ic;
                }
            }
        }
        Ok(inv)
    }

    pub fn determinant(&self) -> Complex<T> {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Complex::<T>::one();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].norm().partial_cmp(&a[(y, col)].norm()).unwrap())
                .unwrap();
            if a[(pivot, col)].is_zero() {
                return Complex::zero();
            }
            if pivot != col {
                for j in 0..n {
                    let (x, y) = (a[(pivot, j)], a[(col, j)]);
                    a[(pivot, j)] = y;
                    a[(col, j)] = x;
                }
                det = -det;
            }
            let d = a[(col, col)];
            det = det * d;
            for i in col + 1..n {
                let factor = a[(i, col)] / d;
                for j in col..n {
                    let v = a[(col, j)];
                    a[(i, j)] = a[(i, j)] - factor * v;
                }
            }
        }
        det
    }
}

impl<T: Scalar> Index<(usize, usize)> for GeneralMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for GeneralMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a, T: Scalar> Mul<&'a GeneralMatrix<T>> for &'a GeneralMatrix<T> {
    type Output = GeneralMatrix<T>;
    fn mul(self, rhs: &'a GeneralMatrix<T>) -> GeneralMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        self.mul_unchecked(rhs)
    }
}

impl<'a, T: Scalar> Add<&'a GeneralMatrix<T>> for &'a GeneralMatrix<T> {
    type Output = GeneralMatrix<T>;
    fn add(self, rhs: &'a GeneralMatrix<T>) -> GeneralMatrix<T> {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        GeneralMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<'a, T: Scalar> Sub<&'a GeneralMatrix<T>> for &'a GeneralMatrix<T> {
    type Output = GeneralMatrix<T>;
    fn sub(self, rhs: &'a GeneralMatrix<T>) -> GeneralMatrix<T> {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        GeneralMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Scalar> Neg for &GeneralMatrix<T> {
    type Output = GeneralMatrix<T>;
    fn neg(self) -> GeneralMatrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Scalar> fmt::Debug for GeneralMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GeneralMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.4e}{:+.4e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct GeneralJson {
    rows: usize,
    cols: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl<T: Scalar> Serialize for GeneralMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let conv = |rows: Vec<Vec<T>>| -> Vec<Vec<f64>> {
            rows.into_iter().map(|r| r.into_iter().map(T::as_f64).collect()).collect()
        };
        GeneralJson {
            rows: self.rows,
            cols: self.cols,
            re: conv(self.real_parts()),
            im: conv(self.imag_parts()),
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for GeneralMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = GeneralJson::deserialize(d)?;
        let conv = |rows: &[Vec<f64>]| -> Vec<Vec<T>> {
            rows.iter().map(|r| r.iter().map(|&x| T::lit(x)).collect()).collect()
        };
        let m = GeneralMatrix::from_parts(&conv(&raw.re), Some(&conv(&raw.im))).map_err(D::Error::custom)?;
        if m.shape() != (raw.rows, raw.cols) && !(raw.rows == 0 || raw.cols == 0) {
            return Err(D::Error::custom(format!(
                "declared shape {}x{} does not match payload {}x{}",
                raw.rows,
                raw.cols,
                m.rows,
                m.cols
            )));
        }
        Ok(m)
    }
}
