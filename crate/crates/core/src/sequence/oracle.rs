//! Brute-force semicontinuity check through sampled convergent families of
//! states `φ_n(h) = tr(r h_n) → φ_∞(h) = tr(r′ h_∞)`.

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::matrix::GeneralMatrix;
use crate::linalg::random::{gaussian_matrix, rng_from_seed};
use crate::scalar::Scalar;
use crate::sequence::element::SeqMatrixElement;
use crate::sequence::face::FaceModel;
use crate::sequence::verdict::SemicontinuityVerdict;
use crate::tolerance::ToleranceConfig;

/// Which densities the oracle samples: a lattice with spacing `step` in every
/// parameter, plus `random` seeded densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestnetGrid {
    pub step: f64,
    pub random: usize,
    pub seed: u64,
    pub margin: f64,
}

impl Default for TestnetGrid {
    fn default() -> Self {
        Self {
            step: 0.1,
            random: 100,
            seed: 0,
            margin: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct OracleVerdict<T: Scalar> {
    pub face: FaceModel<T>,
    pub strongly_usc: bool,
    pub strongly_lsc: bool,
    pub nets: usize,
    /// Largest `lim sup φ_n(h) − φ_∞(h)` seen.
    pub worst_usc_excess: T,
    /// Largest `φ_∞(h) − lim inf φ_n(h)` seen.
    pub worst_lsc_excess: T,
}

impl<T: Scalar> OracleVerdict<T> {
    /// Agreement on every strong verdict the classifier defines.
    pub fn agrees_with(&self, v: &SemicontinuityVerdict<T>) -> bool {
        v.strongly_usc.is_none_or(|u| u == self.strongly_usc) && v.strongly_lsc.is_none_or(|l| l == self.strongly_lsc)
    }
}

const AMBIENT_INDEX: usize = 50;

/// Inner products `⟨e_i, b_j⟩` between the coordinate basis at infinity and
/// the corner basis at a large finite index, built from explicit vectors in a
/// truncation of `l²`. The index-dependent parts of the corner basis are
/// orthogonal to the fixed vectors, so this is the weak limit.
pub fn ambient_overlap<T: Scalar>(face: &FaceModel<T>) -> GeneralMatrix<T> {
    let n = AMBIENT_INDEX;
    let len = face.block_dim().max(n + 3);
    let unit = |i: usize| {
        let mut v = vec![T::zero(); len];
        v[i] = T::one();
        v
    };
    let mix = |a: T, i: usize, b: T, j: usize| {
        let mut v = vec![T::zero(); len];
        v[i] = a;
        v[j] = v[j] + b;
        v
    };
    let (corner, limit): (Vec<Vec<T>>, Vec<Vec<T>>) = match *face {
        FaceModel::Block { k, l } => ((0..k).map(unit).collect(), (0..k + l).map(unit).collect()),
        FaceModel::TiltedLine => {
            let r = T::lit(0.5).sqrt();
            (vec![mix(r, 0, r, n)], vec![unit(0)])
        }
        FaceModel::ConstantCorner => (vec![unit(0)], vec![unit(0), unit(1)]),
        FaceModel::TiltedPlane { theta } => (vec![mix(theta.cos(), 0, theta.sin(), n + 1), unit(1)], vec![unit(0), unit(1)]),
    };
    GeneralMatrix::from_fn(limit.len(), corner.len(), |i, j| {
        let dot: T = limit[i].iter().zip(&corner[j]).map(|(&a, &b)| a * b).sum();
        Complex::new(dot, T::zero())
    })
}

fn lattice(step: f64) -> Vec<f64> {
    let count = (1.0 / step).round() as usize;
    (0..=count).map(|i| (i as f64 * step).min(1.0)).collect()
}

/// Positive `d × d` matrices with trace at most one.
pub fn sample_densities<T: Scalar>(d: usize, grid: &TestnetGrid) -> Vec<GeneralMatrix<T>> {
    let mut out = Vec::new();
    let l = T::lit;
    let pts = lattice(grid.step);
    if d == 1 {
        out.extend(pts.iter().map(|&s| GeneralMatrix::from_diag(&[l(s)])));
    } else {
        let signed: Vec<f64> = pts.iter().rev().map(|x| -x).chain(pts.iter().skip(1).copied()).collect();
        for i in 0..d {
            for j in i + 1..d {
                for &s in &pts {
                    for &u in &pts {
                        if s + u > 1.0 + 1e-12 {
                            continue;
                        }
                        let root = (s * u).sqrt();
                        let phases: Vec<(f64, f64)> = if root == 0.0 {
                            vec![(0.0, 0.0)]
                        } else {
                            signed
                                .iter()
                                .flat_map(|&x| signed.iter().map(move |&y| (x, y)))
                                .filter(|(x, y)| x * x + y * y <= 1.0 + 1e-12)
                                .collect()
                        };
                        for (x, y) in phases {
                            let mut r = GeneralMatrix::zeros(d, d);
                            r[(i, i)] = Complex::new(l(s), T::zero());
                            r[(j, j)] = Complex::new(l(u), T::zero());
                            r[(i, j)] = Complex::new(l(root * x), l(root * y));
                            r[(j, i)] = r[(i, j)].conj();
                            out.push(r);
                        }
                    }
                }
            }
        }
    }
    let mut rng = rng_from_seed(grid.seed);
    for _ in 0..grid.random {
        let g = gaussian_matrix::<T>(&mut rng, d, d);
        let r = &g * &g.adjoint();
        let mass: f64 = rng.random_range(0.0..=1.0);
        out.push(r.scale(l(mass) / r.trace().re));
    }
    out
}

/// `Re tr(r a)`.
fn pairing<T: Scalar>(r: &GeneralMatrix<T>, a: &GeneralMatrix<T>) -> T {
    let n = r.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            acc = acc + (r[(i, j)] * a[(j, i)]).re;
        }
    }
    acc
}

/// Upper semicontinuity: `lim sup φ_n(h) ≤ φ_∞(h) + margin` along every
/// sampled family; lower semicontinuity mirrored.
pub fn testnet_oracle<T: Scalar>(
    h: &SeqMatrixElement<T>,
    face: &FaceModel<T>,
    grid: &TestnetGrid,
    tol: &ToleranceConfig<T>,
) -> Result<OracleVerdict<T>> {
    face.check_compressed(h, tol)?;
    let densities = sample_densities::<T>(face.corner_dim(), grid);
    let c = ambient_overlap(face);
    let limit = &(&c.adjoint() * h.at_infinity.as_matrix()) * &c;
    let corners: Vec<GeneralMatrix<T>> = h.cycle.iter().map(|e| face.finite_block(e).into_matrix()).collect();
    let margin = T::lit(grid.margin);
    let mut usc = T::neg_infinity();
    let mut lsc = T::neg_infinity();
    for r in &densities {
        let at_limit = pairing(r, &limit);
        let values = corners.iter().map(|a| pairing(r, a));
        let (lo, hi) = values.fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| (lo.min(v), hi.max(v)));
        usc = usc.max(hi - at_limit);
        lsc = lsc.max(at_limit - lo);
    }
    Ok(OracleVerdict {
        face: *face,
        strongly_usc: usc <= margin,
        strongly_lsc: lsc <= margin,
        nets: densities.len(),
        worst_usc_excess: usc,
        worst_lsc_excess: lsc,
    })
}
