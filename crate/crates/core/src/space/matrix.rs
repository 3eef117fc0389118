use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::{self, SeededRng};
use crate::repr;
use crate::space::cn::{from_params, to_params};
use crate::space::{SpaceDescriptor, TargetSpace};
use crate::C64;

/// A functional on `d x d` matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatrixFunctional {
    /// `T -> <Tx, y> = y^H T x`.
    RankOne {
        #[serde(with = "repr::complex_vec")]
        x: Vec<C64>,
        #[serde(with = "repr::complex_vec")]
        y: Vec<C64>,
    },
    /// `T -> tr(T G)`, with dual norm the trace norm of `G`.
    Trace {
        #[serde(with = "repr::square_matrix")]
        g: DMatrix<C64>,
    },
}

impl MatrixFunctional {
    pub fn rank_one(x: &DVector<C64>, y: &DVector<C64>) -> Self {
        MatrixFunctional::RankOne { x: x.as_slice().to_vec(), y: y.as_slice().to_vec() }
    }
}

/// Sum of singular values.
pub fn trace_norm(g: &DMatrix<C64>) -> f64 {
    g.singular_values().iter().sum()
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Top singular triple `(σ, u, v)` with `M v = σ u`.
pub fn top_singular_pair(m: &DMatrix<C64>) -> (f64, DVector<C64>, DVector<C64>) {
    let svd = m.clone().svd(true, true);
    let (k, s) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, -1.0), |(bk, bs), (i, &s)| if s > bs { (i, s) } else { (bk, bs) });
    let u = svd.u.expect("requested U").column(k).into_owned();
    let v = svd.v_t.expect("requested V^H").row(k).adjoint();
    (s, u, v)
}

fn row_major(g: &DMatrix<C64>) -> Vec<C64> {
    g.transpose().as_slice().to_vec()
}

fn unit(v: &mut [C64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
}

/// `d x d` complex matrices with the operator (spectral) norm.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSpace {
    d: usize,
}

impl MatrixSpace {
    pub fn new(d: usize) -> Self {
        MatrixSpace { d }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn check_vec(&self, v: &[C64]) -> Result<()> {
        Error::check_dim(self.d, v.len())
    }
}

impl TargetSpace for MatrixSpace {
    type Element = DMatrix<C64>;
    type Functional = MatrixFunctional;

    fn descriptor(&self) -> SpaceDescriptor {
        SpaceDescriptor::Mat { d: self.d }
    }

    fn check(&self, a: &DMatrix<C64>) -> Result<()> {
        Error::check_dim(self.d, a.nrows())?;
        Error::check_dim(self.d, a.ncols())
    }

    fn zero(&self) -> DMatrix<C64> {
        DMatrix::zeros(self.d, self.d)
    }

    fn norm(&self, a: &DMatrix<C64>) -> Result<f64> {
        self.check(a)?;
        Ok(spectral_norm(a))
    }

    fn combine(&self, coeffs: &[C64], terms: &[DMatrix<C64>]) -> DMatrix<C64> {
        let mut out = self.zero();
        for (c, t) in coeffs.iter().zip(terms) {
            out.zip_apply(t, |o, v| *o += c * v);
        }
        out
    }

    fn dual_apply(&self, phi: &MatrixFunctional, a: &DMatrix<C64>) -> Result<C64> {
        self.check(a)?;
        match phi {
            MatrixFunctional::RankOne { x, y } => {
                self.check_vec(x)?;
                self.check_vec(y)?;
                let mut acc = C64::new(0.0, 0.0);
                for r in 0..self.d {
                    let row: C64 = (0..self.d).map(|c| a[(r, c)] * x[c]).sum();
                    acc += y[r].conj() * row;
                }
                Ok(acc)
            }
            MatrixFunctional::Trace { g } => {
                self.check(g)?;
                Ok((a * g).trace())
            }
        }
    }

    fn dual_norm(&self, phi: &MatrixFunctional) -> f64 {
        match phi {
            MatrixFunctional::RankOne { x, y } => {
                let n = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                n(x) * n(y)
            }
            MatrixFunctional::Trace { g } => trace_norm(g),
        }
    }

    fn zero_functional(&self) -> MatrixFunctional {
        MatrixFunctional::Trace { g: self.zero() }
    }

    fn norming_functional(&self, a: &DMatrix<C64>) -> MatrixFunctional {
        if spectral_norm(a) == 0.0 {
            return self.zero_functional();
        }
        let (_, u, v) = top_singular_pair(a);
        MatrixFunctional::rank_one(&v, &u)
    }

    fn extreme_slate(&self) -> Vec<MatrixFunctional> {
        let e = |k: usize| {
            let mut v = vec![C64::new(0.0, 0.0); self.d];
            v[k] = C64::new(1.0, 0.0);
            v
        };
        let mut out = Vec::with_capacity(self.d * self.d);
        for j in 0..self.d {
            for k in 0..self.d {
                out.push(MatrixFunctional::RankOne { x: e(j), y: e(k) });
            }
        }
        out
    }

    fn random_functional(&self, rng: &mut SeededRng) -> MatrixFunctional {
        if random::uniform(rng, 0.0, 1.0) < 0.5 {
            let x = random::unit_vector(rng, self.d);
            let y = random::unit_vector(rng, self.d);
            MatrixFunctional::rank_one(&x, &y)
        } else {
            let g = random::gaussian_matrix(rng, self.d);
            let tn = trace_norm(&g);
            MatrixFunctional::Trace { g: g.unscale(tn) }
        }
    }

    fn functional_params(&self, phi: &MatrixFunctional) -> Vec<f64> {
        match phi {
            MatrixFunctional::RankOne { x, y } => {
                let mut p = to_params(x);
                p.extend(to_params(y));
                p
            }
            MatrixFunctional::Trace { g } => to_params(&row_major(g)),
        }
    }

    fn project_params(&self, template: &MatrixFunctional, params: &mut [f64]) {
        let phi = self.functional_from_params(template, params);
        params.copy_from_slice(&self.functional_params(&phi));
    }

    fn functional_from_params(&self, template: &MatrixFunctional, params: &[f64]) -> MatrixFunctional {
        match template {
            MatrixFunctional::RankOne { .. } => {
                let (px, py) = params.split_at(2 * self.d);
                let mut x = from_params(px);
                let mut y = from_params(py);
                unit(&mut x);
                unit(&mut y);
                MatrixFunctional::RankOne { x, y }
            }
            MatrixFunctional::Trace { .. } => {
                let g = DMatrix::from_row_iterator(self.d, self.d, from_params(params));
                let tn = trace_norm(&g);
                MatrixFunctional::Trace { g: if tn > 0.0 { g.unscale(tn) } else { g } }
            }
        }
    }

    fn random_element(&self, rng: &mut SeededRng) -> DMatrix<C64> {
        random::gaussian_matrix(rng, self.d)
    }
}
