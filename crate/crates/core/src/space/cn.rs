use crate::error::{Error, Result};
use crate::random::{self, SeededRng};
use crate::seq::{holder_extremizer, holder_pair, p_norm_of, Exponent, ScalarSeq};
use crate::space::{SpaceDescriptor, TargetSpace};
use crate::C64;

/// `C^n` with the `l^r` norm. Functionals are vectors `y` acting by
/// `a -> sum y_i a_i`, with dual norm `||y||_{r'}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexLr {
    n: usize,
    r: Exponent,
}

impl ComplexLr {
    pub fn new(n: usize, r: Exponent) -> Self {
        ComplexLr { n, r }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn exponent(&self) -> Exponent {
        self.r
    }

    fn dual_exponent(&self) -> Exponent {
        self.r.conjugate()
    }

    fn normalize(&self, y: &mut [C64]) {
        let n = p_norm_of(y, self.dual_exponent());
        if n > 0.0 {
            y.iter_mut().for_each(|z| *z /= n);
        }
    }
}

pub(crate) fn to_params(v: &[C64]) -> Vec<f64> {
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}

pub(crate) fn from_params(x: &[f64]) -> Vec<C64> {
    x.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect()
}

impl TargetSpace for ComplexLr {
    type Element = Vec<C64>;
    type Functional = Vec<C64>;

    fn descriptor(&self) -> SpaceDescriptor {
        SpaceDescriptor::Cn { n: self.n, r: self.r }
    }

    fn check(&self, a: &Vec<C64>) -> Result<()> {
        Error::check_dim(self.n, a.len())
    }

    fn zero(&self) -> Vec<C64> {
        vec![C64::new(0.0, 0.0); self.n]
    }

    fn norm(&self, a: &Vec<C64>) -> Result<f64> {
        self.check(a)?;
        Ok(p_norm_of(a, self.r))
    }

    fn combine(&self, coeffs: &[C64], terms: &[Vec<C64>]) -> Vec<C64> {
        let mut out = self.zero();
        for (c, t) in coeffs.iter().zip(terms) {
            for (o, v) in out.iter_mut().zip(t) {
                *o += c * v;
            }
        }
        out
    }

    fn dual_apply(&self, phi: &Vec<C64>, a: &Vec<C64>) -> Result<C64> {
        self.check(a)?;
        Error::check_dim(self.n, phi.len())?;
        Ok(holder_pair(phi, a))
    }

    fn dual_norm(&self, phi: &Vec<C64>) -> f64 {
        p_norm_of(phi, self.dual_exponent())
    }

    fn zero_functional(&self) -> Vec<C64> {
        self.zero()
    }

    fn norming_functional(&self, a: &Vec<C64>) -> Vec<C64> {
        match holder_extremizer(&ScalarSeq::new(a.clone()), self.r) {
            Ok(y) => y.into_entries(),
            Err(_) => self.zero(),
        }
    }

    fn extreme_slate(&self) -> Vec<Vec<C64>> {
        (0..self.n)
            .map(|k| {
                let mut e = self.zero();
                e[k] = C64::new(1.0, 0.0);
                e
            })
            .collect()
    }

    fn random_functional(&self, rng: &mut SeededRng) -> Vec<C64> {
        let mut y = if self.dual_exponent().is_infinite() {
            // extreme points of the l^inf ball are phase vectors
            (0..self.n).map(|_| random::unimodular(rng)).collect()
        } else {
            random::gaussian_vec(rng, self.n)
        };
        self.normalize(&mut y);
        y
    }

    // On the l^inf ball a convex objective peaks at phase vectors, and searching
    // Cartesian coordinates stalls on the flat faces, so only phases are varied.
    fn functional_params(&self, phi: &Vec<C64>) -> Vec<f64> {
        if self.dual_exponent().is_infinite() {
            phi.iter().map(|z| z.arg()).collect()
        } else {
            to_params(phi)
        }
    }

    fn project_params(&self, _template: &Vec<C64>, params: &mut [f64]) {
        if self.dual_exponent().is_infinite() {
            return;
        }
        let mut y = from_params(params);
        self.normalize(&mut y);
        params.copy_from_slice(&to_params(&y));
    }

    fn functional_from_params(&self, _template: &Vec<C64>, params: &[f64]) -> Vec<C64> {
        if self.dual_exponent().is_infinite() {
            return params.iter().map(|&t| C64::from_polar(1.0, t)).collect();
        }
        let mut y = from_params(params);
        self.normalize(&mut y);
        y
    }

    fn random_element(&self, rng: &mut SeededRng) -> Vec<C64> {
        random::gaussian_vec(rng, self.n)
    }
}
