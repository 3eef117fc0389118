//! The Banach space `A` that operator sequences take values in, together with
//! its dual unit ball `A*_1`.
//!
//! Three instances are provided: `C^n` with an `l^r` norm, continuous
//! functions on a finite grid with the sup norm, and `d x d` complex matrices
//! with the operator norm. Suprema over `A*_1` are estimated by sampling plus
//! multistart pattern search on each instance's functional representation.

mod cn;
mod grid;
mod matrix;

pub use cn::ComplexLr;
pub use grid::{AtomicMeasure, GridFunctions, GridPoint};
pub use matrix::{spectral_norm, top_singular_pair, trace_norm, MatrixFunctional, MatrixSpace};

use std::fmt::Debug;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::optim::{pattern_ascent, top_k, SearchOptions};
use crate::random::{self, SeededRng};
use crate::seq::Exponent;
use crate::C64;

/// JSON descriptor of a target space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "lowercase")]
pub enum SpaceDescriptor {
    Cn { n: usize, r: Exponent },
    Cgrid { points: Vec<GridPoint> },
    Mat { d: usize },
}

pub trait TargetSpace: Sync {
    type Element: Clone + Debug + Send + Sync;
    type Functional: Clone + Debug + Send + Sync + Serialize;

    fn descriptor(&self) -> SpaceDescriptor;

    /// Validates the shape of an element.
    fn check(&self, a: &Self::Element) -> Result<()>;

    fn zero(&self) -> Self::Element;

    fn norm(&self, a: &Self::Element) -> Result<f64>;

    /// `sum_i c_i a_i` over the common length of `coeffs` and `terms`.
    /// Terms are assumed to have been validated with [`TargetSpace::check`].
    fn combine(&self, coeffs: &[C64], terms: &[Self::Element]) -> Self::Element;

    fn sub(&self, a: &Self::Element, b: &Self::Element) -> Self::Element {
        let one = C64::new(1.0, 0.0);
        self.combine(&[one, -one], &[a.clone(), b.clone()])
    }

    fn dual_apply(&self, phi: &Self::Functional, a: &Self::Element) -> Result<C64>;

    /// Norm of the functional in `A*`; every functional this space produces
    /// has dual norm at most one.
    fn dual_norm(&self, phi: &Self::Functional) -> f64;

    fn zero_functional(&self) -> Self::Functional;

    /// A functional in `A*_1` with `phi(a) = ||a||`.
    fn norming_functional(&self, a: &Self::Element) -> Self::Functional;

    /// Extreme-point candidates always included in dual-ball samples.
    fn extreme_slate(&self) -> Vec<Self::Functional>;

    fn random_functional(&self, rng: &mut SeededRng) -> Self::Functional;

    /// Real coordinates of the functional's representation.
    fn functional_params(&self, phi: &Self::Functional) -> Vec<f64>;

    /// Projects coordinates back onto the dual unit sphere of the
    /// representation family of `template`.
    fn project_params(&self, template: &Self::Functional, params: &mut [f64]);

    fn functional_from_params(&self, template: &Self::Functional, params: &[f64]) -> Self::Functional;

    fn random_element(&self, rng: &mut SeededRng) -> Self::Element;
}

/// `count` functionals of `A*_1`: the extreme slate first (as much of it as
/// fits), then seeded random ones.
pub fn sample_dual_ball<S: TargetSpace>(space: &S, count: usize, seed: u64) -> Vec<S::Functional> {
    let mut out: Vec<S::Functional> = space.extreme_slate().into_iter().take(count).collect();
    let mut rng = random::rng(seed);
    while out.len() < count {
        out.push(space.random_functional(&mut rng));
    }
    out
}

/// Multistart maximization of `objective` over `A*_1`.
///
/// Screens `opts.samples` dual-ball samples plus any `seeds`, ascends from the
/// `opts.restarts` best, and returns the best functional found with its value.
/// With `restarts == 0` nothing is searched and the zero functional is
/// returned.
pub fn dual_ball_maximize<S, F>(
    space: &S,
    objective: F,
    seeds: &[S::Functional],
    opts: &SearchOptions,
) -> (S::Functional, f64)
where
    S: TargetSpace,
    F: Fn(&S::Functional) -> f64 + Sync,
{
    if opts.restarts == 0 {
        let z = space.zero_functional();
        let v = objective(&z);
        return (z, v);
    }
    let mut candidates = sample_dual_ball(space, opts.samples.max(1), opts.seed);
    candidates.extend(seeds.iter().cloned());
    let values: Vec<f64> = candidates.iter().map(&objective).collect();
    let chosen = top_k(&values, opts.restarts);

    // Each restart keeps its candidate as the template of its representation
    // family (rank-one vs trace-class, etc.).
    let ascents: Vec<(S::Functional, f64)> = chosen
        .par_iter()
        .map(|&i| {
            let template = &candidates[i];
            let f = |x: &[f64]| objective(&space.functional_from_params(template, x));
            let project = |x: &mut [f64]| space.project_params(template, x);
            let (x, v) = pattern_ascent(&space.functional_params(template), &f, &project, opts);
            // never report below the screened value of the start
            if v >= values[i] {
                (space.functional_from_params(template, &x), v)
            } else {
                (template.clone(), values[i])
            }
        })
        .collect();
    ascents
        .into_iter()
        .fold(None, |acc: Option<(S::Functional, f64)>, (phi, v)| match acc {
            Some(a) if a.1 >= v || v.is_nan() => Some(a),
            _ => Some((phi, v)),
        })
        .expect("restarts > 0 yields at least one ascent")
}

#[cfg(test)]
mod tests;
