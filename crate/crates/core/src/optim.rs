//! Derivative-free multistart ascent used wherever a supremum over a unit ball
//! is estimated. Values returned are always attained at a concrete point, so
//! they are certified lower bounds of the true supremum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Budgets for multistart searches.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Number of local ascents; `0` disables the search entirely.
    pub restarts: usize,
    /// Maximum polls (pattern search) or steps (gradient ascent) per restart.
    pub iterations: usize,
    pub initial_step: f64,
    /// Step multiplier after a failed poll.
    pub shrink: f64,
    pub min_step: f64,
    /// Random candidates screened before choosing restart points.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            restarts: 32,
            iterations: 200,
            initial_step: 0.5,
            shrink: 0.5,
            min_step: 1e-9,
            samples: 256,
            seed: 0x5eed,
        }
    }
}

impl SearchOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ascent {
    pub point: Vec<f64>,
    pub value: f64,
    /// Index of the start that produced the best value.
    pub restart: usize,
}

/// Compass search with projection: polls `±step` along every coordinate,
/// moves to the best improving neighbour (projected back onto the feasible
/// set), and shrinks the step when no neighbour improves.
pub fn pattern_ascent<F, P>(start: &[f64], f: &F, project: &P, opts: &SearchOptions) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
    P: Fn(&mut [f64]),
{
    let mut x = start.to_vec();
    project(&mut x);
    let mut fx = f(&x);
    let mut step = opts.initial_step;
    let mut trial = x.clone();
    for _ in 0..opts.iterations {
        if step < opts.min_step {
            break;
        }
        let mut best: Option<(Vec<f64>, f64)> = None;
        for k in 0..x.len() {
            for sign in [1.0, -1.0] {
                trial.copy_from_slice(&x);
                trial[k] += sign * step;
                project(&mut trial);
                let v = f(&trial);
                if v > fx && best.as_ref().is_none_or(|(_, bv)| v > *bv) {
                    best = Some((trial.clone(), v));
                }
            }
        }
        match best {
            Some((bx, bv)) => {
                x = bx;
                fx = bv;
            }
            None => step *= opts.shrink,
        }
    }
    (x, fx)
}

/// Runs `local` from every start in parallel and reduces by value, breaking
/// ties by the lowest start index.
pub fn best_of<L>(starts: &[Vec<f64>], local: L) -> Option<Ascent>
where
    L: Fn(&[f64]) -> (Vec<f64>, f64) + Sync,
{
    let results: Vec<(Vec<f64>, f64)> = starts.par_iter().map(|s| local(s)).collect();
    results
        .into_iter()
        .enumerate()
        .fold(None, |acc: Option<Ascent>, (i, (point, value))| match acc {
            Some(a) if a.value >= value || value.is_nan() => Some(a),
            _ => Some(Ascent { point, value, restart: i }),
        })
}

/// Indices of the `k` largest values, ordered by value (descending) then index.
pub fn top_k(values: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}
