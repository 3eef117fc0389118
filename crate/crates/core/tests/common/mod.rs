//! Brute-force oracles for `d = 2`, written against plain 2x2 arrays so they
//! share no linear algebra with the library.
//!
//! Unit vectors are parametrized as `x(a, φ) = (cos a, e^{iφ} sin a)` with
//! `a ∈ [0, π/2]`, `φ ∈ [0, 2π)`; a global phase never changes the moduli
//! being maximized. Each oracle scans a dense grid (at least 10^6 points) and
//! then re-grids around the best point with shrinking spacing.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, TAU};

use dualshadow::C64;
use nalgebra::DMatrix;
use rayon::prelude::*;

pub type M2 = [[C64; 2]; 2];

pub fn to_m2(m: &DMatrix<C64>) -> M2 {
    assert_eq!((m.nrows(), m.ncols()), (2, 2));
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

fn unit(a: f64, phi: f64) -> [C64; 2] {
    [C64::new(a.cos(), 0.0), C64::from_polar(a.sin(), phi)]
}

/// `y^H M x`.
fn form(m: &M2, x: &[C64; 2], y: &[C64; 2]) -> C64 {
    let mx = [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]];
    y[0].conj() * mx[0] + y[1].conj() * mx[1]
}

fn lp(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    values.map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Maximizes `f` over a box by a dense grid followed by local re-gridding.
/// `dims[k] = (lo, hi, points)`. Refinement may step outside the box, which
/// is harmless since every coordinate is an angle.
fn grid_max<F>(f: &F, dims: &[(f64, f64, usize)], refine_points: usize, rounds: usize) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let k = dims.len();
    let total: usize = dims.iter().map(|d| d.2).product();
    let coords = |mut idx: usize, dims: &[(f64, f64, usize)]| {
        let mut out = vec![0.0; k];
        for (j, &(lo, hi, n)) in dims.iter().enumerate() {
            let i = idx % n;
            idx /= n;
            out[j] = if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
        }
        out
    };
    let argmax = |n: usize, dims: &[(f64, f64, usize)]| {
        (0..n)
            .into_par_iter()
            .map(|i| (f(&coords(i, dims)), i))
            .reduce(|| (f64::NEG_INFINITY, usize::MAX), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
    };
    let (mut best, i) = argmax(total, dims);
    let mut best_x = coords(i, dims);
    let mut spacing: Vec<f64> = dims.iter().map(|&(lo, hi, n)| (hi - lo) / (n.max(2) - 1) as f64).collect();
    for _ in 0..rounds {
        let local: Vec<(f64, f64, usize)> = best_x
            .iter()
            .zip(&spacing)
            .map(|(&c, &h)| (c - h, c + h, refine_points))
            .collect();
        let n: usize = local.iter().map(|d| d.2).product();
        let (v, i) = argmax(n, &local);
        if v > best {
            best = v;
            best_x = coords(i, &local);
        }
        spacing.iter_mut().for_each(|h| *h *= 2.0 / (refine_points - 1) as f64);
    }
    best
}

/// `w(M) = max |x^H M x|` over a 1001 x 1000 grid, then refined.
pub fn numerical_radius(m: &M2) -> f64 {
    let f = |v: &[f64]| {
        let x = unit(v[0], v[1]);
        form(m, &x, &x).norm()
    };
    grid_max(&f, &[(0.0, FRAC_PI_2, 1001), (0.0, TAU, 1000)], 21, 8)
}

/// `ω(T) = max (sum_i |x^H T_i x|^p)^(1/p)`.
pub fn joint_radius(ops: &[M2], p: f64) -> f64 {
    let f = |v: &[f64]| {
        let x = unit(v[0], v[1]);
        lp(ops.iter().map(|m| form(m, &x, &x).norm()), p)
    };
    grid_max(&f, &[(0.0, FRAC_PI_2, 1001), (0.0, TAU, 1000)], 21, 8)
}

/// `||T|| = max (sum_i |y^H T_i x|^p)^(1/p)` over a 4-angle grid of
/// 24 x 48 x 24 x 48 points (1.3 million), then refined.
pub fn tuple_norm(ops: &[M2], p: f64) -> f64 {
    let f = |v: &[f64]| {
        let x = unit(v[0], v[1]);
        let y = unit(v[2], v[3]);
        lp(ops.iter().map(|m| form(m, &x, &y).norm()), p)
    };
    let dims = [(0.0, FRAC_PI_2, 24), (0.0, TAU, 48), (0.0, FRAC_PI_2, 24), (0.0, TAU, 48)];
    grid_max(&f, &dims, 7, 30)
}

/// Wall-clock guard shared by the timed criteria.
pub struct Stopwatch(std::time::Instant);

impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch(std::time::Instant::now())
    }

    pub fn secs(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}
