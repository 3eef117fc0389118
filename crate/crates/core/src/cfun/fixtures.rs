//! Shipped function sequences on uniform grids.

use std::f64::consts::PI;

use super::{Grid, GridFunctionSeq};
use crate::seq::Exponent;
use crate::C64;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `f_i ≡ 2^-i`: each component constant, so `ω_F ≡ 0`.
pub fn constant(grid: Grid, n: usize, p: Exponent) -> GridFunctionSeq {
    GridFunctionSeq::from_fn(grid, n, p, |i, _| re(0.5f64.powi(i as i32)))
}

/// `f_i(s) = s^i` on the first coordinate.
pub fn powers(grid: Grid, n: usize, p: Exponent) -> GridFunctionSeq {
    GridFunctionSeq::from_fn(grid, n, p, |i, s| re(s[0].powi(i as i32)))
}

/// `f_i = 2^-i g` with `g(s) = s_1`, so `||g||_Ω = 1`.
pub fn geometric(grid: Grid, n: usize, p: Exponent) -> GridFunctionSeq {
    GridFunctionSeq::from_fn(grid, n, p, |i, s| re(0.5f64.powi(i as i32) * s[0]))
}

/// `f_i(s) = s_1 / sqrt(i)`.
pub fn harmonic_ramp(grid: Grid, n: usize, p: Exponent) -> GridFunctionSeq {
    GridFunctionSeq::from_fn(grid, n, p, |i, s| re(s[0] / (i as f64).sqrt()))
}

/// `f_1` jumps from 0 to 1 at `s_1 = 1/2`; `f_i = 2^-i s_1` for `i >= 2`.
pub fn jump(grid: Grid, n: usize, p: Exponent) -> GridFunctionSeq {
    GridFunctionSeq::from_fn(grid, n, p, |i, s| {
        if i == 1 {
            re(if s[0] >= 0.5 { 1.0 } else { 0.0 })
        } else {
            re(0.5f64.powi(i as i32) * s[0])
        }
    })
}

/// `n` unit tents with disjoint supports on the path `0, 1/2n, ..., 1`;
/// tent `i` peaks at the point `(2i - 1) / 2n`.
pub fn bump_train(n: usize, p: Exponent) -> GridFunctionSeq {
    let n = n.max(1);
    let grid = Grid::uniform_1d(2 * n);
    let scale = (2 * n) as f64;
    GridFunctionSeq::from_fn(grid, n, p, |i, s| {
        let j = (s[0] * scale).round() as usize;
        re(if j == 2 * i - 1 { 1.0 } else { 0.0 })
    })
}

/// `f_i(s) = sum_{k<=i} sin(kπ s_1) / k^2`, partial sums of a uniformly
/// convergent series.
pub fn partial_sums(grid: Grid, n: usize, p: Exponent) -> GridFunctionSeq {
    GridFunctionSeq::from_fn(grid, n, p, |i, s| {
        re((1..=i).map(|k| (k as f64 * PI * s[0]).sin() / (k * k) as f64).sum())
    })
}

/// The fixture set used by the verification suites and the CLI examples.
pub fn shipped() -> Vec<(&'static str, GridFunctionSeq)> {
    let two = Exponent::TWO;
    let three: Exponent = Exponent::new(3.0).expect("3 is a valid exponent");
    vec![
        ("constant", constant(Grid::uniform_1d(20), 8, two)),
        ("powers", powers(Grid::uniform_1d(20), 8, two)),
        ("geometric", geometric(Grid::uniform_1d(40), 20, two)),
        ("geometric-2d", geometric(Grid::uniform_2d(12), 20, three)),
        ("harmonic-ramp", harmonic_ramp(Grid::uniform_1d(20), 50, two)),
        ("jump", jump(Grid::uniform_1d(40), 12, two)),
        ("bump-train", bump_train(16, two)),
        ("partial-sums-inf", partial_sums(Grid::uniform_1d(40), 30, Exponent::INFINITY)),
        ("bump-train-inf", bump_train(16, Exponent::INFINITY)),
    ]
}
