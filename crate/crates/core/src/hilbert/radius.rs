use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{gauge_fixed, OperatorTuple};
use crate::optim::{top_k, SearchOptions};
use crate::random;
use crate::repr;
use crate::seq::{holder_extremizer, p_norm_of, ScalarSeq};
use crate::space::top_singular_pair;
use crate::C64;

const SWEEP: usize = 720;
const THETA_TOL: f64 = 1e-10;
const ARMIJO: f64 = 1e-4;

/// `w(M)` with the angle and unit vector attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleRadius {
    pub value: f64,
    pub theta: f64,
    #[serde(with = "repr::complex_dvector")]
    pub witness: DVector<C64>,
    /// `||M||`, for the sandwich `||M|| / 2 <= w(M) <= ||M||`.
    pub norm: f64,
}

fn hermitian_part(m: &DMatrix<C64>, theta: f64) -> DMatrix<C64> {
    let e = C64::from_polar(1.0, theta);
    (m * e + m.adjoint() * e.conj()) * C64::new(0.5, 0.0)
}

/// Largest eigenvalue of a Hermitian matrix and a unit eigenvector.
fn top_eigen(h: &DMatrix<C64>) -> (f64, DVector<C64>) {
    let eig = h.clone().symmetric_eigen();
    let (k, v) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bk, bv), (i, &v)| if v > bv { (i, v) } else { (bk, bv) });
    (v, eig.eigenvectors.column(k).into_owned())
}

/// `w(M) = max_θ λ_max((e^{iθ} M + e^{-iθ} M^H) / 2)`: a 720-point sweep of θ,
/// then golden-section refinement around the best angle down to 1e-10.
pub fn single_numerical_radius(m: &DMatrix<C64>) -> SingleRadius {
    let d = m.nrows();
    if d == 0 {
        return SingleRadius { value: 0.0, theta: 0.0, witness: DVector::zeros(0), norm: 0.0 };
    }
    let lam = |theta: f64| top_eigen(&hermitian_part(m, theta)).0;
    let h = TAU / SWEEP as f64;
    let sweep: Vec<f64> = (0..SWEEP).into_par_iter().map(|k| lam(k as f64 * h)).collect();
    let k = top_k(&sweep, 1)[0];

    let (mut a, mut b) = (k as f64 * h - h, k as f64 * h + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut e = a + g * (b - a);
    let (mut fc, mut fe) = (lam(c), lam(e));
    while b - a > THETA_TOL {
        if fc >= fe {
            b = e;
            e = c;
            fe = fc;
            c = b - g * (b - a);
            fc = lam(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + g * (b - a);
            fe = lam(e);
        }
    }
    let refined = 0.5 * (a + b);
    let theta = if lam(refined) >= sweep[k] { refined } else { k as f64 * h };
    let theta = theta.rem_euclid(TAU);
    let (value, x) = top_eigen(&hermitian_part(m, theta));
    // |<Mx, x>| >= Re(e^{iθ} <Mx, x>) = λ_max, and both are attained
    let value = value.max(x.dotc(&(m * &x)).norm());
    SingleRadius { value, theta, witness: gauge_fixed(&x), norm: crate::space::spectral_norm(m) }
}

/// Value and Euclidean gradient of `f(x) = (sum_i |<T_i x, x>|^p)^(1/p)` on
/// all of `C^d`, the gradient as the vector `G` with `df = Re(G^H dx)`.
///
/// For `p < 2` a vanishing term contributes the subgradient 0.
pub fn joint_objective(t: &OperatorTuple, x: &DVector<C64>) -> (f64, DVector<C64>) {
    let p = t.p.as_f64();
    let tx: Vec<DVector<C64>> = t.ops.iter().map(|m| m * x).collect();
    let u: Vec<C64> = tx.iter().map(|v| x.dotc(v)).collect();
    let value = p_norm_of(&u, t.p);
    let mut g = DVector::zeros(t.d);
    if value == 0.0 {
        return (0.0, g);
    }
    for ((m, v), &ui) in t.ops.iter().zip(&tx).zip(&u) {
        let a = ui.norm();
        if a == 0.0 {
            continue;
        }
        let w = (a / value).powf(p - 2.0) / value;
        g += v * (ui.conj() * w) + m.ad_mul(x) * (ui * w);
    }
    (value, g)
}

/// The projected gradient `G - Re(x^H G) x` at `x / ||x||`, the direction the
/// joint-radius ascent moves in.
pub fn ascent_direction(t: &OperatorTuple, x: &DVector<C64>) -> DVector<C64> {
    let x = x.unscale(x.norm());
    let (_, g) = joint_objective(t, &x);
    tangent(&x, g)
}

/// Value and gradients `(G_x, G_y)` of `(sum_i |<T_i x, y>|^p)^(1/p)`.
pub fn pair_objective(t: &OperatorTuple, x: &DVector<C64>, y: &DVector<C64>) -> (f64, DVector<C64>, DVector<C64>) {
    let p = t.p.as_f64();
    let tx: Vec<DVector<C64>> = t.ops.iter().map(|m| m * x).collect();
    let v: Vec<C64> = tx.iter().map(|w| y.dotc(w)).collect();
    let value = p_norm_of(&v, t.p);
    let mut gx = DVector::zeros(t.d);
    let mut gy = DVector::zeros(t.d);
    if value == 0.0 {
        return (0.0, gx, gy);
    }
    for ((m, mx), &vi) in t.ops.iter().zip(&tx).zip(&v) {
        let a = vi.norm();
        if a == 0.0 {
            continue;
        }
        let w = (a / value).powf(p - 2.0) / value;
        gx += m.ad_mul(y) * (vi * w);
        gy += mx * (vi.conj() * w);
    }
    (value, gx, gy)
}

/// Projected gradients of [`pair_objective`] at normalized `(x, y)`.
pub fn pair_ascent_direction(t: &OperatorTuple, x: &DVector<C64>, y: &DVector<C64>) -> (DVector<C64>, DVector<C64>) {
    let x = x.unscale(x.norm());
    let y = y.unscale(y.norm());
    let (_, gx, gy) = pair_objective(t, &x, &y);
    (tangent(&x, gx), tangent(&y, gy))
}

fn tangent(x: &DVector<C64>, g: DVector<C64>) -> DVector<C64> {
    let r = x.dotc(&g).re;
    g - x * C64::new(r, 0.0)
}

fn normalized(v: DVector<C64>) -> DVector<C64> {
    let n = v.norm();
    v.unscale(n)
}

/// Projected gradient ascent with Armijo backtracking on a product of unit
/// spheres. `fg` returns the value and one Euclidean gradient per block.
fn sphere_ascent<F>(start: Vec<DVector<C64>>, fg: &F, iterations: usize) -> (Vec<DVector<C64>>, f64)
where
    F: Fn(&[DVector<C64>]) -> (f64, Vec<DVector<C64>>),
{
    let mut x = start;
    let (mut f, mut g) = fg(&x);
    let mut step = 1.0;
    for _ in 0..iterations {
        let dirs: Vec<DVector<C64>> = x.iter().zip(g).map(|(xb, gb)| tangent(xb, gb)).collect();
        let g2: f64 = dirs.iter().map(|d| d.norm_squared()).sum();
        if g2.sqrt() <= 1e-14 * f.max(1.0) {
            return (x, f);
        }
        let mut accepted = None;
        while step > 1e-16 {
            let cand: Vec<DVector<C64>> = x
                .iter()
                .zip(&dirs)
                .map(|(xb, db)| normalized(xb + db * C64::new(step, 0.0)))
                .collect();
            let (fc, gc) = fg(&cand);
            if fc >= f + ARMIJO * step * g2 {
                accepted = Some((cand, fc, gc));
                break;
            }
            step *= 0.5;
        }
        match accepted {
            Some((cand, fc, gc)) => {
                let gain = fc - f;
                x = cand;
                f = fc;
                g = gc;
                step = (step * 2.0).min(1e3);
                if gain <= 1e-16 * f {
                    break;
                }
            }
            None => break,
        }
    }
    (x, f)
}

/// Screens `starts`, ascends from the best `restarts` in parallel, and keeps
/// the best result (lowest start index on ties).
fn multistart<F>(starts: Vec<Vec<DVector<C64>>>, fg: &F, opts: &SearchOptions) -> (Vec<DVector<C64>>, f64)
where
    F: Fn(&[DVector<C64>]) -> (f64, Vec<DVector<C64>>) + Sync,
{
    let values: Vec<f64> = starts.iter().map(|s| fg(s).0).collect();
    if opts.restarts == 0 {
        return (starts[0].clone(), values[0]);
    }
    let chosen = top_k(&values, opts.restarts);
    let results: Vec<(Vec<DVector<C64>>, f64)> = chosen
        .par_iter()
        .map(|&i| sphere_ascent(starts[i].clone(), fg, opts.iterations))
        .collect();
    results
        .into_iter()
        .fold(None, |acc: Option<(Vec<DVector<C64>>, f64)>, (x, v)| match acc {
            Some(a) if a.1 >= v => Some(a),
            _ => Some((x, v)),
        })
        .expect("at least one restart")
}

fn basis(d: usize, k: usize) -> DVector<C64> {
    let mut e = DVector::zeros(d);
    e[k] = C64::new(1.0, 0.0);
    e
}

/// Eigenvectors of the real and imaginary Hermitian parts of each operator.
fn eigen_starts(t: &OperatorTuple) -> Vec<DVector<C64>> {
    let mut out = Vec::new();
    for m in &t.ops {
        for theta in [0.0, TAU / 4.0] {
            let eig = hermitian_part(m, theta).symmetric_eigen();
            out.extend(eig.eigenvectors.column_iter().map(|c| c.into_owned()));
        }
    }
    out
}

/// `ω(T)` and a unit vector attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointRadius {
    pub value: f64,
    #[serde(with = "repr::complex_dvector")]
    pub witness: DVector<C64>,
}

/// `ω(T) = sup_{||x|| = 1} ||<T x, x>||_p` by multistart projected gradient
/// ascent, started from Hermitian-part eigenvectors and random unit vectors.
/// With `restarts == 0` the first basis vector is evaluated and returned.
pub fn joint_numerical_radius(t: &OperatorTuple, opts: &SearchOptions) -> JointRadius {
    let mut starts = vec![vec![basis(t.d, 0)]];
    starts.extend(eigen_starts(t).into_iter().map(|x| vec![x]));
    let mut rng = random::rng(opts.seed ^ 0x0a3e);
    starts.extend((0..opts.samples).map(|_| vec![random::unit_vector(&mut rng, t.d)]));
    let fg = |x: &[DVector<C64>]| {
        let (v, g) = joint_objective(t, &x[0]);
        (v, vec![g])
    };
    let (x, value) = multistart(starts, &fg, opts);
    JointRadius { value, witness: gauge_fixed(&x[0]) }
}

/// `||T||` with unit vectors `x, y` attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleNorm {
    pub value: f64,
    #[serde(with = "repr::complex_dvector")]
    pub x: DVector<C64>,
    #[serde(with = "repr::complex_dvector")]
    pub y: DVector<C64>,
}

/// `||T|| = sup_{||x|| = ||y|| = 1} ||<T x, y>||_p` by ascent on pairs.
///
/// Starts include top singular pairs of each `T_i` and of `Tβ` for basis and
/// random unit `β` in `l^q`; by Hölder such a pair already attains `||Tβ||`.
pub fn operator_tuple_norm(t: &OperatorTuple, opts: &SearchOptions) -> TupleNorm {
    let q = t.p.conjugate();
    let e0 = basis(t.d, 0);
    let mut starts = vec![vec![e0.clone(), e0]];
    let mut betas: Vec<Vec<C64>> = (0..t.len())
        .map(|i| {
            let mut b = vec![C64::new(0.0, 0.0); t.len()];
            b[i] = C64::new(1.0, 0.0);
            b
        })
        .collect();
    let mut rng = random::rng(opts.seed ^ 0x7b1e);
    for _ in 0..opts.samples {
        let b = random::gaussian_vec(&mut rng, t.len());
        let n = p_norm_of(&b, q);
        betas.push(b.into_iter().map(|z| z / n).collect());
    }
    for b in &betas {
        let (s, u, v) = top_singular_pair(&t.combine(b));
        if s > 0.0 {
            starts.push(vec![v, u]);
        }
    }
    for _ in 0..opts.samples {
        starts.push(vec![random::unit_vector(&mut rng, t.d), random::unit_vector(&mut rng, t.d)]);
    }
    let fg = |xy: &[DVector<C64>]| {
        let (v, gx, gy) = pair_objective(t, &xy[0], &xy[1]);
        (v, vec![gx, gy])
    };
    let (xy, value) = multistart(starts, &fg, opts);
    TupleNorm { value, x: gauge_fixed(&xy[0]), y: gauge_fixed(&xy[1]) }
}

/// `ω(T)` next to `sup_{||β||_q <= 1} w(Tβ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub omega: f64,
    /// `w(Tβ*)` evaluated by the angle sweep at the best `β*` found.
    pub sup_w_beta: f64,
    pub beta: ScalarSeq,
    /// `|ω - sup w(Tβ)| / ω`.
    pub gap: f64,
}

/// Maximizes `w(Tβ)` over unit `β ∈ l^q` by alternating
/// `β <- Hölder extremizer of <T x, x>` and `x <- top eigenvector of
/// Re(Tβ)`, then evaluates `w(Tβ)` for the best `β` with the angle sweep.
pub fn radius_duality_check(t: &OperatorTuple, opts: &SearchOptions) -> DualityReport {
    let omega = joint_numerical_radius(t, opts).value;
    duality_against(t, omega, opts)
}

pub(crate) fn duality_against(t: &OperatorTuple, omega: f64, opts: &SearchOptions) -> DualityReport {
    let beta = best_beta(t, opts);
    let sup_w_beta = single_numerical_radius(&t.combine(beta.entries())).value;
    let gap = if omega > 0.0 { (omega - sup_w_beta).abs() / omega } else { sup_w_beta };
    DualityReport { omega, sup_w_beta, beta, gap }
}

fn best_beta(t: &OperatorTuple, opts: &SearchOptions) -> ScalarSeq {
    let mut starts = eigen_starts(t);
    starts.push(basis(t.d, 0));
    let mut rng = random::rng(opts.seed ^ 0xd0a1);
    starts.extend((0..opts.samples).map(|_| random::unit_vector(&mut rng, t.d)));
    let values: Vec<f64> = starts.iter().map(|x| joint_objective(t, x).0).collect();
    let chosen = top_k(&values, opts.restarts.max(1));
    let runs: Vec<(ScalarSeq, f64)> = chosen.par_iter().map(|&i| alternate(t, starts[i].clone(), opts.iterations)).collect();
    runs.into_iter()
        .fold(None, |acc: Option<(ScalarSeq, f64)>, (b, v)| match acc {
            Some(a) if a.1 >= v => Some(a),
            _ => Some((b, v)),
        })
        .map(|(b, _)| b)
        .unwrap_or_else(|| ScalarSeq::zeros(t.len()))
}

fn alternate(t: &OperatorTuple, mut x: DVector<C64>, rounds: usize) -> (ScalarSeq, f64) {
    let mut best = (ScalarSeq::zeros(t.len()), 0.0);
    for _ in 0..rounds.max(1) {
        let u = t.pair_raw(&x, &x).expect("dimensions match");
        let Ok(beta) = holder_extremizer(&u, t.p) else { break };
        let (lam, next) = top_eigen(&hermitian_part(&t.combine(beta.entries()), 0.0));
        let improved = lam > best.1 * (1.0 + 1e-15);
        if lam > best.1 {
            best = (beta, lam);
        }
        if !improved {
            break;
        }
        x = next;
    }
    best
}
