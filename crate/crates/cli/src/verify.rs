//! The seeded verification suite behind `dualshadow verify`: one row per
//! property, each with its instance count, worst measured error, and tolerance.

use nalgebra::DVector;
use rand::Rng;
use serde::Serialize;

use dualshadow::cfun::{self, fixtures};
use dualshadow::compactness;
use dualshadow::diagonal::{self, AnySeq, OperatorSeq};
use dualshadow::hilbert::{self, OperatorTuple, RadiusReport};
use dualshadow::optim::SearchOptions;
use dualshadow::random::{self, SeededRng};
use dualshadow::seq::{holder_extremizer, holder_pair, p_norm_of};
use dualshadow::space::{ComplexLr, GridFunctions, GridPoint, MatrixSpace, TargetSpace};
use dualshadow::{Exponent, ScalarSeq, C64};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub property: &'static str,
    pub instances: usize,
    /// Largest violation measure; the check passes when it is `<= tolerance`.
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(property: &'static str, instances: usize, worst: f64, tolerance: f64) -> Self {
        // NaN counts as a failure
        Check { property, instances, worst, tolerance, passed: worst <= tolerance }
    }
}

fn exponent(s: &str) -> Exponent {
    s.parse().expect("literal exponents parse")
}

fn grid_exponents() -> Vec<Exponent> {
    ["1", "4/3", "2", "3", "inf"].map(exponent).to_vec()
}

fn interior() -> Vec<Exponent> {
    ["4/3", "2", "3"].map(exponent).to_vec()
}

fn random_seq<S: TargetSpace>(space: S, rng: &mut SeededRng, p: Exponent) -> OperatorSeq<S> {
    let n = rng.random_range(1..=6);
    let terms = (0..n).map(|_| space.random_element(rng)).collect();
    OperatorSeq::new(space, terms, p).expect("random terms match the space")
}

fn random_grid(rng: &mut SeededRng) -> GridFunctions {
    let k = rng.random_range(1..=8);
    GridFunctions::new((0..k).map(|j| GridPoint::new(format!("s{j}"), vec![j as f64])).collect())
}

fn random_tuple(rng: &mut SeededRng, d: usize, n: usize, p: Exponent) -> OperatorTuple {
    OperatorTuple::new((0..n).map(|_| random::gaussian_matrix(rng, d)).collect(), p).expect("random tuples are valid")
}

fn holder(seed: u64) -> Check {
    let mut rng = random::rng(seed);
    let mut worst = 0.0f64;
    let count = 200;
    for _ in 0..count {
        let n = rng.random_range(1..=8);
        let x = random::gaussian_vec(&mut rng, n);
        let y = random::gaussian_vec(&mut rng, n);
        for p in grid_exponents() {
            let (xp, yq) = (p_norm_of(&x, p), p_norm_of(&y, p.conjugate()));
            worst = worst.max((holder_pair(&x, &y).norm() - xp * yq) / (xp * yq));
            if p != Exponent::ONE {
                let e = holder_extremizer(&ScalarSeq::new(x.clone()), p).expect("gaussian vectors are nonzero");
                let tight = (holder_pair(&x, e.entries()) - xp).norm() / xp;
                let unit = (e.p_norm(p.conjugate()) - 1.0).abs();
                worst = worst.max(tight).max(unit);
            }
        }
    }
    Check::new("hoelder inequality and extremizers", count, worst, 1e-12)
}

/// Relative gap between the two norm estimators, or 1 when either falls below
/// the certified lower bound `max_i ||a_i||`.
fn norm_gap<S: TargetSpace>(a: &OperatorSeq<S>, opts: &SearchOptions) -> f64 {
    let (Ok(t), Ok(o)) = (diagonal::triple_norm(a, opts), diagonal::operator_norm(a, opts)) else {
        return f64::NAN;
    };
    let floor = a.term_norms().into_iter().fold(0.0, f64::max);
    let scale = t.value.max(o.value).max(f64::MIN_POSITIVE);
    if t.value < floor * (1.0 - 1e-3) || o.value < floor * (1.0 - 1e-3) {
        return 1.0;
    }
    (t.value - o.value).abs() / scale
}

fn norm_equality(opts: &SearchOptions, extra: Option<&AnySeq>) -> Check {
    let mut rng = random::rng(opts.seed ^ 1);
    let ps = ["4/3", "2", "3", "inf"].map(exponent);
    let mut worst = 0.0f64;
    let mut count = 0;
    for k in 0..8 {
        let p = ps[k % 4];
        let o = SearchOptions { seed: opts.seed + k as u64, ..*opts };
        let n = rng.random_range(1..=4);
        let r = grid_exponents()[k % 5];
        worst = worst.max(norm_gap(&random_seq(ComplexLr::new(n, r), &mut rng, p), &o));
        worst = worst.max(norm_gap(&random_seq(random_grid(&mut rng), &mut rng, p), &o));
        let d = rng.random_range(1..=3);
        worst = worst.max(norm_gap(&random_seq(MatrixSpace::new(d), &mut rng, p), &o));
        count += 3;
    }
    if let Some(a) = extra {
        let gap = match a {
            AnySeq::Cn(a) => norm_gap(a, opts),
            AnySeq::Grid(a) => norm_gap(a, opts),
            AnySeq::Mat(a) => norm_gap(a, opts),
        };
        worst = worst.max(gap);
        count += 1;
    }
    Check::new("operator norm equals dual-shadow norm", count, worst, 1e-3)
}

fn dual_pair_residual<S: TargetSpace>(a: &OperatorSeq<S>, rng: &mut SeededRng) -> f64 {
    let phi = a.space().random_functional(rng);
    let beta = ScalarSeq::new(random::gaussian_vec(rng, a.len()));
    let (Ok(shadow), Ok(rhs)) = (a.dual_map(&phi), a.space().dual_apply(&phi, &a.apply(&beta))) else {
        return f64::NAN;
    };
    let scale: f64 = beta.entries().iter().zip(shadow.entries()).map(|(b, s)| b.norm() * s.norm()).sum();
    (beta.pair(&shadow) - rhs).norm() / scale.max(f64::MIN_POSITIVE)
}

fn dual_pair(seed: u64) -> Check {
    let mut rng = random::rng(seed ^ 2);
    let count = 300;
    let mut worst = 0.0f64;
    for k in 0..count {
        let p = grid_exponents()[k % 5];
        let r = match k % 3 {
            0 => dual_pair_residual(&random_seq(ComplexLr::new(rng.random_range(1..=6), p), &mut rng, p), &mut rng),
            1 => dual_pair_residual(&random_seq(random_grid(&mut rng), &mut rng, p), &mut rng),
            _ => dual_pair_residual(&random_seq(MatrixSpace::new(rng.random_range(1..=3)), &mut rng, p), &mut rng),
        };
        worst = worst.max(r);
    }
    Check::new("dual-pair identity", count, worst, 1e-12)
}

fn pairing_and_polarization(seed: u64) -> [Check; 2] {
    let mut rng = random::rng(seed ^ 3);
    let count = 300;
    let (mut pairing, mut polar) = (0.0f64, 0.0f64);
    for k in 0..count {
        let d = rng.random_range(1..=5);
        let n = rng.random_range(1..=6);
        let t = random_tuple(&mut rng, d, n, interior()[k % 3]);
        let x = DVector::from_vec(random::gaussian_vec(&mut rng, d));
        let y = DVector::from_vec(random::gaussian_vec(&mut rng, d));
        let beta = ScalarSeq::new(random::gaussian_vec(&mut rng, n));
        let u = t.pair_raw(&x, &y).expect("dimensions match");
        let scale: f64 = u.entries().iter().zip(beta.entries()).map(|(a, b)| a.norm() * b.norm()).sum();
        let r = hilbert::pairing_residual(&t, &x, &y, &beta).expect("dimensions match");
        pairing = pairing.max(r / scale.max(f64::MIN_POSITIVE));
        let pol = hilbert::polarization_check(&t, &x, &y).expect("dimensions match");
        polar = polar.max(pol.residual / pol.scale.max(f64::MIN_POSITIVE));
    }
    [Check::new("pairing identity", count, pairing, 1e-12), Check::new("polarization identity", count, polar, 1e-10)]
}

fn radius_checks(opts: &SearchOptions) -> [Check; 3] {
    let mut rng = random::rng(opts.seed ^ 4);
    let reports: Vec<RadiusReport> = (0..12)
        .map(|k| {
            let d = rng.random_range(1..=4);
            let n = rng.random_range(1..=5);
            let t = random_tuple(&mut rng, d, n, interior()[k % 3]);
            hilbert::analyze(&t, &SearchOptions { seed: opts.seed + k as u64, ..*opts }, 0, &[]).expect("tuples are valid")
        })
        .collect();
    let sandwich = reports
        .iter()
        .map(|r| {
            let norm = r.tuple_norm.value.max(f64::MIN_POSITIVE);
            let singles = r
                .single_radii
                .iter()
                .map(|s| -((s.value - 0.5 * s.norm).min(s.norm - s.value)) / s.norm.max(f64::MIN_POSITIVE))
                .fold(0.0, f64::max);
            (-(r.sandwich.lower_margin.min(r.sandwich.upper_margin)) / norm).max(singles)
        })
        .fold(0.0, f64::max);
    let duality = reports.iter().map(|r| r.duality.gap).fold(0.0, f64::max);
    let swap = reports.iter().map(|r| r.sup_swap_gap).fold(0.0, f64::max);
    [
        Check::new("numerical radius sandwich", reports.len(), sandwich, 1e-3),
        Check::new("radius duality", reports.len(), duality, 2e-3),
        Check::new("tuple norm equals dual-shadow norm", reports.len(), swap, 2e-3),
    ]
}

/// Cutoffs of `a_i = e_i / sqrt(i)` (`N = 100`) against the least `m` with
/// `1/(m+1) < eps^2`, and flat unit tails of `a_i = e_i`. Both use the
/// exact shadow of the coordinate functionals.
fn certificates() -> Check {
    let basis = |n: usize, w: &dyn Fn(usize) -> f64| {
        let terms = (0..n)
            .map(|i| {
                let mut v = vec![C64::new(0.0, 0.0); n];
                v[i] = C64::new(w(i + 1), 0.0);
                v
            })
            .collect();
        OperatorSeq::new(ComplexLr::new(n, Exponent::TWO), terms, Exponent::TWO).expect("basis terms match")
    };
    let mut worst = 0.0f64;
    let harmonic = basis(100, &|i| 1.0 / (i as f64).sqrt());
    let shadow = diagonal::dual_shadow(&harmonic, &harmonic.space().extreme_slate()).expect("shadow of a nonempty family");
    let eps = [0.5, 0.3, 0.2, 0.15];
    for c in compactness::certificates(&shadow, Exponent::TWO, &eps).expect("finite exponent") {
        let e = (c.epsilon * 100.0).round() as usize;
        let expected = (0..).find(|&m| (m + 1) * e * e > 10_000).expect("finite");
        worst = worst.max((c.cutoff_m as f64 - expected as f64).abs());
    }
    let flat = basis(20, &|_| 1.0);
    let shadow = diagonal::dual_shadow(&flat, &flat.space().extreme_slate()).expect("shadow of a nonempty family");
    for t in compactness::full_tail_profile(&shadow, Exponent::TWO).expect("finite exponent") {
        if t.m < 20 {
            worst = worst.max((t.sup_tail - 1.0).abs());
        }
    }
    Check::new("tail certificates on the weighted bases", eps.len() + 20, worst, 1e-12)
}

fn continuity() -> Check {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (_, f) in fixtures::shipped() {
        for eps in [0.5, 0.2, 0.1] {
            let Ok(checks) = cfun::continuity_bound_sweep(&f, eps) else { continue };
            for c in checks {
                count += 1;
                worst = worst.max(c.measured_max / c.bound - 1.0);
            }
        }
    }
    Check::new("neighborhood bound (1 + 2^(p+1)) eps^p", count, worst, 0.0)
}

/// Runs every property. `extra` is a user-supplied sequence checked for norm
/// equality alongside the random instances.
pub fn run(opts: &SearchOptions, extra: Option<&AnySeq>) -> Vec<Check> {
    let mut out = vec![holder(opts.seed), norm_equality(opts, extra), dual_pair(opts.seed)];
    out.extend(pairing_and_polarization(opts.seed));
    out.extend(radius_checks(opts));
    out.push(certificates());
    out.push(continuity());
    out
}

pub fn table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.property.len()).max().unwrap_or(8);
    let mut s = format!("{:<width$}  {:>9}  {:>10}  {:>10}  status\n", "property", "instances", "worst", "tolerance");
    for c in checks {
        s += &format!(
            "{:<width$}  {:>9}  {:>10.3e}  {:>10.1e}  {}\n",
            c.property,
            c.instances,
            c.worst,
            c.tolerance,
            if c.passed { "PASS" } else { "FAIL" }
        );
    }
    s
}
