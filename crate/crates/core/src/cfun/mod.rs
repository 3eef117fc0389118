//! Sequences `F = (f_1, ..., f_N)` of functions on a finite metric grid `Ω`,
//! read as a map `F: Ω -> l^p`, `F(s) = (f_1(s), ..., f_N(s))`.
//!
//! On a compact space, `F` is continuous iff `F(Ω)` is totally bounded in
//! `l^p`. A finite grid makes every function continuous, so both sides are
//! measured quantitatively instead: the modulus `ω_F(δ)` over adjacent pairs,
//! and uniform tails of `F(Ω)`. Neighborhoods are balls of the adjacency
//! graph. Reports state the finest δ present, since decay of the modulus is
//! only meaningful across grid refinements.

pub mod fixtures;

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compactness::{self, greedy_net, Certificate, Family, TailPoint};
use crate::diagonal::OperatorSeq;
use crate::error::{Error, Result};
use crate::repr::JsonComplex;
use crate::seq::{p_norm_of, Exponent, ScalarSeq};
use crate::space::{GridFunctions, GridPoint};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub length: f64,
}

/// Labelled points with a connected adjacency graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    points: Vec<GridPoint>,
    edges: Vec<Edge>,
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl Grid {
    /// Edge lengths are the coordinate distances; they must be positive and
    /// the graph connected.
    pub fn new(points: Vec<GridPoint>, adjacency: &[[usize; 2]]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("no points".into()));
        }
        let k = points.len();
        let mut edges = Vec::with_capacity(adjacency.len());
        let mut neighbors = vec![Vec::new(); k];
        for &[a, b] in adjacency {
            if a >= k || b >= k {
                return Err(Error::InvalidGrid(format!("edge ({a}, {b}) refers to a missing point")));
            }
            let length = points[a].distance(&points[b]);
            if length.is_nan() || length <= 0.0 {
                return Err(Error::InvalidGrid(format!(
                    "edge ({}, {}) has non-positive length",
                    points[a].label, points[b].label
                )));
            }
            edges.push(Edge { a, b, length });
            neighbors[a].push((b, length));
            neighbors[b].push((a, length));
        }
        let grid = Grid { points, edges, neighbors };
        if let Some(lost) = grid.unreachable_point() {
            return Err(Error::InvalidGrid(format!("point `{}` is not connected", grid.points[lost].label)));
        }
        Ok(grid)
    }

    /// `0, 1/k, ..., 1` on a path.
    pub fn uniform_1d(k: usize) -> Self {
        let k = k.max(1);
        let points = (0..=k).map(|j| point(&[j as f64 / k as f64])).collect();
        let adjacency: Vec<[usize; 2]> = (0..k).map(|j| [j, j + 1]).collect();
        Grid::new(points, &adjacency).expect("path grid is valid")
    }

    /// The `(k+1) x (k+1)` lattice on `[0,1]^2` with 4-neighbor adjacency.
    pub fn uniform_2d(k: usize) -> Self {
        let k = k.max(1);
        let idx = |r: usize, c: usize| r * (k + 1) + c;
        let mut points = Vec::with_capacity((k + 1) * (k + 1));
        let mut adjacency = Vec::new();
        for r in 0..=k {
            for c in 0..=k {
                points.push(point(&[r as f64 / k as f64, c as f64 / k as f64]));
                if c < k {
                    adjacency.push([idx(r, c), idx(r, c + 1)]);
                }
                if r < k {
                    adjacency.push([idx(r, c), idx(r + 1, c)]);
                }
            }
        }
        Grid::new(points, &adjacency).expect("lattice grid is valid")
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p.label == label)
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    /// Shortest-path distances from `source` along the adjacency graph.
    pub fn path_distances(&self, source: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.len()];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Frontier { dist: 0.0, node: source });
        while let Some(Frontier { dist: d, node }) = heap.pop() {
            if d > dist[node] {
                continue;
            }
            for &(next, w) in &self.neighbors[node] {
                let nd = d + w;
                if nd < dist[next] {
                    dist[next] = nd;
                    heap.push(Frontier { dist: nd, node: next });
                }
            }
        }
        dist
    }

    fn unreachable_point(&self) -> Option<usize> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &self.neighbors[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.iter().position(|s| !s)
    }
}

fn point(coords: &[f64]) -> GridPoint {
    let label = coords.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(",");
    GridPoint::new(label, coords.to_vec())
}

// min-heap entry for Dijkstra
#[derive(PartialEq)]
struct Frontier {
    dist: f64,
    node: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `F = (f_1, ..., f_N)` with each `f_i` a value table on the grid.
#[derive(Clone, Debug)]
pub struct GridFunctionSeq {
    grid: Grid,
    components: Vec<Vec<C64>>,
    p: Exponent,
}

impl GridFunctionSeq {
    pub fn new(grid: Grid, components: Vec<Vec<C64>>, p: Exponent) -> Result<Self> {
        for f in &components {
            Error::check_dim(grid.len(), f.len())?;
        }
        Ok(GridFunctionSeq { grid, components, p })
    }

    /// Components given as functions of the point coordinates.
    pub fn from_fn<F>(grid: Grid, n: usize, p: Exponent, f: F) -> Self
    where
        F: Fn(usize, &[f64]) -> C64,
    {
        let components = (1..=n)
            .map(|i| grid.points().iter().map(|s| f(i, &s.coords)).collect())
            .collect();
        GridFunctionSeq { grid, components, p }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> &[Vec<C64>] {
        &self.components
    }

    pub fn exponent(&self) -> Exponent {
        self.p
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn with_exponent(mut self, p: Exponent) -> Self {
        self.p = p;
        self
    }

    /// `F(s)` for the point with index `s`.
    pub fn evaluate_at(&self, s: usize) -> ScalarSeq {
        ScalarSeq::new(self.components.iter().map(|f| f[s]).collect())
    }

    /// `F(s)` for the point labelled `s`.
    pub fn evaluate(&self, s: &str) -> Result<ScalarSeq> {
        Ok(self.evaluate_at(self.grid.index_of(s)?))
    }

    /// `F(Ω)` as a family in `l^p`.
    pub fn image(&self) -> Family {
        let members = (0..self.grid.len()).map(|s| self.evaluate_at(s)).collect();
        Family::new("image", members).expect("grids are non-empty")
    }

    /// `F` as a sequence in `C(Ω)`; point masses then evaluate it pointwise.
    pub fn as_operator_seq(&self) -> OperatorSeq<GridFunctions> {
        OperatorSeq::new(GridFunctions::new(self.grid.points.clone()), self.components.clone(), self.p)
            .expect("components checked against the grid")
    }

    fn edge_gap(&self, e: &Edge, p: Exponent) -> f64 {
        let d: Vec<C64> = self.components.iter().map(|f| f[e.a] - f[e.b]).collect();
        p_norm_of(&d, p)
    }
}

/// Exact `sup_{s ∈ Ω} (sum_{i>m} |f_i(s)|^p)^(1/p)` at each cutoff.
pub fn image_tail_profile(f: &GridFunctionSeq, cutoffs: &[usize]) -> Result<Vec<TailPoint>> {
    compactness::tail_profile(&f.image(), f.p, cutoffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusPoint {
    pub delta: f64,
    pub omega: f64,
}

/// `ω_F(δ) = max ||F(s) - F(s')||_p` over adjacent pairs at distance `<= δ`,
/// one point per distinct edge length (lengths within 1e-12 relative are
/// merged).
pub fn modulus_of_continuity(f: &GridFunctionSeq, p: Exponent) -> Vec<ModulusPoint> {
    let mut gaps: Vec<(f64, f64)> = f.grid.edges.par_iter().map(|e| (e.length, f.edge_gap(e, p))).collect();
    gaps.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<ModulusPoint> = Vec::new();
    let mut running = 0.0f64;
    for (delta, gap) in gaps {
        running = running.max(gap);
        match out.last_mut() {
            Some(last) if delta - last.delta <= 1e-12 * delta => {
                last.delta = delta;
                last.omega = running;
            }
            _ => out.push(ModulusPoint { delta, omega: running }),
        }
    }
    out
}

/// Per-component modulus `max |f_i(s) - f_i(s')|` over all edges.
pub fn component_moduli(f: &GridFunctionSeq) -> Vec<f64> {
    f.components
        .iter()
        .map(|c| f.grid.edges.iter().map(|e| (c[e.a] - c[e.b]).norm()).fold(0.0, f64::max))
        .collect()
}

/// The neighborhood construction behind "`F(Ω)` totally bounded implies `F`
/// continuous", replayed at one base point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityCheck {
    pub base_point: String,
    pub epsilon: f64,
    /// Least `m < N` with uniform image tail `< ε`.
    pub cutoff_m: usize,
    pub sup_tail: f64,
    /// `ε / m^(1/p)`, the allowed change of each head component on `U_0`.
    pub head_threshold: f64,
    /// Largest path distance from the base point inside `U_0`.
    pub ball_radius: f64,
    pub ball_size: usize,
    /// Path distance of the nearest point violating the head condition.
    pub first_excluded: Option<f64>,
    /// `max_{s ∈ U_0} ||F(s) - F(s_0)||_p^p`.
    pub measured_max: f64,
    /// `(1 + 2^(p+1)) ε^p`.
    pub bound: f64,
    pub holds: bool,
}

/// Builds `U_0` as the largest path ball around `s_0` on which
/// `|f_i(s) - f_i(s_0)| <= ε / m^(1/p)` for `i <= m`, then measures
/// `||F(s) - F(s_0)||_p^p` on it against `(1 + 2^(p+1)) ε^p`.
///
/// Fails with `NoCertificate` unless some `m < N` has uniform tail `< ε`.
pub fn continuity_bound_check(f: &GridFunctionSeq, s0: usize, epsilon: f64) -> Result<ContinuityCheck> {
    let cert = tail_premise(f, epsilon)?;
    Ok(check_with_certificate(f, s0, &cert))
}

/// [`continuity_bound_check`] at every grid point.
pub fn continuity_bound_sweep(f: &GridFunctionSeq, epsilon: f64) -> Result<Vec<ContinuityCheck>> {
    let cert = tail_premise(f, epsilon)?;
    Ok((0..f.grid.len()).into_par_iter().map(|s0| check_with_certificate(f, s0, &cert)).collect())
}

fn tail_premise(f: &GridFunctionSeq, epsilon: f64) -> Result<Certificate> {
    if f.p.is_infinite() {
        return Err(Error::InfiniteExponent);
    }
    let cert = compactness::kolmogorov_certificate(&f.image(), f.p, epsilon)?;
    if cert.below_horizon(f.len()) {
        Ok(cert)
    } else {
        Err(Error::NoCertificate { epsilon, horizon: f.len() })
    }
}

fn check_with_certificate(f: &GridFunctionSeq, s0: usize, cert: &Certificate) -> ContinuityCheck {
    let p = f.p.finite().expect("checked by tail_premise");
    let eps = cert.epsilon;
    let m = cert.cutoff_m;
    let threshold = if m == 0 { f64::INFINITY } else { eps / (m as f64).powf(1.0 / p) };
    let head_ok = |s: usize| f.components[..m].iter().all(|c| (c[s] - c[s0]).norm() <= threshold);

    let dist = f.grid.path_distances(s0);
    let mut order: Vec<usize> = (0..f.grid.len()).collect();
    order.sort_by(|&x, &y| dist[x].total_cmp(&dist[y]).then(x.cmp(&y)));
    let first_excluded = order.iter().find(|&&s| !head_ok(s)).map(|&s| dist[s]);
    let ball: Vec<usize> = order.into_iter().filter(|&s| first_excluded.is_none_or(|d| dist[s] < d)).collect();

    let base = f.evaluate_at(s0);
    let measured_max = ball
        .iter()
        .map(|&s| f.evaluate_at(s).distance(&base, f.p).powf(p))
        .fold(0.0, f64::max);
    let bound = (1.0 + 2f64.powf(p + 1.0)) * eps.powf(p);
    ContinuityCheck {
        base_point: f.grid.points[s0].label.clone(),
        epsilon: eps,
        cutoff_m: m,
        sup_tail: cert.sup_tail,
        head_threshold: threshold,
        ball_radius: ball.iter().map(|&s| dist[s]).fold(0.0, f64::max),
        ball_size: ball.len(),
        first_excluded,
        measured_max,
        bound,
        holds: measured_max <= bound * (1.0 + 1e-12),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetPoint {
    pub epsilon: f64,
    pub size: usize,
    pub covering_radius: f64,
}

/// The `p = inf` route: the `l^inf` modulus of `F` next to ε-nets of the
/// component set `{f_1, ..., f_N}` in the sup norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquicontinuityReport {
    pub modulus: Vec<ModulusPoint>,
    /// `max_i max_edges |f_i(s) - f_i(s')|`.
    pub max_edge_jump: f64,
    pub component_nets: Vec<NetPoint>,
}

/// Equicontinuity data for `F` read in `l^inf`, whatever its stored exponent.
pub fn equicontinuity_check_pinf(f: &GridFunctionSeq, epsilons: &[f64]) -> Result<EquicontinuityReport> {
    for &e in epsilons {
        Error::check_epsilon(e)?;
    }
    let modulus = modulus_of_continuity(f, Exponent::INFINITY);
    let max_edge_jump = modulus.last().map_or(0.0, |m| m.omega);
    let sup_dist = |x: &Vec<C64>, y: &Vec<C64>| x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let component_nets = epsilons
        .iter()
        .map(|&e| {
            let net = greedy_net(&f.components, e, sup_dist);
            NetPoint { epsilon: e, size: net.size(), covering_radius: net.covering_radius }
        })
        .collect();
    Ok(EquicontinuityReport { modulus, max_edge_jump, component_nets })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompactnessType {
    /// Every ε of the grid is certified before the truncation horizon.
    CompactType,
    /// Some ε has no certificate below the horizon: tails (or component nets
    /// for `p = inf`) stall.
    NonCompactType,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusSplit {
    pub epsilon: f64,
    pub cutoff_m: usize,
    pub sup_tail: f64,
    /// `(sum_{i<=m} ω_i^p)^(1/p) + 2 sup_tail(m)`, which bounds every edge gap
    /// `||F(s) - F(s')||_p` by the triangle inequality.
    pub modulus_bound: f64,
}

/// Everything measured about `F` for one ε grid.
#[derive(Clone, Debug, Serialize)]
pub struct CfunReport {
    pub exponent: Exponent,
    pub points: usize,
    pub components: usize,
    pub finest_delta: f64,
    pub modulus: Vec<ModulusPoint>,
    pub component_moduli: Vec<f64>,
    pub tail_profile: Vec<TailPoint>,
    pub certificates: Vec<Certificate>,
    pub modulus_splits: Vec<ModulusSplit>,
    pub compactness_type: CompactnessType,
    /// One worst-case summary per ε whose tail premise holds.
    pub continuity_checks: Vec<ContinuityCheck>,
    pub all_bounds_hold: bool,
    pub equicontinuity: Option<EquicontinuityReport>,
    pub criteria: &'static str,
}

const CFUN_CRITERIA: &str = "compact-type iff every eps has a uniform image-tail cutoff m < N (p finite) or a component \
eps-net with fewer than N functions (p = inf); continuity checks run at every grid point for each certified eps \
and report the point with the largest measured/bound ratio";

/// Tail certificates, moduli, and the neighborhood bound check for each ε.
pub fn analyze(f: &GridFunctionSeq, epsilons: &[f64]) -> Result<CfunReport> {
    for &e in epsilons {
        Error::check_epsilon(e)?;
    }
    let n = f.len();
    let modulus = modulus_of_continuity(f, f.p);
    let moduli = component_moduli(f);
    let finest_delta = modulus.first().map_or(0.0, |m| m.delta);

    let (tail_profile, certificates, splits, ty, checks, equi) = match f.p.finite() {
        Some(p) => {
            let image = f.image();
            let tails = compactness::full_tail_profile(&image, f.p)?;
            let certs = compactness::certificates(&image, f.p, epsilons)?;
            let splits = certs
                .iter()
                .map(|c| {
                    let head: f64 = moduli[..c.cutoff_m].iter().map(|w| w.powf(p)).sum::<f64>().powf(1.0 / p);
                    ModulusSplit {
                        epsilon: c.epsilon,
                        cutoff_m: c.cutoff_m,
                        sup_tail: c.sup_tail,
                        modulus_bound: head + 2.0 * c.sup_tail,
                    }
                })
                .collect();
            let compact = n <= 1 || certs.iter().all(|c| c.below_horizon(n));
            let mut checks = Vec::new();
            for c in certs.iter().filter(|c| c.below_horizon(n)) {
                let sweep = (0..f.grid.len())
                    .into_par_iter()
                    .map(|s0| check_with_certificate(f, s0, c))
                    .collect::<Vec<_>>();
                let worst = sweep
                    .into_iter()
                    .reduce(|x, y| if y.measured_max / y.bound > x.measured_max / x.bound { y } else { x })
                    .expect("grids are non-empty");
                checks.push(worst);
            }
            (tails, certs, splits, compact, checks, None)
        }
        None => {
            let equi = equicontinuity_check_pinf(f, epsilons)?;
            let compact = n <= 1 || equi.component_nets.iter().all(|net| net.size < n);
            (Vec::new(), Vec::new(), Vec::new(), compact, Vec::new(), Some(equi))
        }
    };
    let all_bounds_hold = checks.iter().all(|c| c.holds);
    Ok(CfunReport {
        exponent: f.p,
        points: f.grid.len(),
        components: n,
        finest_delta,
        modulus,
        component_moduli: moduli,
        tail_profile,
        certificates,
        modulus_splits: splits,
        compactness_type: if ty { CompactnessType::CompactType } else { CompactnessType::NonCompactType },
        continuity_checks: checks,
        all_bounds_hold,
        equicontinuity: equi,
        criteria: CFUN_CRITERIA,
    })
}

/// Input file layout: `{points, adjacency, components, p?}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CfunInput {
    pub points: Vec<GridPoint>,
    pub adjacency: Vec<[usize; 2]>,
    pub components: Vec<Vec<JsonComplex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Exponent>,
}

impl CfunInput {
    /// `p` overrides the file's exponent; the default is 2.
    pub fn build(self, p: Option<Exponent>) -> Result<GridFunctionSeq> {
        let grid = Grid::new(self.points, &self.adjacency)?;
        let components = self.components.into_iter().map(|c| c.into_iter().map(|z| z.0).collect()).collect();
        GridFunctionSeq::new(grid, components, p.or(self.p).unwrap_or(Exponent::TWO))
    }

    pub fn from_seq(f: &GridFunctionSeq) -> Self {
        CfunInput {
            points: f.grid.points.clone(),
            adjacency: f.grid.edges.iter().map(|e| [e.a, e.b]).collect(),
            components: f.components.iter().map(|c| c.iter().map(|&z| JsonComplex(z)).collect()).collect(),
            p: Some(f.p),
        }
    }
}
