//! The diagonal operator `Λ_a(β) = sum β_i a_i` induced by a truncated
//! sequence `a = (a_1, ..., a_N)` in a target space `A`.
//!
//! Two independent estimators are provided for its norm:
//!
//! * [`triple_norm`] maximizes `||φ(a)||_p` over the dual unit ball `A*_1`
//!   (the dual-shadow norm `|||a|||_p`);
//! * [`operator_norm`] maximizes `||Λ_a β||` over the unit sphere of `l^q`.
//!
//! Both return attained values, hence lower bounds of the common supremum;
//! their agreement is the finite-dimensional content of `||Λ_a|| = |||a|||_p`.
//! The adjoint-side map `Γ_a(φ) = φ(a)` is [`OperatorSeq::dual_map`], and
//! `β̂(Γ_a φ) = φ(Λ_a β)` holds exactly up to rounding.

mod input;

pub use input::{AnySeq, SequenceInput};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::compactness::{self, greedy_net, Certificate, Family, TailPoint};
use crate::error::{Error, Result};
use crate::optim::{pattern_ascent, top_k, SearchOptions};
use crate::random;
use crate::seq::{holder_extremizer, p_norm_of, p_norm_of_reals, Exponent, ScalarSeq};
use crate::space::{sample_dual_ball, dual_ball_maximize, TargetSpace};
use crate::C64;

/// A finite sequence `(a_1, ..., a_N)` of elements of `space`, read in `l^p`.
#[derive(Clone, Debug)]
pub struct OperatorSeq<S: TargetSpace> {
    space: S,
    terms: Vec<S::Element>,
    p: Exponent,
}

impl<S: TargetSpace> OperatorSeq<S> {
    pub fn new(space: S, terms: Vec<S::Element>, p: Exponent) -> Result<Self> {
        for t in &terms {
            space.check(t)?;
        }
        Ok(OperatorSeq { space, terms, p })
    }

    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn terms(&self) -> &[S::Element] {
        &self.terms
    }

    pub fn exponent(&self) -> Exponent {
        self.p
    }

    /// Exponent `q` of the domain `l^q` (or `c_0` when `p = 1`).
    pub fn domain_exponent(&self) -> Exponent {
        self.p.conjugate()
    }

    /// `"c0"` for `p = 1`, `"l^q"` otherwise. At finite support the two
    /// domains coincide; the label keeps the distinction visible in reports.
    pub fn domain_label(&self) -> &'static str {
        if self.p == Exponent::ONE {
            "c0"
        } else {
            "l^q"
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_norms(&self) -> Vec<f64> {
        self.terms.iter().map(|t| self.space.norm(t).expect("terms validated")).collect()
    }

    /// `||a||_p = (sum ||a_i||^p)^(1/p)`, or `sup ||a_i||` for `p = inf`.
    pub fn strong_norm(&self) -> f64 {
        p_norm_of_reals(&self.term_norms(), self.p)
    }

    /// `Λ_a(β) = sum_{i <= N} β_i a_i`; entries of `β` past `N` meet zero terms.
    pub fn apply(&self, beta: &ScalarSeq) -> S::Element {
        self.space.combine(beta.entries(), &self.terms)
    }

    /// `Γ_a(φ) = (φ(a_1), ..., φ(a_N))`.
    pub fn dual_map(&self, phi: &S::Functional) -> Result<ScalarSeq> {
        self.terms.iter().map(|t| self.space.dual_apply(phi, t)).collect::<Result<Vec<_>>>().map(ScalarSeq::new)
    }

    /// The sequence `(0, ..., 0, a_{n+1}, ..., a_N)`.
    pub fn tail(&self, n: usize) -> OperatorSeq<S>
    where
        S: Clone,
    {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| if i < n { self.space.zero() } else { t.clone() })
            .collect();
        OperatorSeq { space: self.space.clone(), terms, p: self.p }
    }

    fn shadow_norm(&self, phi: &S::Functional) -> f64 {
        self.dual_map(phi).map(|s| s.p_norm(self.p)).unwrap_or(0.0)
    }
}

/// An attained value together with the point attaining it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate<W> {
    pub value: f64,
    pub witness: W,
}

/// `|||a|||_p = sup_{φ ∈ A*_1} ||φ(a)||_p`, estimated by dual-ball search.
///
/// For `p = inf` the value is exactly `max_i ||a_i||`, witnessed by a norming
/// functional of the largest term.
pub fn triple_norm<S: TargetSpace>(a: &OperatorSeq<S>, opts: &SearchOptions) -> Result<Estimate<S::Functional>> {
    if a.is_empty() {
        return Err(Error::EmptySequence);
    }
    if a.p.is_infinite() {
        let norms = a.term_norms();
        let k = top_k(&norms, 1)[0];
        return Ok(Estimate { value: norms[k], witness: a.space.norming_functional(&a.terms[k]) });
    }
    let seeds: Vec<S::Functional> = a.terms.iter().map(|t| a.space.norming_functional(t)).collect();
    let (witness, value) = dual_ball_maximize(&a.space, |phi| a.shadow_norm(phi), &seeds, opts);
    Ok(Estimate { value, witness })
}

/// `||Λ_a|| = sup_{||β||_q = 1} ||Λ_a β||`, estimated by pattern search over
/// `β` started from basis vectors, random unit vectors, and Hölder
/// extremizers of `φ(a)` for sampled functionals `φ`.
pub fn operator_norm<S: TargetSpace>(a: &OperatorSeq<S>, opts: &SearchOptions) -> Result<Estimate<ScalarSeq>> {
    operator_norm_seeded(a, &[], opts)
}

/// [`operator_norm`] with extra functionals whose Hölder-extremizer `β` are
/// added to the start pool.
pub fn operator_norm_seeded<S: TargetSpace>(
    a: &OperatorSeq<S>,
    seed_functionals: &[S::Functional],
    opts: &SearchOptions,
) -> Result<Estimate<ScalarSeq>> {
    if a.is_empty() {
        return Err(Error::EmptySequence);
    }
    let n = a.len();
    let q = a.domain_exponent();
    let value_of = |beta: &ScalarSeq| a.space.norm(&a.apply(beta)).unwrap_or(0.0);
    if opts.restarts == 0 {
        let zero = ScalarSeq::zeros(n);
        return Ok(Estimate { value: value_of(&zero), witness: zero });
    }

    let mut starts: Vec<ScalarSeq> = (1..=n).map(|j| {
        let mut e = ScalarSeq::basis(j).into_entries();
        e.resize(n, C64::new(0.0, 0.0));
        ScalarSeq::new(e)
    }).collect();
    let mut phis = sample_dual_ball(&a.space, opts.samples.max(1), opts.seed ^ 0x0b5e_7a7e);
    phis.extend(seed_functionals.iter().cloned());
    for phi in &phis {
        if let Ok(shadow) = a.dual_map(phi) {
            if let Ok(beta) = holder_extremizer(&shadow, a.p) {
                starts.push(beta);
            }
        }
    }
    let mut rng = random::rng(opts.seed ^ 0xbe7a);
    for _ in 0..opts.samples {
        if let Ok(beta) = ScalarSeq::new(random::gaussian_vec(&mut rng, n)).normalized(q) {
            starts.push(beta);
        }
    }

    let values: Vec<f64> = starts.iter().map(value_of).collect();
    let chosen = top_k(&values, opts.restarts);
    // For q = inf only phases move; see the l^inf note on `ComplexLr`.
    let phases = q.is_infinite();
    let to_params = |b: &ScalarSeq| -> Vec<f64> {
        if phases {
            b.entries().iter().map(|z| z.arg()).collect()
        } else {
            b.entries().iter().flat_map(|z| [z.re, z.im]).collect()
        }
    };
    let from_params = |x: &[f64]| {
        if phases {
            return ScalarSeq::new(x.iter().map(|&t| C64::from_polar(1.0, t)).collect());
        }
        let v: Vec<C64> = x.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect();
        let norm = p_norm_of(&v, q);
        ScalarSeq::new(if norm > 0.0 { v.into_iter().map(|z| z / norm).collect() } else { v })
    };
    let project = |x: &mut [f64]| {
        if !phases {
            let b = from_params(x);
            x.copy_from_slice(&to_params(&b));
        }
    };
    let f = |x: &[f64]| value_of(&from_params(x));

    use rayon::prelude::*;
    let results: Vec<(ScalarSeq, f64)> = chosen
        .par_iter()
        .map(|&i| {
            let (x, v) = pattern_ascent(&to_params(&starts[i]), &f, &project, opts);
            if v >= values[i] {
                (from_params(&x), v)
            } else {
                (starts[i].clone(), values[i])
            }
        })
        .collect();
    let (witness, value) = results
        .into_iter()
        .fold(None, |acc: Option<(ScalarSeq, f64)>, (b, v)| match acc {
            Some(best) if best.1 >= v => Some(best),
            _ => Some((b, v)),
        })
        .expect("restarts > 0");
    Ok(Estimate { value, witness })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialNorm {
    pub n: usize,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetSummary {
    pub epsilon: f64,
    pub size: usize,
    pub covering_radius: f64,
}

/// Everything [`classify`] measures about a truncated sequence.
///
/// The membership flags describe the truncation only: a finite sequence lies
/// in every one of the spaces, so each flag records whether the relevant
/// quantity has already decayed before the truncation horizon `N`.
#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub exponent: Exponent,
    pub domain: &'static str,
    pub terms: usize,
    pub strong_norm: f64,
    /// `(sum_{i <= n} ||a_i||^p)^(1/p)` at `n = 1, 2, 4, ..., N`.
    pub strong_partial_norms: Vec<PartialNorm>,
    /// `(sum_{i > N/2} ||a_i||^p)^(1/p)`: the last half of the strong norm.
    pub strong_half_tail: f64,
    pub triple_norm: f64,
    pub triple_norm_witness: serde_json::Value,
    pub operator_norm: f64,
    pub operator_norm_witness: ScalarSeq,
    /// `operator_norm - triple_norm`.
    pub norm_gap: f64,
    /// Every sampled `||φ(a)||_p` is at most the operator-norm estimate.
    pub holder_chain_consistent: bool,
    pub dual_samples: usize,
    pub shadow_pointwise_bound: f64,
    pub shadow_tail_profile: Vec<TailPoint>,
    pub certificates: Vec<Certificate>,
    /// ε-nets of `{a_1, ..., a_N}` in the norm of `A` (`p = inf` only).
    pub term_nets: Vec<NetSummary>,
    pub in_lp: bool,
    pub in_lpb: bool,
    pub in_lpc: bool,
    pub criteria: &'static str,
}

const CRITERIA_FINITE: &str = "at truncation N: in_lpc iff every certificate m(eps) of the sampled dual shadow is < N; \
in_lp iff the strong tail past N/2 is < eps for every eps; in_lpb always (finite truncation); a single term satisfies all three";
const CRITERIA_INF: &str = "at truncation N with p = inf: in_lpc iff the eps-net of the terms in A has fewer than N points for every eps; \
in_lp and in_lpb always (finite sup); a single term satisfies all three";

/// The sampled dual shadow `{φ(a) : φ ∈ sample}` as a family of `l^p` points.
pub fn dual_shadow<S: TargetSpace>(a: &OperatorSeq<S>, phis: &[S::Functional]) -> Result<Family> {
    let members = phis.iter().map(|phi| a.dual_map(phi)).collect::<Result<Vec<_>>>()?;
    Family::new("dual shadow", members)
}

/// Norms, tail certificates and membership flags for a truncated sequence.
pub fn classify<S: TargetSpace>(a: &OperatorSeq<S>, epsilons: &[f64], opts: &SearchOptions) -> Result<MembershipReport> {
    for &e in epsilons {
        Error::check_epsilon(e)?;
    }
    let n = a.len();
    let norms = a.term_norms();
    let (tn, on) = if n == 0 {
        (None, None)
    } else {
        let tn = triple_norm(a, opts)?;
        let on = operator_norm_seeded(a, std::slice::from_ref(&tn.witness), opts)?;
        (Some(tn), Some(on))
    };

    let mut phis = sample_dual_ball(&a.space, opts.samples.max(1), opts.seed);
    phis.extend(a.terms.iter().map(|t| a.space.norming_functional(t)));
    if let Some(t) = &tn {
        phis.push(t.witness.clone());
    }
    let shadow = if n == 0 { Family::new("dual shadow", vec![ScalarSeq::default()])? } else { dual_shadow(a, &phis)? };

    let triple_value = tn.as_ref().map_or(0.0, |t| t.value);
    let operator_value = on.as_ref().map_or(0.0, |o| o.value);
    let tol = 1e-9 * operator_value.max(1.0);
    let holder_chain_consistent = shadow.members().iter().all(|s| s.p_norm(a.p) <= operator_value + tol);
    if !holder_chain_consistent {
        warn!("sampled dual shadow exceeds the operator-norm estimate; the beta search is under-converged");
    }

    let mut partial = Vec::new();
    let mut k = 1;
    while k < n {
        partial.push(PartialNorm { n: k, value: p_norm_of_reals(&norms[..k], a.p) });
        k *= 2;
    }
    if n > 0 {
        partial.push(PartialNorm { n, value: p_norm_of_reals(&norms, a.p) });
    }
    let strong_half_tail = p_norm_of_reals(&norms[n / 2..], a.p);

    let trivially = n <= 1;
    let (tails, certs, nets, in_lp, in_lpc, criteria) = if a.p.is_infinite() {
        let nets: Vec<NetSummary> = epsilons
            .iter()
            .map(|&e| {
                let net = greedy_net(&a.terms, e, |x, y| a.space.norm(&a.space.sub(x, y)).unwrap_or(f64::INFINITY));
                NetSummary { epsilon: e, size: net.size(), covering_radius: net.covering_radius }
            })
            .collect();
        let in_lpc = trivially || nets.iter().all(|s| s.size < n);
        (Vec::new(), Vec::new(), nets, true, in_lpc, CRITERIA_INF)
    } else {
        let tails = compactness::full_tail_profile(&shadow, a.p)?;
        let certs = compactness::certificates(&shadow, a.p, epsilons)?;
        let in_lpc = trivially || certs.iter().all(|c| c.below_horizon(n));
        let in_lp = trivially || epsilons.iter().all(|&e| strong_half_tail < e);
        (tails, certs, Vec::new(), in_lp, in_lpc, CRITERIA_FINITE)
    };

    Ok(MembershipReport {
        exponent: a.p,
        domain: a.domain_label(),
        terms: n,
        strong_norm: a.strong_norm(),
        strong_partial_norms: partial,
        strong_half_tail,
        triple_norm: triple_value,
        triple_norm_witness: tn
            .as_ref()
            .map(|t| serde_json::to_value(&t.witness).unwrap_or(serde_json::Value::Null))
            .unwrap_or(serde_json::Value::Null),
        operator_norm: operator_value,
        operator_norm_witness: on.map(|o| o.witness).unwrap_or_default(),
        norm_gap: operator_value - triple_value,
        holder_chain_consistent,
        dual_samples: shadow.len(),
        shadow_pointwise_bound: shadow.pointwise_bound(),
        shadow_tail_profile: tails,
        certificates: certs,
        term_nets: nets,
        in_lp,
        in_lpb: true,
        in_lpc,
        criteria,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationPoint {
    pub n: usize,
    /// `|||a_n - a|||_p`, the dual-shadow norm of the tail past `n`.
    pub distance: f64,
}

/// `|||a_n - a|||_p` for each cutoff `n`, where `a_n` keeps the first `n`
/// terms. Values are made nonincreasing by carrying estimates down from
/// larger cutoffs (a witness for a shorter tail is also one for a longer tail,
/// so this keeps every value a lower bound).
pub fn truncation_convergence<S>(a: &OperatorSeq<S>, cutoffs: &[usize], opts: &SearchOptions) -> Result<Vec<TruncationPoint>>
where
    S: TargetSpace + Clone,
{
    if a.p.is_infinite() {
        return Err(Error::InfiniteExponent);
    }
    let mut sorted: Vec<usize> = cutoffs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut values = Vec::with_capacity(sorted.len());
    for &n in &sorted {
        let value = if n >= a.len() { 0.0 } else { triple_norm(&a.tail(n), opts)?.value };
        values.push(value);
    }
    for i in (0..values.len().saturating_sub(1)).rev() {
        values[i] = values[i].max(values[i + 1]);
    }
    let lookup = |n: usize| values[sorted.binary_search(&n).expect("cutoff present")];
    Ok(cutoffs.iter().map(|&n| TruncationPoint { n, distance: lookup(n) }).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayPoint {
    pub epsilon: f64,
    /// Least `n < N` with `sup_{i > n} ||a_i|| < ε`, if any.
    pub cutoff: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub norms: Vec<f64>,
    pub points: Vec<DecayPoint>,
    /// Every ε of the grid is reached before the horizon.
    pub decays: bool,
}

/// Whether `||a_i||` falls below each ε before the truncation horizon, the
/// finite stand-in for `a ∈ c_0(A)`.
pub fn c0_decay_check<S: TargetSpace>(a: &OperatorSeq<S>, epsilons: &[f64]) -> DecayReport {
    let norms = a.term_norms();
    let n = norms.len();
    // sup_tail[k] = max_{i > k} ||a_i|| (1-based), k = 0..=n
    let mut sup_tail = vec![0.0f64; n + 1];
    for k in (0..n).rev() {
        sup_tail[k] = sup_tail[k + 1].max(norms[k]);
    }
    let points: Vec<DecayPoint> = epsilons
        .iter()
        .map(|&e| DecayPoint { epsilon: e, cutoff: (0..n).find(|&k| sup_tail[k] < e) })
        .collect();
    let decays = n == 0 || points.iter().all(|p| p.cutoff.is_some());
    DecayReport { norms, points, decays }
}

#[cfg(test)]
mod tests;
