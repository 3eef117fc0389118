//! Uniform tail certificates and greedy ε-nets for finite families in `l^p`.
//!
//! A family `K` in `l^p` (`p` finite) is totally bounded iff it is pointwise
//! bounded and for every ε there is a cutoff `m` with
//! `(sum_{i>m} |α_i|^p)^(1/p) < ε` uniformly over `α ∈ K`. Families here are
//! finite samples, so the useful output is how the least such `m` grows as ε
//! shrinks, not a yes/no verdict about an infinite set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::{CompensatedSum, Exponent, ScalarSeq};
use crate::C64;

/// A finite, non-empty sample of points of `l^p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    members: Vec<ScalarSeq>,
    label: String,
}

impl Family {
    pub fn new(label: impl Into<String>, members: Vec<ScalarSeq>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyFamily);
        }
        Ok(Family { members, label: label.into() })
    }

    pub fn members(&self) -> &[ScalarSeq] {
        &self.members
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Largest stored support; every tail past it is zero.
    pub fn max_support(&self) -> usize {
        self.members.iter().map(ScalarSeq::support).max().unwrap_or(0)
    }

    /// `sup_{α ∈ K} sup_i |α_i|`, the pointwise bound of the family.
    pub fn pointwise_bound(&self) -> f64 {
        self.members
            .iter()
            .flat_map(|m| m.entries().iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    }
}

/// Witness (or refutation) of the uniform tail condition at one ε.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub epsilon: f64,
    #[serde(rename = "m")]
    pub cutoff_m: usize,
    pub sup_tail: f64,
    pub satisfied: bool,
}

impl Certificate {
    /// Whether the certificate holds at a cutoff strictly below `horizon`.
    pub fn below_horizon(&self, horizon: usize) -> bool {
        self.satisfied && self.cutoff_m < horizon
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailPoint {
    pub m: usize,
    pub sup_tail: f64,
}

/// `t[m] = (sum_{i>m} |x_i|^p)^(1/p)` for `m = 0..=x.len()`, computed by a
/// single backward pass with running rescaling.
fn suffix_tails(x: &[C64], p: f64) -> Vec<f64> {
    let mut out = vec![0.0; x.len() + 1];
    let mut scale = 0.0f64;
    let mut acc = CompensatedSum::default();
    for (i, z) in x.iter().enumerate().rev() {
        let a = z.norm();
        if a > 0.0 {
            if a > scale {
                let ratio = if scale > 0.0 { (scale / a).powf(p) } else { 0.0 };
                acc = CompensatedSum::from_iter([acc.value() * ratio]);
                scale = a;
            }
            acc.add((a / scale).powf(p));
        }
        out[i] = if scale > 0.0 { scale * acc.value().powf(1.0 / p) } else { 0.0 };
    }
    out
}

/// Pointwise supremum over members of the tail norms, indexed by cutoff
/// `m = 0..=max_support`.
fn sup_tails(fam: &Family, p: Exponent) -> Result<Vec<f64>> {
    let p = p.finite().ok_or(Error::InfiniteExponent)?;
    let mut sup = vec![0.0; fam.max_support() + 1];
    for member in fam.members() {
        for (s, t) in sup.iter_mut().zip(suffix_tails(member.entries(), p)) {
            *s = f64::max(*s, t);
        }
    }
    Ok(sup)
}

/// Exact `sup_{α ∈ K} (sum_{i>m} |α_i|^p)^(1/p)` for each requested cutoff.
pub fn tail_profile(fam: &Family, p: Exponent, cutoffs: &[usize]) -> Result<Vec<TailPoint>> {
    let sup = sup_tails(fam, p)?;
    Ok(cutoffs
        .iter()
        .map(|&m| TailPoint { m, sup_tail: sup.get(m).copied().unwrap_or(0.0) })
        .collect())
}

/// Tail profile at every cutoff `0..=max_support`.
pub fn full_tail_profile(fam: &Family, p: Exponent) -> Result<Vec<TailPoint>> {
    Ok(sup_tails(fam, p)?
        .into_iter()
        .enumerate()
        .map(|(m, sup_tail)| TailPoint { m, sup_tail })
        .collect())
}

/// The least cutoff `m <= max_support` whose uniform tail is below ε.
pub fn kolmogorov_certificate(fam: &Family, p: Exponent, epsilon: f64) -> Result<Certificate> {
    Error::check_epsilon(epsilon)?;
    let sup = sup_tails(fam, p)?;
    Ok(certificate_from_tails(&sup, epsilon))
}

/// Certificates for a whole ε grid from one tail scan.
pub fn certificates(fam: &Family, p: Exponent, epsilons: &[f64]) -> Result<Vec<Certificate>> {
    for &e in epsilons {
        Error::check_epsilon(e)?;
    }
    let sup = sup_tails(fam, p)?;
    Ok(epsilons.iter().map(|&e| certificate_from_tails(&sup, e)).collect())
}

fn certificate_from_tails(sup: &[f64], epsilon: f64) -> Certificate {
    let last = sup.len() - 1;
    let m = sup.iter().position(|&t| t < epsilon).unwrap_or(last);
    Certificate { epsilon, cutoff_m: m, sup_tail: sup[m], satisfied: sup[m] < epsilon }
}

/// Result of a greedy farthest-point net.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonNet {
    pub epsilon: f64,
    /// Indices of the chosen centers, in selection order.
    pub centers: Vec<usize>,
    /// `max_k min_c dist(x_k, c)` over all items.
    pub covering_radius: f64,
}

impl EpsilonNet {
    pub fn size(&self) -> usize {
        self.centers.len()
    }
}

/// Farthest-point traversal stopped once every item lies within ε of a
/// center. Starts at item 0; ties go to the lowest index. Because the
/// traversal order does not depend on ε, net size is nonincreasing in ε.
pub fn greedy_net<T, D>(items: &[T], epsilon: f64, dist: D) -> EpsilonNet
where
    D: Fn(&T, &T) -> f64,
{
    if items.is_empty() {
        return EpsilonNet { epsilon, centers: Vec::new(), covering_radius: 0.0 };
    }
    let mut centers = vec![0];
    let mut nearest: Vec<f64> = items.iter().map(|x| dist(x, &items[0])).collect();
    loop {
        let (far, radius) = nearest
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
        if radius <= epsilon {
            return EpsilonNet { epsilon, centers, covering_radius: radius.max(0.0) };
        }
        centers.push(far);
        for (slot, x) in nearest.iter_mut().zip(items) {
            *slot = slot.min(dist(x, &items[far]));
        }
    }
}

/// Greedy ε-net of a family in the `p`-norm.
pub fn epsilon_net(fam: &Family, p: Exponent, epsilon: f64) -> Result<EpsilonNet> {
    Error::check_epsilon(epsilon)?;
    Ok(greedy_net(fam.members(), epsilon, |a, b| a.distance(b, p)))
}
