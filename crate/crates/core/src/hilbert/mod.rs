//! Operator tuples `T = (T_1, ..., T_N)` on `C^d`, read as elements of
//! `l^p(B(C^d))` with `1 < p < inf`.
//!
//! Inner products are linear in the first slot, `<u, v> = v^H u`, so
//! `<T x, y> = y^H T x`. The quantities estimated are
//!
//! * `||T|| = sup ||<T x, y>||_p` over unit `x, y` ([`operator_tuple_norm`]),
//! * `ω(T) = sup ||<T x, x>||_p` over unit `x` ([`joint_numerical_radius`]),
//! * `w(M) = sup |<M x, x>|` for one matrix ([`single_numerical_radius`]),
//!
//! related by `||T|| / 2 <= ω(T) = sup_{||β||_q <= 1} w(Tβ) <= ||T||`.

mod radius;
mod range;

pub use radius::{
    ascent_direction, joint_numerical_radius, joint_objective, operator_tuple_norm, pair_ascent_direction,
    pair_objective, radius_duality_check, single_numerical_radius, DualityReport, JointRadius, SingleRadius,
    TupleNorm,
};
pub use range::{numerical_range_sample, pair_sample, RangeSample};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::compactness::{self, Certificate, TailPoint};
use crate::diagonal::{self, OperatorSeq};
use crate::error::{Error, Result};
use crate::optim::SearchOptions;
use crate::repr::{self, JsonComplex};
use crate::seq::{Exponent, ScalarSeq};
use crate::space::MatrixSpace;
use crate::C64;

/// `N >= 1` square matrices of one size, with an exponent `1 < p < inf`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTuple {
    d: usize,
    ops: Vec<DMatrix<C64>>,
    p: Exponent,
}

impl OperatorTuple {
    pub fn new(ops: Vec<DMatrix<C64>>, p: Exponent) -> Result<Self> {
        let first = ops.first().ok_or(Error::EmptySequence)?;
        let d = first.nrows();
        for m in &ops {
            Error::check_dim(d, m.nrows())?;
            Error::check_dim(d, m.ncols())?;
        }
        if !p.is_interior() {
            return Err(Error::ExponentOutOfRange(p.as_f64()));
        }
        Ok(OperatorTuple { d, ops, p })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn operators(&self) -> &[DMatrix<C64>] {
        &self.ops
    }

    pub fn exponent(&self) -> Exponent {
        self.p
    }

    /// `Tβ = sum β_i T_i`; entries of `β` past `N` are ignored.
    pub fn combine(&self, beta: &[C64]) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(self.d, self.d);
        for (b, t) in beta.iter().zip(&self.ops) {
            out.zip_apply(t, |o, v| *o += b * v);
        }
        out
    }

    /// The tuple as a sequence in the matrix space with the spectral norm.
    pub fn as_operator_seq(&self) -> OperatorSeq<MatrixSpace> {
        OperatorSeq::new(MatrixSpace::new(self.d), self.ops.clone(), self.p).expect("sizes checked")
    }

    fn check_vec(&self, v: &DVector<C64>) -> Result<()> {
        Error::check_dim(self.d, v.len())
    }

    /// `<T x, y>` without normalizing `x, y`.
    pub fn pair_raw(&self, x: &DVector<C64>, y: &DVector<C64>) -> Result<ScalarSeq> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        Ok(ScalarSeq::new(self.ops.iter().map(|t| y.dotc(&(t * x))).collect()))
    }
}

pub(crate) fn unit(v: &DVector<C64>) -> Result<DVector<C64>> {
    let n = v.norm();
    if n > 0.0 && n.is_finite() {
        Ok(v.unscale(n))
    } else {
        Err(Error::ZeroVector)
    }
}

/// Rotates `v` so its first nonzero coordinate is real and positive.
pub fn gauge_fixed(v: &DVector<C64>) -> DVector<C64> {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    match v.iter().find(|z| z.norm() > 1e-12 * scale) {
        Some(z) => {
            let phase = z.conj() / z.norm();
            v.map(|w| w * phase)
        }
        None => v.clone(),
    }
}

/// `<T x, y> = (<T_1 x, y>, ..., <T_N x, y>)` for `x, y` normalized first.
pub fn pair_sequence(t: &OperatorTuple, x: &DVector<C64>, y: &DVector<C64>) -> Result<ScalarSeq> {
    t.check_vec(x)?;
    t.check_vec(y)?;
    t.pair_raw(&unit(x)?, &unit(y)?)
}

/// `|β̂<T x, y> - <(Tβ) x, y>|`, which vanishes up to rounding.
pub fn pairing_residual(t: &OperatorTuple, x: &DVector<C64>, y: &DVector<C64>, beta: &ScalarSeq) -> Result<f64> {
    let lhs = beta.pair(&t.pair_raw(x, y)?);
    let rhs = y.dotc(&(t.combine(beta.entries()) * x));
    Ok((lhs - rhs).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polarization {
    /// `max_i |<T_i x, y> - 1/4 sum_k i^k <T_i(x + i^k y), x + i^k y>|`.
    pub residual: f64,
    /// `(||x|| + ||y||)^2 max_i ||T_i||`.
    pub scale: f64,
}

/// Both sides of the polarization identity, entry by entry.
pub fn polarization_check(t: &OperatorTuple, x: &DVector<C64>, y: &DVector<C64>) -> Result<Polarization> {
    let lhs = t.pair_raw(x, y)?;
    let mut rhs = vec![C64::new(0.0, 0.0); t.len()];
    let mut ik = C64::new(1.0, 0.0);
    for _ in 0..4 {
        let z = x + y * ik;
        for (r, m) in rhs.iter_mut().zip(&t.ops) {
            *r += ik * z.dotc(&(m * &z)) * 0.25;
        }
        ik *= C64::new(0.0, 1.0);
    }
    let residual = lhs.entries().iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let max_op = t.ops.iter().map(crate::space::spectral_norm).fold(0.0, f64::max);
    Ok(Polarization { residual, scale: (x.norm() + y.norm()).powi(2) * max_op })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sandwich {
    /// `ω - ||T|| / 2`.
    pub lower_margin: f64,
    /// `||T|| - ω`.
    pub upper_margin: f64,
    pub tolerance: f64,
    pub holds: bool,
}

impl Sandwich {
    pub fn new(omega: f64, norm: f64, rel_tol: f64) -> Self {
        let tolerance = rel_tol * norm.max(1e-300);
        let lower_margin = omega - 0.5 * norm;
        let upper_margin = norm - omega;
        Sandwich { lower_margin, upper_margin, tolerance, holds: lower_margin >= -tolerance && upper_margin >= -tolerance }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailComparison {
    /// Uniform tails of the sampled `{<T x, x>}`.
    pub range_tails: Vec<TailPoint>,
    /// Uniform tails of the sampled `{<T x, y>}`.
    pub pair_tails: Vec<TailPoint>,
    pub range_certificates: Vec<Certificate>,
    pub pair_certificates: Vec<Certificate>,
}

/// Everything measured about one tuple.
#[derive(Clone, Debug, Serialize)]
pub struct RadiusReport {
    pub d: usize,
    pub n: usize,
    pub exponent: Exponent,
    pub omega: JointRadius,
    pub tuple_norm: TupleNorm,
    /// `|||T|||_p` from the dual-ball search in the matrix space.
    pub dual_ball_norm: f64,
    /// `|tuple_norm - dual_ball_norm| / tuple_norm`.
    pub sup_swap_gap: f64,
    pub single_radii: Vec<SingleRadius>,
    pub sandwich: Sandwich,
    pub duality: DualityReport,
    pub tails: Option<TailComparison>,
    pub sample_points: usize,
    pub criteria: &'static str,
}

/// Relative slack allowed in the numerical-radius sandwich.
pub const SANDWICH_TOL: f64 = 1e-3;

const RADIUS_CRITERIA: &str = "sandwich: ||T||/2 <= omega <= ||T|| with slack 1e-3 relative; duality gap is \
|omega - sup_beta w(T beta)| / omega; at finite d every tuple is compact, so tails are reported, not classified";

impl RadiusReport {
    /// Folds sampled range points into the radius estimate: any sample with a
    /// larger `p`-norm becomes the new witness.
    pub fn absorb(&mut self, sample: &RangeSample) {
        for (u, x) in sample.points.iter().zip(&sample.witnesses) {
            let v = u.p_norm(self.exponent);
            if v > self.omega.value {
                self.omega.value = v;
                self.omega.witness = gauge_fixed(x);
            }
        }
        self.sample_points += sample.points.len();
        self.sandwich = Sandwich::new(self.omega.value, self.tuple_norm.value, SANDWICH_TOL);
    }
}

/// Runs every estimator on `t`. With `samples > 0`, that many range and pair
/// points are drawn, absorbed into `ω`, and their tails compared on `epsilons`.
pub fn analyze(t: &OperatorTuple, opts: &SearchOptions, samples: usize, epsilons: &[f64]) -> Result<RadiusReport> {
    let omega = joint_numerical_radius(t, opts);
    let tuple_norm = operator_tuple_norm(t, opts);
    let dual = diagonal::triple_norm(&t.as_operator_seq(), opts)?.value;
    let duality = radius::duality_against(t, omega.value, opts);
    let single_radii = t.ops.iter().map(single_numerical_radius).collect();
    let sandwich = Sandwich::new(omega.value, tuple_norm.value, SANDWICH_TOL);
    let mut report = RadiusReport {
        d: t.d,
        n: t.len(),
        exponent: t.p,
        sup_swap_gap: (tuple_norm.value - dual).abs() / tuple_norm.value.max(f64::MIN_POSITIVE),
        omega,
        tuple_norm,
        dual_ball_norm: dual,
        single_radii,
        sandwich,
        duality,
        tails: None,
        sample_points: 0,
        criteria: RADIUS_CRITERIA,
    };
    if samples > 0 {
        let range = numerical_range_sample(t, samples, opts.seed);
        let pairs = pair_sample(t, samples, opts.seed ^ 0x9a17);
        let rf = range.as_family();
        let pf = pairs.as_family();
        report.tails = Some(TailComparison {
            range_tails: compactness::full_tail_profile(&rf, t.p)?,
            pair_tails: compactness::full_tail_profile(&pf, t.p)?,
            range_certificates: compactness::certificates(&rf, t.p, epsilons)?,
            pair_certificates: compactness::certificates(&pf, t.p, epsilons)?,
        });
        report.absorb(&range);
    }
    Ok(report)
}

/// Input file layout: `{d, p, operators: [[row-major entries], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TupleInput {
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Exponent>,
    pub operators: Vec<Vec<JsonComplex>>,
}

impl TupleInput {
    /// `p` overrides the file's exponent; the default is 2.
    pub fn build(&self, p: Option<Exponent>) -> Result<OperatorTuple> {
        let ops = self
            .operators
            .iter()
            .map(|e| {
                repr::matrix_from_json(self.d, e)
                    .ok_or(Error::DimensionMismatch { expected: self.d * self.d, found: e.len() })
            })
            .collect::<Result<Vec<_>>>()?;
        OperatorTuple::new(ops, p.or(self.p).unwrap_or(Exponent::TWO))
    }

    pub fn from_tuple(t: &OperatorTuple) -> Self {
        TupleInput { d: t.d, p: Some(t.p), operators: t.ops.iter().map(repr::matrix_to_json).collect() }
    }
}

#[cfg(test)]
mod tests;
