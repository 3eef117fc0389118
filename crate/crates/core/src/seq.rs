//! Finite-support complex sequences: `p`-norms for `p` in `[1, inf]`, the
//! bilinear pairing between `l^p` and `l^q`, and its exact extremizers.
//!
//! Every entry past the stored support is implicitly zero, so sequences of
//! different lengths combine by zero padding.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::repr::JsonComplex;
use crate::C64;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        iter.into_iter().for_each(|x| s.add(x));
        s
    }
}

/// Compensated sum of complex terms (real and imaginary parts separately).
pub fn complex_sum<I: IntoIterator<Item = C64>>(iter: I) -> C64 {
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for z in iter {
        re.add(z.re);
        im.add(z.im);
    }
    C64::new(re.value(), im.value())
}

/// A finite exponent `1 <= p < inf` stored together with its conjugate so that
/// conjugation is an exact involution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiniteExponent {
    p: f64,
    /// `None` encodes the conjugate `inf` of `p = 1`.
    q: Option<f64>,
}

impl FiniteExponent {
    pub fn p(&self) -> f64 {
        self.p
    }
}

/// An exponent `p` in `[1, inf]`. Infinity is a distinct variant, never a
/// float sentinel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(FiniteExponent),
    Infinity,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(FiniteExponent { p: 1.0, q: None });
    pub const TWO: Exponent = Exponent::Finite(FiniteExponent { p: 2.0, q: Some(2.0) });
    pub const INFINITY: Exponent = Exponent::Infinity;

    /// Builds a finite exponent; `f64::INFINITY` maps to [`Exponent::Infinity`].
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            return Ok(Exponent::Infinity);
        }
        if !p.is_finite() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        let q = if p == 1.0 { None } else { Some(p / (p - 1.0)) };
        Ok(Exponent::Finite(FiniteExponent { p, q }))
    }

    /// The Hölder conjugate `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::ONE,
            Exponent::Finite(FiniteExponent { q: None, .. }) => Exponent::Infinity,
            Exponent::Finite(FiniteExponent { p, q: Some(q) }) => {
                Exponent::Finite(FiniteExponent { p: q, q: Some(p) })
            }
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(f) => Some(f.p),
            Exponent::Infinity => None,
        }
    }

    /// `p` as an `f64`, with `f64::INFINITY` for the infinite variant. Only
    /// for display and serialization.
    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    /// True for `1 < p < inf`.
    pub fn is_interior(self) -> bool {
        matches!(self, Exponent::Finite(FiniteExponent { q: Some(_), .. }))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => write!(f, "{}", e.p),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            _ => {
                let p = match t.split_once('/') {
                    Some((n, d)) => {
                        let n: f64 = n.trim().parse().map_err(|_| Error::InvalidExponent(f64::NAN))?;
                        let d: f64 = d.trim().parse().map_err(|_| Error::InvalidExponent(f64::NAN))?;
                        n / d
                    }
                    None => t.parse().map_err(|_| Error::InvalidExponent(f64::NAN))?,
                };
                Exponent::new(p)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(e) => s.serialize_f64(e.p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Exponent::new(p).map_err(D::Error::custom),
            Raw::Text(t) => t.parse().map_err(D::Error::custom),
        }
    }
}

/// `l^p` norm of a slice.
///
/// Finite `p` is evaluated as `max * (sum (|x_i|/max)^p)^(1/p)` with a
/// compensated sum, so a single nonzero entry has its modulus as exact norm.
pub fn p_norm_of(x: &[C64], p: Exponent) -> f64 {
    let max = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    match p {
        Exponent::Infinity => max,
        Exponent::Finite(FiniteExponent { p: 1.0, .. }) => {
            x.iter().map(|z| z.norm()).collect::<CompensatedSum>().value()
        }
        Exponent::Finite(FiniteExponent { p, .. }) => {
            let s = x
                .iter()
                .map(|z| (z.norm() / max).powf(p))
                .collect::<CompensatedSum>()
                .value();
            max * s.powf(1.0 / p)
        }
    }
}

/// Same as [`p_norm_of`] for real magnitudes.
pub fn p_norm_of_reals(x: &[f64], p: Exponent) -> f64 {
    let max = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    match p {
        Exponent::Infinity => max,
        Exponent::Finite(FiniteExponent { p, .. }) => {
            let s = x
                .iter()
                .map(|v| (v.abs() / max).powf(p))
                .collect::<CompensatedSum>()
                .value();
            max * s.powf(1.0 / p)
        }
    }
}

/// A finite-support complex sequence standing for an element of `l^p` or `c_0`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScalarSeq {
    entries: Vec<C64>,
}

impl ScalarSeq {
    pub fn new(entries: Vec<C64>) -> Self {
        ScalarSeq { entries }
    }

    pub fn zeros(support: usize) -> Self {
        ScalarSeq { entries: vec![C64::new(0.0, 0.0); support] }
    }

    pub fn from_reals<I: IntoIterator<Item = f64>>(values: I) -> Self {
        ScalarSeq { entries: values.into_iter().map(|v| C64::new(v, 0.0)).collect() }
    }

    /// The standard basis vector `e_j` (1-based), with support `j`.
    pub fn basis(j: usize) -> Self {
        assert!(j >= 1, "basis vectors are 1-based");
        let mut s = ScalarSeq::zeros(j);
        s.entries[j - 1] = C64::new(1.0, 0.0);
        s
    }

    pub fn support(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    /// Entry `i` (0-based), zero past the support.
    pub fn get(&self, i: usize) -> C64 {
        self.entries.get(i).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| *z == C64::new(0.0, 0.0))
    }

    pub fn p_norm(&self, p: Exponent) -> f64 {
        p_norm_of(&self.entries, p)
    }

    /// `(sum_{i > m} |x_i|^p)^(1/p)` with 1-based indices, i.e. the norm of
    /// the entries after the first `m`.
    pub fn tail_norm(&self, m: usize, p: Exponent) -> f64 {
        p_norm_of(self.entries.get(m..).unwrap_or(&[]), p)
    }

    /// The first `n` entries.
    pub fn truncated(&self, n: usize) -> ScalarSeq {
        ScalarSeq::new(self.entries[..n.min(self.entries.len())].to_vec())
    }

    /// Entrywise difference with zero padding.
    pub fn sub(&self, other: &ScalarSeq) -> ScalarSeq {
        let n = self.support().max(other.support());
        ScalarSeq::new((0..n).map(|i| self.get(i) - other.get(i)).collect())
    }

    pub fn scale(&self, c: C64) -> ScalarSeq {
        ScalarSeq::new(self.entries.iter().map(|z| z * c).collect())
    }

    pub fn distance(&self, other: &ScalarSeq, p: Exponent) -> f64 {
        self.sub(other).p_norm(p)
    }

    /// Rescales to unit `p`-norm. Fails on the zero sequence.
    pub fn normalized(&self, p: Exponent) -> Result<ScalarSeq> {
        let n = self.p_norm(p);
        if n == 0.0 {
            return Err(Error::ZeroSequence);
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    /// The bilinear pairing `sum x_i y_i` (no conjugation), zero padded.
    pub fn pair(&self, other: &ScalarSeq) -> C64 {
        holder_pair(&self.entries, &other.entries)
    }
}

impl From<Vec<C64>> for ScalarSeq {
    fn from(entries: Vec<C64>) -> Self {
        ScalarSeq::new(entries)
    }
}

impl Serialize for ScalarSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::repr::to_json_vec(&self.entries).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScalarSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<JsonComplex>::deserialize(d)?;
        Ok(ScalarSeq::new(crate::repr::from_json_vec(&v)))
    }
}

/// `sum_i x_i y_i` over the common support.
pub fn holder_pair(x: &[C64], y: &[C64]) -> C64 {
    complex_sum(x.iter().zip(y).map(|(a, b)| a * b))
}

/// The unit-`q`-norm sequence `y` with `sum x_i y_i = ||x||_p`.
///
/// * `p` finite, `p > 1`: `y_i = conj(x_i) |x_i|^(p-2) / ||x||_p^(p-1)`.
/// * `p = 1`: the phase vector `conj(x_i)/|x_i|`.
/// * `p = inf`: a phase-adjusted basis vector at the first entry of maximal
///   modulus.
///
/// Entries where `x_i = 0` are zero in every case.
pub fn holder_extremizer(x: &ScalarSeq, p: Exponent) -> Result<ScalarSeq> {
    let norm = x.p_norm(p);
    if norm == 0.0 {
        return Err(Error::ZeroSequence);
    }
    let phase = |z: C64| if z.norm() == 0.0 { C64::new(0.0, 0.0) } else { z.conj() / z.norm() };
    let y = match p {
        Exponent::Infinity => {
            let (k, _) = x
                .entries()
                .iter()
                .enumerate()
                .fold((0, -1.0), |(bk, bv), (i, z)| if z.norm() > bv { (i, z.norm()) } else { (bk, bv) });
            let mut y = vec![C64::new(0.0, 0.0); x.support()];
            y[k] = phase(x.entries()[k]);
            y
        }
        Exponent::Finite(FiniteExponent { q: None, .. }) => x.entries().iter().map(|&z| phase(z)).collect(),
        Exponent::Finite(FiniteExponent { p, .. }) => x
            .entries()
            .iter()
            .map(|&z| phase(z) * (z.norm() / norm).powf(p - 1.0))
            .collect(),
    };
    Ok(ScalarSeq::new(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn grid() -> Vec<Exponent> {
        ["1", "4/3", "2", "3", "inf"].iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn conjugates() {
        assert_eq!(Exponent::TWO.conjugate(), Exponent::TWO);
        assert_eq!(Exponent::ONE.conjugate(), Exponent::Infinity);
        assert_eq!(Exponent::Infinity.conjugate(), Exponent::ONE);
        let four = Exponent::new(4.0).unwrap();
        assert_eq!(four.conjugate().finite(), Some(4.0 / 3.0));
        for p in grid() {
            assert_eq!(p.conjugate().conjugate(), p);
        }
        assert_eq!(Exponent::new(f64::INFINITY).unwrap(), Exponent::Infinity);
        assert!(Exponent::new(0.5).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
    }

    #[test]
    fn parse_exponent() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("4/3".parse::<Exponent>().unwrap().finite(), Some(4.0 / 3.0));
        let e: Exponent = serde_json::from_str("\"inf\"").unwrap();
        assert!(e.is_infinite());
        let e: Exponent = serde_json::from_str("2").unwrap();
        assert_eq!(e, Exponent::TWO);
        assert!(serde_json::from_str::<Exponent>("0.3").is_err());
    }

    #[test]
    fn norm_examples() {
        for p in grid() {
            assert_eq!(ScalarSeq::zeros(5).p_norm(p), 0.0);
            assert_eq!(ScalarSeq::default().p_norm(p), 0.0);
        }
        assert_eq!(ScalarSeq::from_reals([1.0; 4]).p_norm(Exponent::TWO), 2.0);
        let geo = ScalarSeq::from_reals((0..20).map(|k| 0.5f64.powi(k)));
        assert_abs_diff_eq!(geo.p_norm(Exponent::ONE), 2.0 - 2f64.powi(-19), epsilon = 1e-15);
        assert_eq!(ScalarSeq::from_reals([-3.0, 2.0]).p_norm(Exponent::Infinity), 3.0);
    }

    #[test]
    fn pairing_examples() {
        let e3 = ScalarSeq::basis(3);
        let y = ScalarSeq::from_reals([5.0, 6.0, 7.0]);
        assert_eq!(e3.pair(&y), c(7.0, 0.0));
        let x = ScalarSeq::new(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let y = ScalarSeq::new(vec![c(0.0, 1.0), c(1.0, 0.0)]);
        assert_eq!(x.pair(&y), c(0.0, 2.0));
    }

    #[test]
    fn extremizer_examples() {
        let y = holder_extremizer(&ScalarSeq::from_reals([3.0, 4.0]), Exponent::TWO).unwrap();
        assert_abs_diff_eq!(y.get(0).re, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(y.get(1).re, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(ScalarSeq::from_reals([3.0, 4.0]).pair(&y).re, 5.0, epsilon = 1e-14);

        let x = ScalarSeq::from_reals([1.0, 1.0]);
        let y = holder_extremizer(&x, Exponent::ONE).unwrap();
        assert_eq!(y, ScalarSeq::from_reals([1.0, 1.0]));
        assert_eq!(y.p_norm(Exponent::Infinity), 1.0);
        assert_eq!(x.pair(&y), c(2.0, 0.0));

        assert_eq!(holder_extremizer(&ScalarSeq::zeros(3), Exponent::TWO), Err(Error::ZeroSequence));

        // zero entries get zero weight
        let x = ScalarSeq::from_reals([0.0, 2.0, 0.0]);
        let y = holder_extremizer(&x, Exponent::new(3.0).unwrap()).unwrap();
        assert_eq!(y.get(0), c(0.0, 0.0));
        assert_eq!(y.get(2), c(0.0, 0.0));
    }

    #[test]
    fn extremizer_beats_random_dual_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = Exponent::new(3.0).unwrap();
        let q = p.conjugate();
        let x = ScalarSeq::new((0..6).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect());
        let y = holder_extremizer(&x, p).unwrap();
        let pairing = x.pair(&y);
        assert!((pairing.re - x.p_norm(p)).abs() < 1e-12);
        assert!(pairing.im.abs() < 1e-12);
        assert!((y.p_norm(q) - 1.0).abs() < 1e-12);
        for _ in 0..10_000 {
            let z = ScalarSeq::new((0..6).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect());
            let z = z.normalized(q).unwrap();
            assert!(x.pair(&z).norm() <= pairing.re + 1e-12);
        }
    }

    #[test]
    fn json_roundtrip_format() {
        let x = ScalarSeq::new(vec![c(1.0, -2.0), c(0.5, 0.0)]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[[1.0,-2.0],[0.5,0.0]]");
        let back: ScalarSeq = serde_json::from_str("[[1.0,-2.0],0.5]").unwrap();
        assert_eq!(back, x);
    }

    fn seq_strategy(max_len: usize) -> impl Strategy<Value = ScalarSeq> {
        prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 0..max_len)
            .prop_map(|v| ScalarSeq::new(v.into_iter().map(|(a, b)| c(a, b)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn holder_inequality(x in seq_strategy(12), y in seq_strategy(12)) {
            for p in grid() {
                let bound = x.p_norm(p) * y.p_norm(p.conjugate());
                prop_assert!(x.pair(&y).norm() <= bound * (1.0 + 1e-12) + 1e-12);
            }
        }

        #[test]
        fn extremal_tightness(x in seq_strategy(12)) {
            prop_assume!(!x.is_zero());
            for p in grid() {
                let y = holder_extremizer(&x, p).unwrap();
                let n = x.p_norm(p);
                prop_assert!((x.pair(&y) - C64::new(n, 0.0)).norm() <= 1e-12 * n.max(1.0));
                prop_assert!((y.p_norm(p.conjugate()) - 1.0).abs() <= 1e-12);
            }
        }

        #[test]
        fn norm_nonincreasing_in_p(x in seq_strategy(12)) {
            let norms: Vec<f64> = grid().into_iter().map(|p| x.p_norm(p)).collect();
            for w in norms.windows(2) {
                prop_assert!(w[0] >= w[1] * (1.0 - 1e-12));
            }
        }

        #[test]
        fn truncation_never_increases(x in seq_strategy(12), k in 0usize..12) {
            for p in grid() {
                prop_assert!(x.truncated(k).p_norm(p) <= x.p_norm(p) * (1.0 + 1e-14));
            }
        }
    }
}
