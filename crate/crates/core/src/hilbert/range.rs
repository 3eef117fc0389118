use nalgebra::DVector;
use serde::Serialize;

use super::OperatorTuple;
use crate::compactness::Family;
use crate::random;
use crate::seq::ScalarSeq;
use crate::C64;

/// Sampled points `<T x, y>` with the unit vectors producing them. For the
/// numerical range `y = x` and `partners` is empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RangeSample {
    pub seed: u64,
    pub points: Vec<ScalarSeq>,
    #[serde(serialize_with = "vectors")]
    pub witnesses: Vec<DVector<C64>>,
    #[serde(serialize_with = "vectors", skip_serializing_if = "Vec::is_empty")]
    pub partners: Vec<DVector<C64>>,
}

fn vectors<S: serde::Serializer>(v: &[DVector<C64>], s: S) -> Result<S::Ok, S::Error> {
    let flat: Vec<Vec<crate::repr::JsonComplex>> = v.iter().map(|x| crate::repr::to_json_vec(x.as_slice())).collect();
    flat.serialize(s)
}

impl RangeSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn as_family(&self) -> Family {
        Family::new("numerical range sample", self.points.clone()).expect("samples are non-empty")
    }

    /// Column names of [`RangeSample::rows`].
    pub fn header(&self) -> Vec<String> {
        let n = self.points.first().map_or(0, ScalarSeq::support);
        let d = self.witnesses.first().map_or(0, |x| x.len());
        let mut h = vec!["index".to_string()];
        for i in 1..=n {
            h.push(format!("u{i}_re"));
            h.push(format!("u{i}_im"));
        }
        for (prefix, present) in [("x", true), ("y", !self.partners.is_empty())] {
            if present {
                for k in 1..=d {
                    h.push(format!("{prefix}{k}_re"));
                    h.push(format!("{prefix}{k}_im"));
                }
            }
        }
        h
    }

    /// One row per point: the coordinates, then the witness (and partner).
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.points.len())
            .map(|k| {
                let mut row = vec![k as f64];
                let parts = self.points[k].entries().iter().chain(self.witnesses[k].iter());
                let parts: Box<dyn Iterator<Item = &C64>> = match self.partners.get(k) {
                    Some(y) => Box::new(parts.chain(y.iter())),
                    None => Box::new(parts),
                };
                for z in parts {
                    row.push(z.re);
                    row.push(z.im);
                }
                row
            })
            .collect()
    }
}

/// `count` points `<T x, x>` for `x` uniform on the unit sphere.
pub fn numerical_range_sample(t: &OperatorTuple, count: usize, seed: u64) -> RangeSample {
    let mut rng = random::rng(seed);
    let witnesses: Vec<DVector<C64>> = (0..count.max(1)).map(|_| random::unit_vector(&mut rng, t.dim())).collect();
    let points = witnesses.iter().map(|x| t.pair_raw(x, x).expect("dimensions match")).collect();
    RangeSample { seed, points, witnesses, partners: Vec::new() }
}

/// `count` points `<T x, y>` for independent uniform unit `x, y`.
pub fn pair_sample(t: &OperatorTuple, count: usize, seed: u64) -> RangeSample {
    let mut rng = random::rng(seed);
    let mut witnesses = Vec::with_capacity(count);
    let mut partners = Vec::with_capacity(count);
    for _ in 0..count.max(1) {
        witnesses.push(random::unit_vector(&mut rng, t.dim()));
        partners.push(random::unit_vector(&mut rng, t.dim()));
    }
    let points = witnesses.iter().zip(&partners).map(|(x, y)| t.pair_raw(x, y).expect("dimensions match")).collect();
    RangeSample { seed, points, witnesses, partners }
}
