//! JSON representations shared by every file format: complex numbers are
//! `[re, im]` pairs (a bare number is accepted as a real value on input) and
//! matrices are row-major arrays of such pairs.

use nalgebra::{DMatrix, DVector};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::C64;

#[derive(Deserialize)]
#[serde(untagged)]
enum ComplexIn {
    Pair([f64; 2]),
    Real(f64),
}

impl From<ComplexIn> for C64 {
    fn from(c: ComplexIn) -> Self {
        match c {
            ComplexIn::Pair([re, im]) => C64::new(re, im),
            ComplexIn::Real(re) => C64::new(re, 0.0),
        }
    }
}

/// A complex number with the `[re, im]` wire format.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JsonComplex(pub C64);

impl Serialize for JsonComplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for JsonComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        ComplexIn::deserialize(d).map(|c| JsonComplex(c.into()))
    }
}

pub fn to_json_vec(values: &[C64]) -> Vec<JsonComplex> {
    values.iter().copied().map(JsonComplex).collect()
}

pub fn from_json_vec(values: &[JsonComplex]) -> Vec<C64> {
    values.iter().map(|c| c.0).collect()
}

/// `serde(with = "...")` adapter for `Vec<C64>` fields.
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
        to_json_vec(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let v = Vec::<JsonComplex>::deserialize(d)?;
        Ok(from_json_vec(&v))
    }
}

/// `serde(with = "...")` adapter for complex column vectors.
pub mod complex_dvector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &DVector<C64>, s: S) -> Result<S::Ok, S::Error> {
        to_json_vec(v.as_slice()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DVector<C64>, D::Error> {
        let v = Vec::<JsonComplex>::deserialize(d)?;
        Ok(DVector::from_vec(from_json_vec(&v)))
    }
}

/// Flattens a `d x d` matrix into row-major `[re, im]` pairs.
pub fn matrix_to_json(m: &DMatrix<C64>) -> Vec<JsonComplex> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.push(JsonComplex(m[(r, c)]));
        }
    }
    out
}

/// Rebuilds a square matrix from row-major pairs. Returns `None` when the
/// entry count is not `d * d`.
pub fn matrix_from_json(d: usize, entries: &[JsonComplex]) -> Option<DMatrix<C64>> {
    (entries.len() == d * d).then(|| DMatrix::from_row_iterator(d, d, entries.iter().map(|c| c.0)))
}

/// `serde(with = "...")` adapter for square matrices.
pub mod square_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &DMatrix<C64>, s: S) -> Result<S::Ok, S::Error> {
        matrix_to_json(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<C64>, D::Error> {
        let v = Vec::<JsonComplex>::deserialize(d)?;
        let dim = (v.len() as f64).sqrt().round() as usize;
        matrix_from_json(dim, &v)
            .ok_or_else(|| D::Error::custom(format!("{} entries is not a square matrix", v.len())))
    }
}
