use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::{self, SeededRng};
use crate::repr::JsonComplex;
use crate::seq::p_norm_of;
use crate::seq::Exponent;
use crate::space::cn::{from_params, to_params};
use crate::space::{SpaceDescriptor, TargetSpace};
use crate::C64;

/// A labelled point of a finite metric grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub label: String,
    pub coords: Vec<f64>,
}

impl GridPoint {
    pub fn new(label: impl Into<String>, coords: Vec<f64>) -> Self {
        GridPoint { label: label.into(), coords }
    }

    pub fn distance(&self, other: &GridPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl<'de> Deserialize<'de> for GridPoint {
    /// Accepts `{label, coords}`, a bare coordinate, or a coordinate array.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Full { label: Option<String>, coords: Vec<f64> },
            Scalar(f64),
            Coords(Vec<f64>),
        }
        let (label, coords) = match Raw::deserialize(d)? {
            Raw::Full { label, coords } => (label, coords),
            Raw::Scalar(x) => (None, vec![x]),
            Raw::Coords(c) => (None, c),
        };
        let label = label.unwrap_or_else(|| {
            coords.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(",")
        });
        Ok(GridPoint { label, coords })
    }
}

/// A finite atomic measure `sum_j w_j δ_{s_j}` on grid points, acting by
/// `f -> sum_j w_j f(s_j)`. Its dual norm is the total variation `sum |w_j|`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure {
    pub atoms: Vec<Atom>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: usize,
    pub weight: JsonComplex,
}

impl AtomicMeasure {
    /// The unimodular point mass `c δ_s`.
    pub fn point_mass(point: usize, phase: C64) -> Self {
        AtomicMeasure { atoms: vec![Atom { point, weight: JsonComplex(phase) }] }
    }

    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight.0.norm()).sum()
    }

    fn dense(&self, len: usize) -> Vec<C64> {
        let mut w = vec![C64::new(0.0, 0.0); len];
        for a in &self.atoms {
            w[a.point] += a.weight.0;
        }
        w
    }

    fn from_dense(w: &[C64]) -> Self {
        AtomicMeasure {
            atoms: w
                .iter()
                .enumerate()
                .filter(|(_, z)| z.norm() > 0.0)
                .map(|(point, &z)| Atom { point, weight: JsonComplex(z) })
                .collect(),
        }
    }
}

/// Continuous functions on a finite grid, `C(Ω)` with the sup norm. Elements
/// are value tables indexed like the grid's points.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunctions {
    points: Vec<GridPoint>,
}

impl GridFunctions {
    pub fn new(points: Vec<GridPoint>) -> Self {
        GridFunctions { points }
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the point with the given label.
    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p.label == label)
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    fn normalize(w: &mut [C64]) {
        let tv = p_norm_of(w, Exponent::ONE);
        if tv > 0.0 {
            w.iter_mut().for_each(|z| *z /= tv);
        }
    }
}

impl TargetSpace for GridFunctions {
    type Element = Vec<C64>;
    type Functional = AtomicMeasure;

    fn descriptor(&self) -> SpaceDescriptor {
        SpaceDescriptor::Cgrid { points: self.points.clone() }
    }

    fn check(&self, a: &Vec<C64>) -> Result<()> {
        Error::check_dim(self.points.len(), a.len())
    }

    fn zero(&self) -> Vec<C64> {
        vec![C64::new(0.0, 0.0); self.points.len()]
    }

    fn norm(&self, a: &Vec<C64>) -> Result<f64> {
        self.check(a)?;
        Ok(p_norm_of(a, Exponent::Infinity))
    }

    fn combine(&self, coeffs: &[C64], terms: &[Vec<C64>]) -> Vec<C64> {
        let mut out = self.zero();
        for (c, t) in coeffs.iter().zip(terms) {
            for (o, v) in out.iter_mut().zip(t) {
                *o += c * v;
            }
        }
        out
    }

    fn dual_apply(&self, phi: &AtomicMeasure, a: &Vec<C64>) -> Result<C64> {
        self.check(a)?;
        phi.atoms
            .iter()
            .map(|atom| {
                a.get(atom.point)
                    .map(|v| atom.weight.0 * v)
                    .ok_or(Error::DimensionMismatch { expected: a.len(), found: atom.point + 1 })
            })
            .sum()
    }

    fn dual_norm(&self, phi: &AtomicMeasure) -> f64 {
        phi.total_variation()
    }

    fn zero_functional(&self) -> AtomicMeasure {
        AtomicMeasure::default()
    }

    fn norming_functional(&self, a: &Vec<C64>) -> AtomicMeasure {
        let (k, v) = a
            .iter()
            .enumerate()
            .fold((0, 0.0), |(bk, bv), (i, z)| if z.norm() > bv { (i, z.norm()) } else { (bk, bv) });
        if v == 0.0 {
            return AtomicMeasure::default();
        }
        AtomicMeasure::point_mass(k, a[k].conj() / v)
    }

    fn extreme_slate(&self) -> Vec<AtomicMeasure> {
        (0..self.points.len()).map(|k| AtomicMeasure::point_mass(k, C64::new(1.0, 0.0))).collect()
    }

    fn random_functional(&self, rng: &mut SeededRng) -> AtomicMeasure {
        let k = self.points.len();
        if k == 0 {
            return AtomicMeasure::default();
        }
        let atoms = 1 + (random::uniform(rng, 0.0, 3.0) as usize).min(k - 1);
        let mut w = vec![C64::new(0.0, 0.0); k];
        for _ in 0..atoms {
            let s = (random::uniform(rng, 0.0, k as f64) as usize).min(k - 1);
            w[s] += random::gaussian(rng);
        }
        Self::normalize(&mut w);
        AtomicMeasure::from_dense(&w)
    }

    fn functional_params(&self, phi: &AtomicMeasure) -> Vec<f64> {
        to_params(&phi.dense(self.points.len()))
    }

    fn project_params(&self, _template: &AtomicMeasure, params: &mut [f64]) {
        let mut w = from_params(params);
        Self::normalize(&mut w);
        params.copy_from_slice(&to_params(&w));
    }

    fn functional_from_params(&self, _template: &AtomicMeasure, params: &[f64]) -> AtomicMeasure {
        let mut w = from_params(params);
        Self::normalize(&mut w);
        AtomicMeasure::from_dense(&w)
    }

    fn random_element(&self, rng: &mut SeededRng) -> Vec<C64> {
        random::gaussian_vec(rng, self.points.len())
    }
}
