//! Input file layout for operator sequences: a flattened space descriptor,
//! an optional exponent, and one entry of `terms` per `a_i`. Vectors and grid
//! functions list their values; matrices are row-major.

use serde::{Deserialize, Serialize};

use super::OperatorSeq;
use crate::error::{Error, Result};
use crate::repr::{self, JsonComplex};
use crate::seq::Exponent;
use crate::space::{ComplexLr, GridFunctions, MatrixSpace, SpaceDescriptor};
use crate::C64;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceInput {
    #[serde(flatten)]
    pub space: SpaceDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Exponent>,
    pub terms: Vec<Vec<JsonComplex>>,
}

/// An operator sequence in whichever space the input named.
#[derive(Clone, Debug)]
pub enum AnySeq {
    Cn(OperatorSeq<ComplexLr>),
    Grid(OperatorSeq<GridFunctions>),
    Mat(OperatorSeq<MatrixSpace>),
}

impl SequenceInput {
    pub fn new(space: SpaceDescriptor, p: Option<Exponent>, terms: &[Vec<C64>]) -> Self {
        SequenceInput { space, p, terms: terms.iter().map(|t| repr::to_json_vec(t)).collect() }
    }

    /// `p` overrides the file's exponent; the default is 2.
    pub fn build(&self, p: Option<Exponent>) -> Result<AnySeq> {
        let p = p.or(self.p).unwrap_or(Exponent::TWO);
        let flat = || self.terms.iter().map(|t| repr::from_json_vec(t)).collect::<Vec<_>>();
        match &self.space {
            SpaceDescriptor::Cn { n, r } => OperatorSeq::new(ComplexLr::new(*n, *r), flat(), p).map(AnySeq::Cn),
            SpaceDescriptor::Cgrid { points } => {
                OperatorSeq::new(GridFunctions::new(points.clone()), flat(), p).map(AnySeq::Grid)
            }
            SpaceDescriptor::Mat { d } => {
                let terms = self
                    .terms
                    .iter()
                    .map(|t| repr::matrix_from_json(*d, t).ok_or(Error::DimensionMismatch { expected: d * d, found: t.len() }))
                    .collect::<Result<Vec<_>>>()?;
                OperatorSeq::new(MatrixSpace::new(*d), terms, p).map(AnySeq::Mat)
            }
        }
    }
}
