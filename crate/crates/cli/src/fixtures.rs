//! Built-in instance files, written by `dualshadow fixture NAME`.

use dualshadow::cfun::{fixtures as grid_fixtures, CfunInput};
use dualshadow::diagonal::SequenceInput;
use dualshadow::hilbert::{OperatorTuple, TupleInput};
use dualshadow::space::SpaceDescriptor;
use dualshadow::{Exponent, C64};
use nalgebra::DMatrix;
use serde_json::Value;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `a_i = w(i) e_i` in `C^n` with the Euclidean norm.
fn weighted_basis(n: usize, weight: impl Fn(usize) -> f64) -> SequenceInput {
    let terms: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            let mut v = vec![re(0.0); n];
            v[i] = re(weight(i + 1));
            v
        })
        .collect();
    SequenceInput::new(SpaceDescriptor::Cn { n, r: Exponent::TWO }, Some(Exponent::TWO), &terms)
}

fn tuple(entries: &[[f64; 4]]) -> TupleInput {
    let ops = entries.iter().map(|e| DMatrix::from_row_slice(2, 2, &e.map(re))).collect();
    TupleInput::from_tuple(&OperatorTuple::new(ops, Exponent::TWO).expect("fixtures are well formed"))
}

pub const SEQUENCES: &[&str] = &["basis", "harmonic", "zero"];
pub const TUPLES: &[&str] = &["nilpotent", "identity-pair", "shift-pair"];

pub fn names() -> Vec<&'static str> {
    let mut out: Vec<&str> = SEQUENCES.iter().chain(TUPLES).copied().collect();
    out.extend(grid_fixtures::shipped().into_iter().map(|(name, _)| name));
    out
}

/// The named instance as JSON, or `None` for an unknown name.
pub fn fixture(name: &str) -> Option<Value> {
    let value = match name {
        "basis" => serde_json::to_value(weighted_basis(20, |_| 1.0)),
        "harmonic" => serde_json::to_value(weighted_basis(100, |i| 1.0 / (i as f64).sqrt())),
        "zero" => serde_json::to_value(SequenceInput::new(
            SpaceDescriptor::Cn { n: 3, r: Exponent::TWO },
            Some(Exponent::TWO),
            &vec![vec![re(0.0); 3]; 5],
        )),
        "nilpotent" => serde_json::to_value(tuple(&[[0.0, 1.0, 0.0, 0.0]])),
        "identity-pair" => serde_json::to_value(tuple(&[[1.0, 0.0, 0.0, 1.0]; 2])),
        "shift-pair" => serde_json::to_value(tuple(&[[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]])),
        _ => {
            let (_, f) = grid_fixtures::shipped().into_iter().find(|(n, _)| *n == name)?;
            serde_json::to_value(CfunInput::from_seq(&f))
        }
    };
    Some(value.expect("fixtures serialize"))
}
