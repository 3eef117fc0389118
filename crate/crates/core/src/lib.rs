//! Diagonal operators `β -> sum β_i a_i` from `l^q` into a Banach space,
//! their dual-shadow norms, uniform tail (total boundedness) certificates,
//! and joint numerical ranges of operator tuples on `C^d`.
//!
//! Everything is finite: sequences have finite support, suprema over unit
//! balls are estimated by seeded multistart searches that return attained
//! values (lower bounds), and compactness is reported through how tail
//! cutoffs grow as the tolerance shrinks.

pub mod cfun;
pub mod compactness;
pub mod diagonal;
pub mod error;
pub mod hilbert;
pub mod optim;
pub mod random;
pub mod repr;
pub mod seq;
pub mod space;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use seq::{Exponent, ScalarSeq};
