//! Exact computation and analysis of the counting sequence `C_d(n)` of simple
//! singular vector tuples of generic cubical `n × ⋯ × n` tensors.
//!
//! The crate is split into:
//!
//! * [`series`]: the coefficients `a_d(m)` of the rational generating function
//!   `A_d = G_d / H_d`, computed by a symmetry-reduced kernel recurrence and
//!   cross-checked against the product-formula expansion.
//! * [`asymptotics`]: exact verification of the smooth critical point
//!   `c = (1/(d-1), …, 1/(d-1))` and the leading asymptotic constant.
//! * [`recurrence`]: guessing, checking and extending P-recurrences.
//! * [`diffapprox`]: differential approximants and singularity pooling.
//! * [`cli`]: the `diagasym` command-line front end.

pub mod asymptotics;
pub mod cli;
pub mod diffapprox;
pub mod error;
pub mod numeric;
pub mod recurrence;
pub mod series;

pub use error::{Error, Result};
