//! Exact coefficients `a_d(m)` of `A_d = G_d / H_d` and the cubical diagonal
//! `C_d(n) = a_d(n, …, n)`.

pub mod cache;
mod kernel;
mod multi_index;
pub mod polynomial;
mod product;

pub use kernel::{
    cubical_series, cubical_series_with_budget, gf_coefficients, gf_coefficients_with_budget,
    CoefficientTable, DEFAULT_MEMORY_BUDGET, MAX_DIMENSION,
};
pub use multi_index::MultiIndex;
pub use polynomial::{build_denominator, elementary_symmetric, SparsePolynomial};
pub use product::tuple_count_product;
