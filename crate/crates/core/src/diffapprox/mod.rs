//! Differential approximants: exact fits of `Σ_k Q_k(x) F^{(k)}(x) = P(x)` to
//! a truncated series, singularities from the roots of `Q_K`, and pooling of
//! the estimates across a family of approximant shapes.

mod analysis;
mod approximant;
mod family;
mod pool;

pub use analysis::{exponent_at, singularities, singularities_with_exponents, SingularityEstimate, DEFAULT_PRECISION};
pub use approximant::{fit_approximant, DifferentialApproximant, Shape};
pub use family::{analyze_series, balanced_shape, describe, family_shapes, fit_family, FamilyConfig, FamilyReport, FitOutcome};
pub use pool::{
    estimate_json, pool_estimates, pool_roots, subdominance_report, ExpectedCheck, SubdominanceReport,
    DEFAULT_CLUSTER_RADIUS,
};
