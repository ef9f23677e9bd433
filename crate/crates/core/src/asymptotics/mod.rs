//! Leading-order asymptotics `C_d(n) ~ K_d (d−1)^{dn} n^{(1−d)/2}` of the
//! cubical counts: exact verification of the smooth-point data at
//! `c = (1/(d−1), …)`, the constant `K_d`, and ratio diagnostics against
//! computed series.

mod constant;
mod isolation;
mod lattice;
mod minimality;
mod ratio;
mod report;
mod smooth_point;

pub use constant::{
    assemble_constant, leading_constant, leading_constant_with_precision, AsymptoticForm,
    ConstantExpr, DEFAULT_PRECISION,
};
pub use isolation::{check_isolation_identity, factored_form, kernel_diagonal, IsolationReport};
pub use lattice::{check_aperiodic, lattice_index};
pub use minimality::{check_minimality_samples, minimality_value, MinimalityReport, GRID};
pub use ratio::{
    ratio_diagnostics, ratio_diagnostics_with_precision, RatioRow, RatioTable, MISMATCH_THRESHOLD,
    MIN_TERMS,
};
pub use report::{
    growth_rate, verify_smooth_point, Check, CheckKind, SmoothPointReport, REQUIRED_AGREEMENT_BITS,
};
pub use smooth_point::{
    critical_coordinate, det_g_closed_form, evaluate_partials, hessian_from_partials,
    hessian_quantities, is_critical, kernel_factor_at_c, l0_closed_form, l0_from_partials,
    partials_at_c, partials_closed_form, q_closed_form, verify_on_variety, HessianQuantities,
    Partials,
};
