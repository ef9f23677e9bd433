//! P-recursive sequences: guessing recurrences from exact terms, checking and
//! extending them, and reading candidate growth rates off the characteristic
//! polynomial.

mod growth;
mod guess;
mod prec;

pub use growth::{
    characteristic_polynomial, growth_candidates, growth_candidates_with_precision, GrowthCandidates,
    GROWTH_PRECISION,
};
pub use guess::{guess_p_recurrence, required_terms, OVERDETERMINATION_MARGIN};
pub use prec::{extend_series, verify_recurrence, PRecurrence};
