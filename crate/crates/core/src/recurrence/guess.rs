use rug::Integer;

use super::prec::{verify_recurrence, PRecurrence};
use crate::error::{Error, Result};
use crate::numeric::bareiss::nullspace_vector;
use crate::numeric::RatPoly;

/// Equations required beyond the number of unknowns before a fit is accepted.
pub const OVERDETERMINATION_MARGIN: usize = 10;

/// Number of terms needed to search up to `(max_order, max_degree)`.
pub fn required_terms(max_order: usize, max_degree: usize) -> usize {
    (max_order + 1) * (max_degree + 1) + OVERDETERMINATION_MARGIN + max_order
}

fn ansatz_matrix(terms: &[Integer], order: usize, degree: usize, powers: &[Vec<Integer>]) -> Vec<Vec<Integer>> {
    (order..terms.len())
        .map(|n| {
            let mut row = Vec::with_capacity((order + 1) * (degree + 1));
            for i in 0..=order {
                let a = &terms[n - i];
                for p in powers[n].iter().take(degree + 1) {
                    row.push(Integer::from(a * p));
                }
            }
            row
        })
        .collect()
}

/// Searches for `Σ_{i=0}^k p_i(n) a(n−i) = 0` with `deg p_i ≤ D`, trying
/// orders `k = 0, 1, …` and within each order increasing `D`. The first
/// nontrivial fit is returned; `None` if nothing up to the bounds fits.
pub fn guess_p_recurrence(terms: &[Integer], max_order: usize, max_degree: usize) -> Result<Option<PRecurrence>> {
    let need = required_terms(max_order, max_degree);
    if terms.len() < need {
        return Err(Error::domain(format!(
            "guessing up to order {max_order} and degree {max_degree} requires at least {need} terms, got {}",
            terms.len()
        )));
    }
    let powers: Vec<Vec<Integer>> = (0..terms.len())
        .map(|n| {
            let mut v = Vec::with_capacity(max_degree + 1);
            let mut p = Integer::from(1);
            for _ in 0..=max_degree {
                v.push(p.clone());
                p *= n as u64;
            }
            v
        })
        .collect();
    for order in 0..=max_order {
        for degree in 0..=max_degree {
            let unknowns = (order + 1) * (degree + 1);
            let rows = ansatz_matrix(terms, order, degree, &powers);
            debug_assert!(rows.len() >= unknowns + OVERDETERMINATION_MARGIN);
            let Some(v) = nullspace_vector(rows, unknowns) else {
                continue;
            };
            let coeffs: Vec<RatPoly> = v
                .chunks(degree + 1)
                .map(|c| RatPoly::from_integers(c.iter().cloned()))
                .collect();
            if coeffs[0].is_zero() {
                continue;
            }
            let rec = PRecurrence::new(coeffs, order)?;
            if !verify_recurrence(&rec, terms)? {
                return Err(Error::consistency("nullspace vector does not annihilate the data"));
            }
            log::debug!("recurrence of order {order}, degree {degree} found");
            return Ok(Some(rec));
        }
    }
    Ok(None)
}
