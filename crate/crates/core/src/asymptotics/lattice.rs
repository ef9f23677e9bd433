use rug::Integer;

use crate::error::{Error, Result};
use crate::series::SparsePolynomial;

/// Row echelon form over `Z` by repeated Euclidean reduction within each
/// column. Returns the absolute values of the pivots.
fn integer_echelon_pivots(mut rows: Vec<Vec<Integer>>, ncols: usize) -> Vec<Integer> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        loop {
            let best = (top..rows.len())
                .filter(|&r| rows[r][col] != 0)
                .min_by(|&a, &b| rows[a][col].cmp_abs(&rows[b][col]));
            let Some(best) = best else { break };
            rows.swap(top, best);
            let mut done = true;
            for r in top + 1..rows.len() {
                if rows[r][col] == 0 {
                    continue;
                }
                let q = Integer::from(&rows[r][col] / &rows[top][col]);
                for c in col..ncols {
                    let t = Integer::from(&q * &rows[top][c]);
                    rows[r][c] -= t;
                }
                if rows[r][col] != 0 {
                    done = false;
                }
            }
            if done {
                pivots.push(Integer::from(rows[top][col].abs_ref()));
                top += 1;
                break;
            }
        }
    }
    pivots
}

/// Index of the lattice spanned by `vectors` in `Z^dim`, or `None` if they do
/// not have full rank.
pub fn lattice_index(vectors: &[Vec<u32>], dim: usize) -> Option<Integer> {
    let rows = vectors
        .iter()
        .map(|v| v.iter().map(|&x| Integer::from(x)).collect())
        .collect();
    let pivots = integer_echelon_pivots(rows, dim);
    (pivots.len() == dim).then(|| pivots.into_iter().product())
}

/// Whether the exponent vectors of the nonconstant monomials of `p` generate
/// all of `Z^d`.
pub fn check_aperiodic(p: &SparsePolynomial) -> Result<bool> {
    let vectors: Vec<Vec<u32>> = p
        .terms()
        .filter(|(e, _)| e.iter().any(|&k| k > 0))
        .map(|(e, _)| e.to_vec())
        .collect();
    if vectors.is_empty() {
        return Err(Error::domain("check_aperiodic needs a nonconstant monomial"));
    }
    Ok(lattice_index(&vectors, p.nvars()) == Some(Integer::from(1)))
}
