use rug::{Float, Rational};
use serde_json::json;

use super::prec::PRecurrence;
use crate::error::{Error, Result};
use crate::numeric::rational::{decimal_digits, format_float};
use crate::numeric::{format_rational, polynomial_roots, PolyRoot, RatPoly};

/// Working precision for characteristic roots, comfortably above 50 digits.
pub const GROWTH_PRECISION: u32 = 256;

/// Roots of the characteristic polynomial of a recurrence. Each root `λ` is a
/// candidate exponential growth rate: solutions behave like `λ^n` times
/// subexponential factors.
#[derive(Clone, Debug)]
pub struct GrowthCandidates {
    pub characteristic: RatPoly,
    pub roots: Vec<PolyRoot>,
    pub precision_bits: u32,
}

impl GrowthCandidates {
    /// Distance from `target` to the nearest root.
    pub fn distance_to(&self, target: &Rational) -> Option<Float> {
        let t = Float::with_val(self.precision_bits, target);
        self.roots
            .iter()
            .map(|r| {
                let re = Float::with_val(self.precision_bits, &r.value.re - &t);
                let im = Float::with_val(self.precision_bits, &r.value.im);
                re.hypot(&im)
            })
            .min_by(|a, b| a.partial_cmp(b).unwrap())
    }

    pub fn contains(&self, target: &Rational, tol: f64) -> bool {
        self.distance_to(target).is_some_and(|d| d.to_f64() <= tol)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let digits = decimal_digits(self.precision_bits).min(60);
        let roots: Vec<_> = self
            .roots
            .iter()
            .map(|r| {
                json!({
                    "re": format_float(&r.value.re, digits),
                    "im": format_float(&r.value.im, digits),
                    "multiplicity": r.multiplicity,
                    "uncertainty": format_float(&r.uncertainty, 6),
                })
            })
            .collect();
        json!({
            "characteristic": self.characteristic.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
            "roots": roots,
            "precision_bits": self.precision_bits,
        })
    }
}

/// `Σ_i lc(p_i) λ^{k−i}`, with `lc` the coefficient of the top degree
/// attained among all `p_i`.
pub fn characteristic_polynomial(rec: &PRecurrence) -> RatPoly {
    let top = rec.max_degree();
    let k = rec.order;
    let mut coeffs = vec![Rational::new(); k + 1];
    for (i, p) in rec.coeffs.iter().enumerate() {
        coeffs[k - i] = p.coeff(top);
    }
    RatPoly::new(coeffs)
}

pub fn growth_candidates(rec: &PRecurrence) -> Result<GrowthCandidates> {
    growth_candidates_with_precision(rec, GROWTH_PRECISION)
}

pub fn growth_candidates_with_precision(rec: &PRecurrence, prec: u32) -> Result<GrowthCandidates> {
    let characteristic = characteristic_polynomial(rec);
    if characteristic.is_zero() {
        return Err(Error::consistency("characteristic polynomial vanishes identically"));
    }
    let roots = if characteristic.degree() == Some(0) {
        Vec::new()
    } else {
        polynomial_roots(&characteristic, prec)?
    };
    Ok(GrowthCandidates {
        characteristic,
        roots,
        precision_bits: prec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(coeffs: &[&[i64]]) -> PRecurrence {
        PRecurrence::new(coeffs.iter().map(|c| RatPoly::from_integers(c.iter().copied())).collect(), 0).unwrap()
    }

    #[test]
    fn constant_coefficients() {
        let g = growth_candidates(&rec(&[&[1], &[-2]])).unwrap();
        assert_eq!(g.roots.len(), 1);
        assert!(g.contains(&Rational::from(2), 1e-60));
        let g = growth_candidates(&rec(&[&[1], &[-5], &[6]])).unwrap();
        assert!(g.contains(&Rational::from(2), 1e-60));
        assert!(g.contains(&Rational::from(3), 1e-60));
        assert!(!g.contains(&Rational::from(4), 0.5));
    }

    #[test]
    fn lower_degree_terms_drop_out() {
        // n a(n) − (4n − 2) a(n−1): characteristic λ − 4
        let g = growth_candidates(&rec(&[&[0, 1], &[2, -4]])).unwrap();
        assert!(g.contains(&Rational::from(4), 1e-60));
        // (n+1) a(n) − 3 a(n−1): only p0 reaches degree 1
        let c = characteristic_polynomial(&rec(&[&[1, 1], &[-3]]));
        assert_eq!(c, RatPoly::from_integers([0, 1]));
    }
}
