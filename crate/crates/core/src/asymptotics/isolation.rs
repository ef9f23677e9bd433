//! The diagonal restriction `y ↦ S(y·1)` and its factorization
//! `(y+1)^{d−1}(1−(d−1)y)`.

use rug::{Integer, Rational};

use super::smooth_point::{critical_coordinate, require_d3};
use crate::error::Result;
use crate::numeric::{polynomial_roots, RatPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationReport {
    pub d: usize,
    /// Coefficients of `S(y·1)`, lowest degree first.
    pub kernel_diagonal: RatPoly,
    /// `(y+1)^{d−1}(1−(d−1)y)`.
    pub factored: RatPoly,
    pub identity_holds: bool,
    /// `1/(d−1)` is a simple root and the only positive real root.
    pub unique_positive_root: bool,
    /// `P(y·1) = (1−y)^d`, the boundary factor of the full denominator.
    pub boundary_diagonal: RatPoly,
}

impl IsolationReport {
    pub fn holds(&self) -> bool {
        self.identity_holds && self.unique_positive_root
    }
}

/// `1 − Σ_{i=2}^d (i−1) binom(d,i) y^i`
pub fn kernel_diagonal(d: usize) -> RatPoly {
    let mut coeffs = vec![Rational::new(); d + 1];
    coeffs[0] = Rational::from(1);
    for (i, c) in coeffs.iter_mut().enumerate().skip(2) {
        let b = Integer::from(Integer::binomial_u(d as u32, i as u32));
        *c = -Rational::from(b * (i as u32 - 1));
    }
    RatPoly::new(coeffs)
}

pub fn factored_form(d: usize) -> RatPoly {
    let y_plus_1 = RatPoly::from_integers([1, 1]);
    let linear = RatPoly::from_integers([1, 1 - d as i64]);
    &y_plus_1.pow(d as u32 - 1) * &linear
}

fn positive_root_is_unique(p: &RatPoly, root: &Rational) -> Result<bool> {
    if p.eval(root) != 0 || p.derivative().eval(root) == 0 {
        return Ok(false);
    }
    let roots = polynomial_roots(p, 128)?;
    let positive: Vec<_> = roots
        .iter()
        .filter(|r| r.value.im.is_zero() && r.value.re.is_sign_positive() && !r.value.re.is_zero())
        .collect();
    let target = root.to_f64();
    Ok(positive.len() == 1
        && positive[0].multiplicity == 1
        && (positive[0].value.re.to_f64() - target).abs() <= target * 1e-12)
}

pub fn check_isolation_identity(d: usize) -> Result<IsolationReport> {
    require_d3(d, "check_isolation_identity")?;
    let kernel = kernel_diagonal(d);
    let factored = factored_form(d);
    let identity_holds = kernel == factored;
    let unique_positive_root = positive_root_is_unique(&kernel, &critical_coordinate(d))?;
    let boundary_diagonal = RatPoly::from_integers([1, -1]).pow(d as u32);
    Ok(IsolationReport {
        d,
        kernel_diagonal: kernel,
        factored,
        identity_holds,
        unique_positive_root,
        boundary_diagonal,
    })
}
