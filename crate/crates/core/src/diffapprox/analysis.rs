use rug::Float;

use super::approximant::DifferentialApproximant;
use crate::error::{Error, Result};
use crate::numeric::{polynomial_roots, BigComplex, PolyRoot, RatPoly};

pub const DEFAULT_PRECISION: u32 = 256;

/// A singularity location with its spread. For a single approximant the
/// uncertainty is the root-finding error; for a pooled cluster it is the
/// largest deviation of a member from the mean.
#[derive(Clone, Debug)]
pub struct SingularityEstimate {
    pub location: BigComplex,
    pub uncertainty: Float,
    pub exponent: Option<BigComplex>,
    pub n_supporting: usize,
    pub multiplicity: usize,
    pub spurious: bool,
}

impl SingularityEstimate {
    pub fn modulus(&self) -> Float {
        self.location.abs()
    }
}

/// Roots of the leading polynomial `Q_K`, exponents unset.
pub fn singularities(da: &DifferentialApproximant, precision_bits: u32) -> Result<Vec<SingularityEstimate>> {
    let roots = polynomial_roots(da.leading(), precision_bits)?;
    Ok(roots.into_iter().map(from_root).collect())
}

fn from_root(r: PolyRoot) -> SingularityEstimate {
    SingularityEstimate {
        location: r.value,
        uncertainty: r.uncertainty,
        exponent: None,
        n_supporting: 1,
        multiplicity: r.multiplicity,
        spurious: false,
    }
}

fn eval_complex(p: &RatPoly, z: &BigComplex) -> (BigComplex, Float) {
    let prec = z.prec();
    let coeffs = p.to_float_coeffs(prec);
    let r = z.abs();
    // Σ |c_j| |z|^j bounds the cancellation in the evaluation.
    let mut scale = Float::new(prec);
    for c in coeffs.iter().rev() {
        scale *= &r;
        scale += Float::with_val(prec, c.abs_ref());
    }
    (z.eval(&coeffs), scale)
}

/// Exponent `K − 1 − Q_{K−1}(x_c)/Q_K'(x_c)` at a simple root `x_c` of `Q_K`.
pub fn exponent_at(da: &DifferentialApproximant, x_c: &BigComplex) -> Result<BigComplex> {
    let prec = x_c.prec();
    let dq = da.leading().derivative();
    let (denom, scale) = eval_complex(&dq, x_c);
    let tiny = Float::with_val(prec, &scale >> (prec as i32 / 2));
    if denom.abs() <= tiny {
        return Err(Error::DegenerateIndicial(format!(
            "Q_K' vanishes at {x_c}: the root is not simple"
        )));
    }
    let (num, _) = eval_complex(&da.q_polys[da.order - 1], x_c);
    let ratio = num.div(&denom);
    let k_minus_1 = BigComplex::from_real(Float::with_val(prec, da.order as u32 - 1));
    Ok(k_minus_1.sub(&ratio))
}

/// Roots of `Q_K` together with their exponents (unset for multiple roots).
pub fn singularities_with_exponents(
    da: &DifferentialApproximant,
    precision_bits: u32,
) -> Result<Vec<SingularityEstimate>> {
    let mut out = singularities(da, precision_bits)?;
    for s in &mut out {
        if s.multiplicity == 1 {
            s.exponent = exponent_at(da, &s.location).ok();
        }
    }
    Ok(out)
}
