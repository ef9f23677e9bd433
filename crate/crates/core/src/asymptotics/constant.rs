use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::smooth_point::{
    det_g_closed_form, hessian_quantities, l0_closed_form, l0_from_partials, partials_at_c,
    require_d3,
};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 200;

/// Product `Π base^exponent · π^pi_power` with integer bases and rational
/// exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantExpr {
    pub numerator_power_terms: Vec<(Integer, Rational)>,
    pub pi_power: Rational,
}

impl ConstantExpr {
    /// `(d−1)^{d−1} · 2^{−(d−1)/2} · d^{−(d−2)/2} · (d−2)^{−(3d−1)/2} · π^{−(d−1)/2}`
    pub fn for_dimension(d: usize) -> Self {
        let di = d as i64;
        let half = |n: i64| Rational::from((n, 2));
        ConstantExpr {
            numerator_power_terms: vec![
                (Integer::from(di - 1), Rational::from(di - 1)),
                (Integer::from(2), -half(di - 1)),
                (Integer::from(di), -half(di - 2)),
                (Integer::from(di - 2), -half(3 * di - 1)),
            ],
            pi_power: -half(di - 1),
        }
    }

    pub fn eval(&self, prec: u32) -> Float {
        let wp = prec + 32;
        let mut acc = Float::with_val(wp, 1);
        for (base, e) in &self.numerator_power_terms {
            if *base == 1 {
                continue;
            }
            acc *= rational_power(&Float::with_val(wp, base), e, wp);
        }
        let pi = Float::with_val(wp, Constant::Pi);
        acc *= rational_power(&pi, &self.pi_power, wp);
        Float::with_val(prec, acc)
    }
}

/// `x^(p/q)` as `(x^p)^(1/q)` for positive `x`.
fn rational_power(x: &Float, e: &Rational, wp: u32) -> Float {
    let p = e.numer().to_i32().expect("small exponent");
    let q = e.denom().to_u32().expect("small exponent");
    let xp = Float::with_val(wp, x.pow(p));
    if q == 1 {
        xp
    } else {
        xp.root(q)
    }
}

#[derive(Clone, Debug)]
pub struct AsymptoticForm {
    pub d: usize,
    pub growth: Integer,
    pub poly_exponent: Rational,
    pub l0: Rational,
    pub det_g: Rational,
    pub constant_exact: ConstantExpr,
    /// `L0 / sqrt((2π)^{d−1} det_g)` evaluated numerically.
    pub constant_float: Float,
    pub precision_bits: u32,
}

impl AsymptoticForm {
    /// Predicted value `K · ρ^n · n^α` at precision `prec`.
    pub fn predicted(&self, n: u64, prec: u32) -> Float {
        let wp = prec + 16;
        let rho_n = Float::with_val(wp, self.growth.clone().pow(n as u32));
        let n_alpha = rational_power(&Float::with_val(wp, n), &self.poly_exponent, wp);
        Float::with_val(prec, Float::with_val(wp, &self.constant_float * &rho_n) * n_alpha)
    }
}

/// `L0 / sqrt((2π)^{d−1} det_g)` at `prec` bits.
pub fn assemble_constant(d: usize, l0: &Rational, det_g: &Rational, prec: u32) -> Float {
    let wp = prec + 32;
    let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
    let mut radicand = Float::with_val(wp, two_pi.pow(d as u32 - 1));
    radicand *= Float::with_val(wp, det_g);
    Float::with_val(prec, Float::with_val(wp, l0) / radicand.sqrt())
}

pub fn leading_constant(d: usize) -> Result<AsymptoticForm> {
    leading_constant_with_precision(d, DEFAULT_PRECISION)
}

pub fn leading_constant_with_precision(d: usize, prec: u32) -> Result<AsymptoticForm> {
    require_d3(d, "leading_constant")?;
    if prec < 16 {
        return Err(Error::domain(format!("precision of {prec} bits is too small")));
    }
    let p = partials_at_c(d)?;
    let hq = hessian_quantities(d)?;
    let l0 = l0_from_partials(d, &p);
    if l0 != l0_closed_form(d) {
        return Err(Error::consistency(format!(
            "L0 for d={d}: {l0} != (d-1)^(d-1)/(d^(d-2)(d-2)^d)"
        )));
    }
    debug_assert_eq!(hq.det_g, det_g_closed_form(d));

    let constant = assemble_constant(d, &l0, &hq.det_g, prec);
    let di = d as i64;
    Ok(AsymptoticForm {
        d,
        growth: Integer::from(di - 1).pow(d as u32),
        poly_exponent: Rational::from((1 - di, 2)),
        l0,
        det_g: hq.det_g,
        constant_exact: ConstantExpr::for_dimension(d),
        constant_float: constant,
        precision_bits: prec,
    })
}
