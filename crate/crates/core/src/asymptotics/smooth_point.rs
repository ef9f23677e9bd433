//! Exact quantities at the point `c = (1/(d-1), …, 1/(d-1))` of the variety
//! `H_d = 0`. Every value is obtained by symbolic differentiation of `H_d` and
//! exact evaluation, then compared with its closed form.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::series::polynomial::{build_denominator, kernel_factor, numerator};

pub(crate) fn require_d3(d: usize, what: &str) -> Result<()> {
    if d < 3 {
        return Err(Error::domain(format!(
            "{what} requires d >= 3 (got d={d}); the smooth-point analysis divides by d-2"
        )));
    }
    Ok(())
}

/// The common coordinate `1/(d-1)` of the critical point.
pub fn critical_coordinate(d: usize) -> Rational {
    Rational::from((1, d as u64 - 1))
}

fn point(d: usize) -> Vec<Rational> {
    vec![critical_coordinate(d); d]
}

fn ipow(b: u64, e: u32) -> Integer {
    Integer::from(Integer::u_pow_u(b as u32, e))
}

fn frac(num: Integer, den: Integer) -> Rational {
    Rational::from((num, den))
}

/// `S(c) = 1 − Σ_{i=2}^d (i−1) binom(d,i) (1/(d−1))^i`, using `e_i(k·1) =
/// binom(d,i) k^i`. Zero for every `d ≥ 3`.
pub fn verify_on_variety(d: usize) -> Result<Rational> {
    require_d3(d, "verify_on_variety")?;
    let c = critical_coordinate(d);
    let mut s = Rational::from(1);
    for i in 2..=d {
        let binom = Integer::from(Integer::binomial_u(d as u32, i as u32));
        let term = Rational::from((&c).pow(i as i32)) * binom * Integer::from(i - 1);
        s -= term;
    }
    Ok(s)
}

/// `S` evaluated at `c` by expanding the polynomial `S_d` itself.
pub fn kernel_factor_at_c(d: usize) -> Result<Rational> {
    require_d3(d, "kernel_factor_at_c")?;
    Ok(kernel_factor(d).eval(&point(d)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partials {
    /// `∂_d H(c)`
    pub dh: Rational,
    /// `∂_dd H(c)`
    pub ddh: Rational,
    /// `∂_1d H(c)`
    pub d1dh: Rational,
    /// `∂_1 H(c)`, used for the criticality check.
    pub d1h: Rational,
}

/// Closed forms of the three partials.
pub fn partials_closed_form(d: usize) -> (Rational, Rational, Rational) {
    let dd = d as u64;
    let e = d as u32;
    let dh = -frac(ipow(dd - 2, e) * ipow(dd, e - 2), ipow(dd - 1, 2 * e - 2));
    let ddh = frac(
        Integer::from(2) * ipow(dd, e - 2) * ipow(dd - 2, e - 1),
        ipow(dd - 1, 2 * e - 3),
    );
    let d1dh = frac(
        Integer::from(4) * ipow(dd, e - 3) * ipow(dd - 2, e - 1),
        ipow(dd - 1, 2 * e - 3),
    );
    (dh, ddh, d1dh)
}

/// Partials of `H_d` at `c` by exact differentiation and evaluation.
pub fn evaluate_partials(d: usize) -> Result<Partials> {
    require_d3(d, "partials_at_c")?;
    let h = build_denominator(d)?;
    let last = d - 1;
    let dh_poly = h.derivative(last);
    let at = point(d);
    Ok(Partials {
        dh: dh_poly.eval(&at),
        ddh: dh_poly.derivative(last).eval(&at),
        d1dh: dh_poly.derivative(0).eval(&at),
        d1h: h.derivative(0).eval(&at),
    })
}

/// Evaluates the partials and checks them against their closed forms.
pub fn partials_at_c(d: usize) -> Result<Partials> {
    let p = evaluate_partials(d)?;
    let (dh, ddh, d1dh) = partials_closed_form(d);
    for (name, got, want) in [("dH", &p.dh, &dh), ("ddH", &p.ddh, &ddh), ("d1dH", &p.d1dh, &d1dh)] {
        if got != want {
            return Err(Error::consistency(format!(
                "{name}(c) for d={d}: direct evaluation {got} != closed form {want}"
            )));
        }
    }
    Ok(p)
}

/// `c_1 ∂_1 H(c) = c_d ∂_d H(c)`; all coordinates of `c` coincide.
pub fn is_critical(p: &Partials) -> bool {
    p.d1h == p.dh
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HessianQuantities {
    pub q: Rational,
    pub det_g: Rational,
}

pub fn q_closed_form(d: usize) -> Rational {
    Rational::from((d as u64 - 2, d as u64))
}

pub fn det_g_closed_form(d: usize) -> Rational {
    frac(ipow(d as u64 - 2, d as u32 - 1), ipow(d as u64, d as u32 - 2))
}

/// `q = 1 + (c_1/∂_d H)(∂_dd H − ∂_1d H)` and `det g̃''(0) = d q^{d-1}`.
pub fn hessian_from_partials(d: usize, p: &Partials) -> HessianQuantities {
    let c = critical_coordinate(d);
    let q = Rational::from(1) + c / p.dh.clone() * Rational::from(&p.ddh - &p.d1dh);
    let det_g = Rational::from((&q).pow(d as i32 - 1)) * Integer::from(d);
    HessianQuantities { q, det_g }
}

pub fn hessian_quantities(d: usize) -> Result<HessianQuantities> {
    require_d3(d, "hessian_quantities")?;
    let p = partials_at_c(d)?;
    let hq = hessian_from_partials(d, &p);
    if hq.q != q_closed_form(d) {
        return Err(Error::consistency(format!(
            "q for d={d}: {} != (d-2)/d",
            hq.q
        )));
    }
    if hq.det_g != det_g_closed_form(d) || hq.det_g == 0 {
        return Err(Error::consistency(format!(
            "det g''(0) for d={d}: {} != (d-2)^(d-1)/d^(d-2)",
            hq.det_g
        )));
    }
    Ok(hq)
}

pub fn l0_closed_form(d: usize) -> Rational {
    let dd = d as u64;
    let e = d as u32;
    frac(ipow(dd - 1, e - 1), ipow(dd, e - 2) * ipow(dd - 2, e))
}

/// `L_0 = G(c) / (−c_d ∂_d H(c))`.
pub fn l0_from_partials(d: usize, p: &Partials) -> Rational {
    let g = numerator(d).eval(&point(d));
    let denom = -(critical_coordinate(d) * p.dh.clone());
    g / denom
}
