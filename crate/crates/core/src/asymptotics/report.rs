use rug::{Float, Integer, Rational};
use serde::Serialize;

use super::constant::{assemble_constant, ConstantExpr};
use super::isolation::check_isolation_identity;
use super::lattice::check_aperiodic;
use super::minimality::check_minimality_samples;
use super::smooth_point::{
    critical_coordinate, det_g_closed_form, evaluate_partials, hessian_from_partials, is_critical,
    kernel_factor_at_c, l0_closed_form, l0_from_partials, partials_closed_form, q_closed_form,
    require_d3, verify_on_variety,
};
use crate::error::Result;
use crate::numeric::rational::{agreement_bits, decimal_digits, format_float};
use crate::numeric::format_rational;
use crate::series::polynomial::kernel_factor;

/// Bits of agreement required between the assembled constant and its
/// simplified closed form.
pub const REQUIRED_AGREEMENT_BITS: f64 = 150.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// An exact identity over the rationals.
    Exact,
    /// Randomized evidence; not a proof.
    Sampled,
    /// Agreement of two floating evaluations.
    Numeric,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct SmoothPointReport {
    pub d: usize,
    pub c: Rational,
    pub s_at_c: Rational,
    pub dh: Rational,
    pub ddh: Rational,
    pub d1dh: Rational,
    pub q: Rational,
    pub det_g: Rational,
    pub l0: Rational,
    pub aperiodic: bool,
    pub minimality_samples: usize,
    pub minimality_samples_passed: usize,
    pub minimality_max_value: Rational,
    pub constant_float: Float,
    pub constant_closed_form: Float,
    pub constant_agreement_bits: f64,
    pub precision_bits: u32,
    pub checks: Vec<Check>,
}

impl SmoothPointReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let digits = decimal_digits(self.precision_bits);
        let doc = ReportJson {
            d: self.d,
            c: format_rational(&self.c),
            s_at_c: format_rational(&self.s_at_c),
            dh: format_rational(&self.dh),
            ddh: format_rational(&self.ddh),
            d1dh: format_rational(&self.d1dh),
            q: format_rational(&self.q),
            det_g: format_rational(&self.det_g),
            l0: format_rational(&self.l0),
            aperiodic: self.aperiodic,
            minimality_samples: self.minimality_samples,
            minimality_samples_passed: self.minimality_samples_passed,
            minimality_max_value: format_rational(&self.minimality_max_value),
            constant: FloatJson {
                value: format_float(&self.constant_float, digits),
                precision_bits: self.precision_bits,
            },
            constant_closed_form: FloatJson {
                value: format_float(&self.constant_closed_form, digits),
                precision_bits: self.precision_bits,
            },
            constant_agreement_bits: self.constant_agreement_bits,
            checks: &self.checks,
            all_passed: self.all_passed(),
        };
        serde_json::to_value(doc).expect("report serializes")
    }
}

#[derive(Serialize)]
struct FloatJson {
    value: String,
    precision_bits: u32,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    d: usize,
    c: String,
    s_at_c: String,
    #[serde(rename = "dH")]
    dh: String,
    #[serde(rename = "ddH")]
    ddh: String,
    #[serde(rename = "d1dH")]
    d1dh: String,
    q: String,
    det_g: String,
    #[serde(rename = "L0")]
    l0: String,
    aperiodic: bool,
    minimality_samples: usize,
    minimality_samples_passed: usize,
    minimality_max_value: String,
    constant: FloatJson,
    constant_closed_form: FloatJson,
    constant_agreement_bits: f64,
    checks: &'a [Check],
    all_passed: bool,
}

/// Runs every smooth-point check for dimension `d`, recording failures in the
/// report instead of returning early.
pub fn verify_smooth_point(d: usize, n_samples: usize, seed: u64, prec: u32) -> Result<SmoothPointReport> {
    require_d3(d, "verify_smooth_point")?;
    let mut checks = Vec::new();
    let mut check = |name: &str, kind: CheckKind, passed: bool| {
        checks.push(Check {
            name: name.to_string(),
            kind,
            passed,
        })
    };

    let s_at_c = verify_on_variety(d)?;
    check("S(c) = 0 (binomial form)", CheckKind::Exact, s_at_c == 0);
    check("S(c) = 0 (expanded polynomial)", CheckKind::Exact, kernel_factor_at_c(d)? == 0);

    let p = evaluate_partials(d)?;
    let (dh, ddh, d1dh) = partials_closed_form(d);
    check("dH(c) closed form", CheckKind::Exact, p.dh == dh);
    check("ddH(c) closed form", CheckKind::Exact, p.ddh == ddh);
    check("d1dH(c) closed form", CheckKind::Exact, p.d1dh == d1dh);
    check("smooth: dH(c) != 0", CheckKind::Exact, p.dh != 0);
    check("critical: c1 d1H(c) = cd ddH(c)", CheckKind::Exact, is_critical(&p));

    let hq = hessian_from_partials(d, &p);
    check("q = (d-2)/d", CheckKind::Exact, hq.q == q_closed_form(d));
    check("det g = d q^(d-1) closed form", CheckKind::Exact, hq.det_g == det_g_closed_form(d));
    check("nondegenerate: det g != 0", CheckKind::Exact, hq.det_g != 0);

    let l0 = l0_from_partials(d, &p);
    check("L0 closed form", CheckKind::Exact, l0 == l0_closed_form(d));

    let aperiodic = check_aperiodic(&kernel_factor(d))?;
    check("aperiodic", CheckKind::Exact, aperiodic);

    let iso = check_isolation_identity(d)?;
    check("diagonal kernel factorization", CheckKind::Exact, iso.identity_holds);
    check("unique simple positive diagonal root", CheckKind::Exact, iso.unique_positive_root);

    let minimal = check_minimality_samples(d, n_samples, seed)?;
    check("minimality at c: value = 1", CheckKind::Exact, minimal.value_at_c == 1);
    check("minimality samples below 1", CheckKind::Sampled, minimal.passed == minimal.n_samples);

    let constant_float = assemble_constant(d, &l0, &hq.det_g, prec);
    let constant_closed_form = ConstantExpr::for_dimension(d).eval(prec);
    let bits = agreement_bits(&constant_float, &constant_closed_form);
    let needed = REQUIRED_AGREEMENT_BITS.min(prec as f64 * 0.75);
    check("constant matches closed form", CheckKind::Numeric, bits >= needed);

    Ok(SmoothPointReport {
        d,
        c: critical_coordinate(d),
        s_at_c,
        dh: p.dh,
        ddh: p.ddh,
        d1dh: p.d1dh,
        q: hq.q,
        det_g: hq.det_g,
        l0,
        aperiodic,
        minimality_samples: minimal.n_samples,
        minimality_samples_passed: minimal.passed,
        minimality_max_value: minimal.max_value,
        constant_float,
        constant_closed_form,
        constant_agreement_bits: bits,
        precision_bits: prec,
        checks,
    })
}

/// `(d−1)^d`
pub fn growth_rate(d: usize) -> Integer {
    Integer::from(Integer::u_pow_u(d as u32 - 1, d as u32))
}
