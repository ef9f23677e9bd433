use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Renders an exact rational as `"p/q"`, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Format {
        path: None,
        detail: format!("not a rational: {s:?}"),
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Integer = p.trim().parse().map_err(|_| bad())?;
            let q: Integer = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::from((p, q)))
        }
        None => {
            let p: Integer = s.parse().map_err(|_| bad())?;
            Ok(Rational::from(p))
        }
    }
}

/// Decimal rendering of a float with `digits` significant digits.
pub fn format_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

/// Number of decimal digits carried by `bits` binary digits.
pub fn decimal_digits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor() as usize
}

/// Binary digits of agreement between `a` and a reference `b`, i.e.
/// `-log2(|a-b|/|b|)`, capped at the working precision.
pub fn agreement_bits(a: &Float, b: &Float) -> f64 {
    let prec = a.prec().min(b.prec());
    let diff = Float::with_val(prec, a - b).abs();
    if diff.is_zero() {
        return prec as f64;
    }
    let rel = if b.is_zero() {
        diff
    } else {
        diff / b.clone().abs()
    };
    let bits = -rel.log2().to_f64();
    bits.min(prec as f64)
}
