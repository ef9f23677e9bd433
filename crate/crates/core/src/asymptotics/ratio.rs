use rug::{Float, Integer};

use super::constant::{leading_constant_with_precision, AsymptoticForm, DEFAULT_PRECISION};
use super::smooth_point::require_d3;
use crate::error::{Error, Result};

pub const MIN_TERMS: usize = 10;

/// `|r_N − 1|` above this at the last index marks the series as inconsistent
/// with the predicted asymptotics.
pub const MISMATCH_THRESHOLD: f64 = 0.25;

#[derive(Clone, Debug)]
pub struct RatioRow {
    pub n: u64,
    /// `C(n) / (K ρ^n n^α)`
    pub ratio: Float,
    /// `n r_n − (n−1) r_{n−1}`; absent for the first row.
    pub richardson: Option<Float>,
    /// `n (r_n − 1)`
    pub scaled_deviation: Float,
}

#[derive(Clone, Debug)]
pub struct RatioTable {
    pub d: usize,
    pub rows: Vec<RatioRow>,
    pub form: AsymptoticForm,
}

impl RatioTable {
    pub fn last(&self) -> &RatioRow {
        self.rows.last().expect("table is never empty")
    }

    pub fn final_deviation(&self) -> f64 {
        (self.last().ratio.to_f64() - 1.0).abs()
    }

    pub fn final_richardson_deviation(&self) -> Option<f64> {
        self.last().richardson.as_ref().map(|r| (r.to_f64() - 1.0).abs())
    }

    /// The ratios approach 1 and extrapolation improves on them.
    pub fn consistent(&self) -> bool {
        let dev = self.final_deviation();
        dev.is_finite()
            && dev <= MISMATCH_THRESHOLD
            && self
                .final_richardson_deviation()
                .is_some_and(|rd| rd < dev || dev == 0.0)
    }

    pub fn mismatch(&self) -> bool {
        !self.consistent()
    }
}

pub fn ratio_diagnostics(series: &[Integer], d: usize) -> Result<RatioTable> {
    ratio_diagnostics_with_precision(series, d, DEFAULT_PRECISION)
}

pub fn ratio_diagnostics_with_precision(series: &[Integer], d: usize, prec: u32) -> Result<RatioTable> {
    require_d3(d, "ratio_diagnostics")?;
    if series.len() < MIN_TERMS {
        return Err(Error::domain(format!(
            "ratio_diagnostics needs at least {MIN_TERMS} terms, got {}",
            series.len()
        )));
    }
    let form = leading_constant_with_precision(d, prec)?;
    let mut rows: Vec<RatioRow> = Vec::with_capacity(series.len() - 1);
    for (n, c) in series.iter().enumerate().skip(1) {
        let n = n as u64;
        let ratio = Float::with_val(prec, c) / form.predicted(n, prec);
        let richardson = rows.last().map(|prev| {
            let a = Float::with_val(prec, &ratio * n);
            let b = Float::with_val(prec, &prev.ratio * (n - 1));
            a - b
        });
        let scaled_deviation = Float::with_val(prec, &ratio - 1u32) * n;
        rows.push(RatioRow {
            n,
            ratio,
            richardson,
            scaled_deviation,
        });
    }
    Ok(RatioTable { d, rows, form })
}
