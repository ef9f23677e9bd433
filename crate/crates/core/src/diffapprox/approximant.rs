use std::fmt;

use rug::{Integer, Rational};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::numeric::modular::{solve_square_crt, CrtFailure, IntMatrix};
use crate::numeric::{format_rational, RatPoly};

/// Degrees of an approximant `Σ_{k=0}^K Q_k(x) F^{(k)}(x) = P(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Shape {
    pub order: usize,
    /// `deg Q_0, …, deg Q_K`
    pub degrees: Vec<usize>,
    pub inhom_degree: usize,
}

impl Shape {
    pub fn new(degrees: Vec<usize>, inhom_degree: usize) -> Result<Self> {
        if degrees.len() < 2 {
            return Err(Error::domain("an approximant needs order K >= 1"));
        }
        Ok(Shape {
            order: degrees.len() - 1,
            degrees,
            inhom_degree,
        })
    }

    /// Unknown coefficients before normalization.
    pub fn unknowns(&self) -> usize {
        self.degrees.iter().map(|d| d + 1).sum::<usize>() + self.inhom_degree + 1
    }

    /// Linear conditions, one per matched power of `x`.
    pub fn conditions(&self) -> usize {
        self.unknowns() - 1
    }

    /// Series coefficients consumed by a fit of this shape.
    pub fn terms_needed(&self) -> usize {
        self.conditions() + self.order
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let degs: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        write!(f, "K={} deg=({}) inhom={}", self.order, degs.join(","), self.inhom_degree)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialApproximant {
    pub order: usize,
    /// `Q_0, …, Q_K`
    pub q_polys: Vec<RatPoly>,
    pub inhom: RatPoly,
    pub terms_used: usize,
    pub shape: Shape,
    /// Index of the coefficient of `Q_K` pinned to 1.
    pub pinned: usize,
}

impl DifferentialApproximant {
    pub fn leading(&self) -> &RatPoly {
        &self.q_polys[self.order]
    }

    /// Coefficients of `Σ_k Q_k F^{(k)} − P` through `x^{len−1}` for the
    /// series `terms`.
    pub fn residual_series(&self, terms: &[Integer], len: usize) -> Vec<Rational> {
        let mut out = vec![Rational::new(); len];
        for (k, q) in self.q_polys.iter().enumerate() {
            for (j, c) in q.coeffs().iter().enumerate() {
                if *c == 0 {
                    continue;
                }
                for (n, slot) in out.iter_mut().enumerate().skip(j) {
                    let m = n - j;
                    if m + k >= terms.len() {
                        break;
                    }
                    let v = Integer::from(&terms[m + k] * rising(m as u64 + 1, k));
                    *slot += Rational::from(c * v);
                }
            }
        }
        for (j, c) in self.inhom.coeffs().iter().enumerate() {
            if j < len {
                out[j] -= c;
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let poly = |p: &RatPoly| p.coeffs().iter().map(format_rational).collect::<Vec<_>>();
        json!({
            "shape": self.shape,
            "terms_used": self.terms_used,
            "pinned_coefficient": self.pinned,
            "q_polys": self.q_polys.iter().map(poly).collect::<Vec<_>>(),
            "inhom": poly(&self.inhom),
        })
    }
}

/// `m (m+1) ⋯ (m+k−1)`
pub(crate) fn rising(m: u64, k: usize) -> Integer {
    let mut r = Integer::from(1);
    for i in 0..k as u64 {
        r *= m + i;
    }
    r
}

/// Column of unknown `q_{k,j}`: the coefficient of `x^n` in `x^j F^{(k)}`.
fn q_column(terms: &[Integer], k: usize, j: usize, rows: usize) -> Vec<Integer> {
    (0..rows)
        .map(|n| {
            if n < j {
                Integer::new()
            } else {
                let m = n - j;
                Integer::from(&terms[m + k] * rising(m as u64 + 1, k))
            }
        })
        .collect()
}

/// Fits the approximant of the given shape exactly to the leading terms of
/// the series, pinning the constant coefficient of `Q_K` to 1 (or the next
/// coefficient when the fit forces the constant to vanish).
pub fn fit_approximant(terms: &[Integer], degrees: &[usize], inhom_degree: usize) -> Result<DifferentialApproximant> {
    let shape = Shape::new(degrees.to_vec(), inhom_degree)?;
    let needed = shape.terms_needed();
    if terms.len() < needed {
        return Err(Error::domain(format!(
            "approximant {shape} needs {needed} terms, got {}",
            terms.len()
        )));
    }
    let rows = shape.conditions();
    let order = shape.order;

    let mut columns: Vec<(usize, usize, Vec<Integer>)> = Vec::with_capacity(shape.unknowns());
    for (k, &deg) in degrees.iter().enumerate() {
        for j in 0..=deg {
            columns.push((k, j, q_column(terms, k, j, rows)));
        }
    }
    let inhom_base = columns.len();
    for j in 0..=inhom_degree {
        let col = (0..rows)
            .map(|n| if n == j { Integer::from(-1) } else { Integer::new() })
            .collect();
        columns.push((order + 1, j, col));
    }

    for pinned in 0..=degrees[order] {
        let pin_idx = columns
            .iter()
            .position(|(k, j, _)| *k == order && *j == pinned)
            .expect("pinned column exists");
        let mut a = IntMatrix::zeros(rows, rows);
        let mut c = 0;
        for (idx, (_, _, col)) in columns.iter().enumerate() {
            if idx == pin_idx {
                continue;
            }
            for (r, v) in col.iter().enumerate() {
                *a.get_mut(r, c) = v.clone();
            }
            c += 1;
        }
        let b: Vec<Integer> = columns[pin_idx].2.iter().map(|v| Integer::from(-v)).collect();
        let sol = match solve_square_crt(&a, &b) {
            Ok(sol) => sol,
            Err(CrtFailure::Singular) => continue,
            Err(CrtFailure::Verification) => {
                return Err(Error::consistency(format!("modular solution of {shape} failed verification")))
            }
        };
        let mut values = Vec::with_capacity(columns.len());
        let mut it = sol.numerators.into_iter();
        for idx in 0..columns.len() {
            if idx == pin_idx {
                values.push(Rational::from(1));
            } else {
                values.push(Rational::from((it.next().unwrap(), sol.det.clone())));
            }
        }
        let mut q_polys = Vec::with_capacity(order + 1);
        let mut start = 0;
        for &deg in degrees {
            q_polys.push(RatPoly::new(values[start..start + deg + 1].to_vec()));
            start += deg + 1;
        }
        let inhom = RatPoly::new(values[inhom_base..].to_vec());
        return Ok(DifferentialApproximant {
            order,
            q_polys,
            inhom,
            terms_used: needed,
            shape,
            pinned,
        });
    }
    Err(Error::DegenerateFit(format!("no approximant of shape {shape} fits the series")))
}
