use std::fmt;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::bareiss::primitive;
use crate::numeric::{format_rational, parse_rational, RatPoly};

/// Linear recurrence `Σ_{i=0}^k p_i(n) a(n−i) = 0` for `n ≥ offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PRecurrence {
    pub order: usize,
    pub coeffs: Vec<RatPoly>,
    pub offset: usize,
}

impl PRecurrence {
    /// Builds a recurrence and normalizes it: integer coefficients without
    /// common content, and `lc(p_0) > 0`.
    pub fn new(coeffs: Vec<RatPoly>, offset: usize) -> Result<Self> {
        if coeffs.is_empty() || coeffs[0].is_zero() {
            return Err(Error::domain("recurrence needs a nonzero p0"));
        }
        let order = coeffs.len() - 1;
        let mut rec = PRecurrence {
            order,
            coeffs,
            offset: offset.max(order),
        };
        rec.normalize();
        Ok(rec)
    }

    fn normalize(&mut self) {
        let width = self.max_degree() + 1;
        let flat: Vec<Rational> = self
            .coeffs
            .iter()
            .flat_map(|p| (0..width).map(|j| p.coeff(j)))
            .collect();
        let mut ints = primitive(&flat);
        if self.coeffs[0].leading().is_some_and(|lc| lc.cmp0().is_lt()) {
            for v in &mut ints {
                *v = Integer::from(-&*v);
            }
        }
        self.coeffs = ints
            .chunks(width)
            .map(|c| RatPoly::from_integers(c.iter().cloned()))
            .collect();
    }

    /// Largest degree in `n` among the coefficients.
    pub fn max_degree(&self) -> usize {
        self.coeffs.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    /// `Σ_i p_i(n) a(n−i)` at a single `n ≥ order`.
    pub fn residual(&self, terms: &[Integer], n: usize) -> Rational {
        let nr = Rational::from(n as u64);
        let mut s = Rational::new();
        for (i, p) in self.coeffs.iter().enumerate() {
            let a = &terms[n - i];
            if *a != 0 {
                s += p.eval(&nr) * a;
            }
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RecurrenceJson::from(self)).expect("recurrence serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: RecurrenceJson = serde_json::from_value(value.clone())?;
        let coeffs = doc
            .coeffs
            .iter()
            .map(|c| c.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>().map(RatPoly::new))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != doc.order + 1 {
            return Err(Error::Format {
                path: None,
                detail: format!("order {} with {} coefficient polynomials", doc.order, coeffs.len()),
            });
        }
        PRecurrence::new(coeffs, doc.offset)
    }
}

impl fmt::Display for PRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{}]·a(n-{i})", p.to_string().replace('x', "n"))?;
        }
        write!(f, " = 0  (n >= {})", self.offset)
    }
}

#[derive(Serialize, Deserialize)]
struct RecurrenceJson {
    order: usize,
    offset: usize,
    coeffs: Vec<Vec<String>>,
}

impl From<&PRecurrence> for RecurrenceJson {
    fn from(r: &PRecurrence) -> Self {
        RecurrenceJson {
            order: r.order,
            offset: r.offset,
            coeffs: r
                .coeffs
                .iter()
                .map(|p| p.coeffs().iter().map(format_rational).collect())
                .collect(),
        }
    }
}

/// Whether `rec` annihilates `terms` at every applicable index.
pub fn verify_recurrence(rec: &PRecurrence, terms: &[Integer]) -> Result<bool> {
    let start = rec.offset.max(rec.order);
    if terms.len() <= start {
        return Err(Error::domain(format!(
            "no applicable index: recurrence starts at n={start}, {} terms given",
            terms.len()
        )));
    }
    Ok((start..terms.len()).all(|n| rec.residual(terms, n) == 0))
}

/// Extends `terms` to index `n_target` by solving for `a(n)`.
pub fn extend_series(rec: &PRecurrence, terms: &[Integer], n_target: usize) -> Result<Vec<Integer>> {
    if terms.len() <= rec.order {
        return Err(Error::domain(format!(
            "extend_series needs more than {} initial terms, got {}",
            rec.order,
            terms.len()
        )));
    }
    let mut out = terms.to_vec();
    while out.len() <= n_target {
        let n = out.len();
        let nr = Rational::from(n as u64);
        let p0 = rec.coeffs[0].eval(&nr);
        if p0 == 0 {
            return Err(Error::SingularLeading { n: n as i64 });
        }
        let mut s = Rational::new();
        for (i, p) in rec.coeffs.iter().enumerate().skip(1) {
            let a = &out[n - i];
            if *a != 0 {
                s += p.eval(&nr) * a;
            }
        }
        let v = -s / p0;
        if !v.is_integer() {
            return Err(Error::consistency(format!(
                "recurrence produced the non-integer value {v} at n={n}"
            )));
        }
        out.push(v.into_numer_denom().0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    fn geometric() -> PRecurrence {
        PRecurrence::new(vec![RatPoly::from_integers([1]), RatPoly::from_integers([-2])], 1).unwrap()
    }

    #[test]
    fn normalization() {
        let r = PRecurrence::new(
            vec![RatPoly::from_integers([-4]), RatPoly::new(vec![Rational::from((8, 3))])],
            0,
        )
        .unwrap();
        assert_eq!(r.coeffs[0], RatPoly::from_integers([3]));
        assert_eq!(r.coeffs[1], RatPoly::from_integers([-2]));
        assert_eq!(r.offset, 1);
    }

    #[test]
    fn verification() {
        let g = geometric();
        assert!(verify_recurrence(&g, &ints(&[1, 2, 4, 8])).unwrap());
        assert!(!verify_recurrence(&g, &ints(&[1, 2, 4, 9])).unwrap());
        assert!(verify_recurrence(&g, &ints(&[1])).is_err());
    }

    #[test]
    fn extension() {
        let g = geometric();
        assert_eq!(extend_series(&g, &ints(&[1, 2]), 6).unwrap(), ints(&[1, 2, 4, 8, 16, 32, 64]));
        // (n-1) a(n) - n a(n-1) = 0
        let lin = PRecurrence::new(vec![RatPoly::from_integers([-1, 1]), RatPoly::from_integers([0, -1])], 1).unwrap();
        let want: Vec<Integer> = (0..=10).map(Integer::from).collect();
        assert_eq!(extend_series(&lin, &want[..6], 10).unwrap(), want);
    }

    #[test]
    fn singular_and_fractional() {
        let r = PRecurrence::new(vec![RatPoly::from_integers([-50, 1]), RatPoly::from_integers([50, -1])], 1).unwrap();
        match extend_series(&r, &ints(&[1, 1]), 60) {
            Err(Error::SingularLeading { n }) => assert_eq!(n, 50),
            other => panic!("unexpected {other:?}"),
        }
        let half = PRecurrence::new(vec![RatPoly::from_integers([2]), RatPoly::from_integers([-1])], 1).unwrap();
        assert!(matches!(extend_series(&half, &ints(&[2, 1]), 3), Err(Error::Consistency(_))));
    }

    #[test]
    fn json_round_trip() {
        let r = PRecurrence::new(vec![RatPoly::from_integers([-1, 1]), RatPoly::from_integers([0, -1])], 1).unwrap();
        let j = r.to_json();
        assert_eq!(j["coeffs"][0][1], "1/1");
        assert_eq!(PRecurrence::from_json(&j).unwrap(), r);
    }
}
