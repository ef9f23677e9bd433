use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Sparse multivariate polynomial with exact rational coefficients, keyed by
/// exponent vectors of a fixed length. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl SparsePolynomial {
    pub fn zero(nvars: usize) -> Self {
        SparsePolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<Rational>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c.into());
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::from(1));
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.nvars])
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        assert_eq!(exps.len(), self.nvars);
        if c == 0 {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), Rational::from(-c));
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), Rational::from(c * s))),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, Rational::from(ca * cb));
            }
        }
        out
    }

    /// Partial derivative with respect to `x_var` (0-based).
    pub fn derivative(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter_map(|(e, c)| {
            let k = e[var];
            (k > 0).then(|| {
                let mut e = e.clone();
                e[var] -= 1;
                (e, Rational::from(c * k))
            })
        });
        Self::from_terms(self.nvars, terms)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::new();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= Rational::from(x.pow(k as i32));
                }
            }
            acc += t;
        }
        acc
    }

    /// Largest exponent of any single variable.
    pub fn max_var_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Invariance under all variable permutations, tested on the adjacent
    /// transpositions that generate the symmetric group.
    pub fn is_symmetric(&self) -> bool {
        (0..self.nvars.saturating_sub(1)).all(|i| {
            self.terms.iter().all(|(e, c)| {
                let mut s = e.clone();
                s.swap(i, i + 1);
                self.terms.get(&s) == Some(c)
            })
        })
    }

    /// Integer-coefficient view; `None` if some coefficient is not integral.
    pub fn integer_terms(&self) -> Option<Vec<(Vec<u32>, Integer)>> {
        self.terms
            .iter()
            .map(|(e, c)| c.is_integer().then(|| (e.clone(), c.numer().clone())))
            .collect()
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", v + 1)?,
                    _ => write!(f, "*x{}^{k}", v + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// Elementary symmetric polynomial `e_i(x_1, …, x_d)`.
pub fn elementary_symmetric(d: usize, i: usize) -> SparsePolynomial {
    assert!(d < 32, "elementary_symmetric: d too large");
    let mut p = SparsePolynomial::zero(d);
    if i > d {
        return p;
    }
    for mask in 0u32..(1u32 << d) {
        if mask.count_ones() as usize == i {
            let e = (0..d).map(|v| (mask >> v) & 1).collect();
            p.add_term(e, Rational::from(1));
        }
    }
    p
}

/// `S_d = 1 - Σ_{i=2}^d (i-1) e_i(x)`.
pub fn kernel_factor(d: usize) -> SparsePolynomial {
    let mut s = SparsePolynomial::one(d);
    for i in 2..=d {
        s = s.sub(&elementary_symmetric(d, i).scale(&Rational::from(i as i64 - 1)));
    }
    s
}

/// `P_d = Π_{i=1}^d (1 - x_i)`.
pub fn boundary_factor(d: usize) -> SparsePolynomial {
    let mut p = SparsePolynomial::one(d);
    for i in 0..d {
        p = p.mul(&SparsePolynomial::one(d).sub(&SparsePolynomial::var(d, i)));
    }
    p
}

/// `G_d = Π_{i=1}^d x_i`.
pub fn numerator(d: usize) -> SparsePolynomial {
    SparsePolynomial::from_terms(d, [(vec![1; d], Rational::from(1))])
}

/// `H_d = P_d · S_d`, the denominator of the generating function `A_d`.
pub fn build_denominator(d: usize) -> Result<SparsePolynomial> {
    if d < 2 {
        return Err(Error::domain(format!(
            "build_denominator requires d >= 2, got d={d}"
        )));
    }
    Ok(boundary_factor(d).mul(&kernel_factor(d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(d: usize, i: usize) -> SparsePolynomial {
        SparsePolynomial::var(d, i)
    }

    fn one_minus(p: &SparsePolynomial) -> SparsePolynomial {
        SparsePolynomial::one(p.nvars()).sub(p)
    }

    #[test]
    fn denominator_d2_matches_hand_expansion() {
        let d = 2;
        let (x1, x2) = (x(d, 0), x(d, 1));
        let want = one_minus(&x1).mul(&one_minus(&x2)).mul(&one_minus(&x1.mul(&x2)));
        assert_eq!(build_denominator(2).unwrap(), want);
    }

    #[test]
    fn denominator_d3_matches_hand_expansion() {
        let d = 3;
        let (x1, x2, x3) = (x(d, 0), x(d, 1), x(d, 2));
        let e2 = x1.mul(&x2).add(&x1.mul(&x3)).add(&x2.mul(&x3));
        let e3 = x1.mul(&x2).mul(&x3);
        let s = one_minus(&e2.add(&e3.scale(&Rational::from(2))));
        let want = one_minus(&x1).mul(&one_minus(&x2)).mul(&one_minus(&x3)).mul(&s);
        assert_eq!(build_denominator(3).unwrap(), want);
    }

    #[test]
    fn denominator_properties() {
        for d in 2..=6 {
            let h = build_denominator(d).unwrap();
            assert_eq!(h.constant_term(), 1);
            assert_eq!(h.eval(&vec![Rational::new(); d]), 1);
            assert!(h.is_symmetric());
            assert!(h.max_var_degree() <= 2);
        }
        assert!(build_denominator(1).is_err());
    }

    #[test]
    fn elementary_counts() {
        let e = elementary_symmetric(5, 2);
        assert_eq!(e.len(), 10);
        let ones = vec![Rational::from(1); 5];
        assert_eq!(e.eval(&ones), 10);
        assert!(elementary_symmetric(3, 4).is_empty());
    }

    #[test]
    fn derivative_of_elementary() {
        // d/dx_j e_i(x) = e_{i-1}(x with x_j removed)
        let d = 4;
        let de = elementary_symmetric(d, 3).derivative(3);
        let want = SparsePolynomial::from_terms(
            d,
            elementary_symmetric(d - 1, 2).terms().map(|(e, c)| {
                let mut e = e.to_vec();
                e.push(0);
                (e, c.clone())
            }),
        );
        assert_eq!(de, want);
    }
}
