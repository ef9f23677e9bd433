//! Sampled evidence for minimality of `c`: on the box `(0, 1/(d−1)]^d` the
//! quantity `Σ_{i≥2} (i−1) e_i(y)` stays below 1 except at `c`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Integer, Rational};

use super::smooth_point::{critical_coordinate, require_d3};
use crate::error::{Error, Result};

/// Grid resolution per coordinate: `y_i = k_i / (GRID (d−1))`, `1 ≤ k_i ≤ GRID`.
pub const GRID: u32 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport {
    pub d: usize,
    pub n_samples: usize,
    /// Samples with value strictly below 1.
    pub passed: usize,
    pub max_value: Rational,
    pub max_point: Vec<Rational>,
    pub value_at_c: Rational,
}

impl MinimalityReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.n_samples && self.value_at_c == 1
    }
}

/// Elementary symmetric values `e_0..e_d` of `values`.
fn elementary_values<T>(values: &[T], zero: T, one: T, mul: impl Fn(&T, &T) -> T) -> Vec<T>
where
    T: Clone + std::ops::AddAssign<T>,
{
    let mut e = vec![zero; values.len() + 1];
    e[0] = one;
    for (n, v) in values.iter().enumerate() {
        for i in (1..=n + 1).rev() {
            let t = mul(&e[i - 1], v);
            e[i] += t;
        }
    }
    e
}

/// `Σ_{i=2}^d (i−1) e_i(y)` exactly.
pub fn minimality_value(y: &[Rational]) -> Rational {
    let e = elementary_values(y, Rational::new(), Rational::from(1), |a, b| Rational::from(a * b));
    let mut s = Rational::new();
    for (i, ei) in e.iter().enumerate().skip(2) {
        s += Rational::from(ei * Integer::from(i - 1));
    }
    s
}

/// Integer form of [`minimality_value`] at `y = k / den`: returns the numerator
/// over `den^d`.
fn grid_value_numerator(k: &[Integer], den: &Integer) -> Integer {
    let d = k.len();
    let e = elementary_values(k, Integer::new(), Integer::from(1), |a, b| Integer::from(a * b));
    let mut acc = Integer::new();
    for (i, ei) in e.iter().enumerate().skip(2) {
        let scale = Integer::from(den.pow((d - i) as u32));
        acc += Integer::from(ei * &scale) * (i as u32 - 1);
    }
    acc
}

pub fn check_minimality_samples(d: usize, n_samples: usize, seed: u64) -> Result<MinimalityReport> {
    require_d3(d, "check_minimality_samples")?;
    if n_samples == 0 {
        return Err(Error::domain("check_minimality_samples needs at least one sample"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = Integer::from(GRID) * (d as u32 - 1);
    let full = Integer::from((&den).pow(d as u32));
    let mut passed = 0;
    let mut best: Option<(Integer, Vec<Integer>)> = None;
    let mut drawn = 0;
    while drawn < n_samples {
        let k: Vec<Integer> = (0..d).map(|_| Integer::from(rng.gen_range(1..=GRID))).collect();
        if k.iter().all(|ki| *ki == GRID) {
            continue;
        }
        drawn += 1;
        let num = grid_value_numerator(&k, &den);
        if num < full {
            passed += 1;
        }
        if best.as_ref().map_or(true, |(b, _)| num > *b) {
            best = Some((num, k));
        }
    }
    let (num, k) = best.expect("at least one sample");
    let max_value = Rational::from((num, full));
    let max_point = k.into_iter().map(|ki| Rational::from((ki, den.clone()))).collect();
    let value_at_c = minimality_value(&vec![critical_coordinate(d); d]);
    Ok(MinimalityReport {
        d,
        n_samples,
        passed,
        max_value,
        max_point,
        value_at_c,
    })
}
