//! Word-size modular arithmetic and a multi-modular exact solver for square
//! integer systems.
//!
//! A system `A y = b` over the integers is solved modulo a stream of 62-bit
//! primes; the determinant and the Cramer numerators are rebuilt by the
//! Chinese remainder theorem. Every few primes the solution itself is
//! recovered by rational reconstruction and checked exactly, which usually
//! succeeds long before the modulus exceeds twice the Hadamard bound, where
//! the Cramer numerators are determined outright.

use rug::{Assign, Integer, Rational};

/// Montgomery multiplication context for an odd modulus `p < 2^62`.
#[derive(Clone, Copy, Debug)]
pub struct Montgomery {
    p: u64,
    neg_pinv: u64,
    r2: u64,
}

impl Montgomery {
    pub fn new(p: u64) -> Self {
        assert!(p & 1 == 1 && p < (1 << 62));
        // Newton iteration for p^{-1} mod 2^64.
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Montgomery {
            p,
            neg_pinv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    #[inline]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn one(&self) -> u64 {
        self.to_mont(1)
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero Montgomery-form element.
    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Descending stream of primes below `2^62`.
#[derive(Clone, Debug)]
pub struct PrimeStream {
    next: u64,
}

impl Default for PrimeStream {
    fn default() -> Self {
        PrimeStream { next: (1u64 << 62) - 1 }
    }
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > 3 {
            let c = self.next;
            self.next -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
        None
    }
}

/// Residue of `x` modulo the word-size prime `p`, nonnegative.
pub fn reduce(x: &Integer, p: &Integer, scratch: &mut Integer) -> u64 {
    scratch.assign(x % p);
    if *scratch < 0 {
        *scratch += p;
    }
    scratch.to_u64().expect("residue fits in a word")
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Integer>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Integer::new(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Integer {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Integer {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Integer] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Integer]) -> Vec<Integer> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Integer::new();
                for (a, x) in self.row(r).iter().zip(v) {
                    if *a != 0 && *x != 0 {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Matrix reduced modulo `p`, entries in Montgomery form.
    pub fn reduce_mont(&self, mont: &Montgomery) -> Vec<u64> {
        let p = Integer::from(mont.modulus());
        let mut scratch = Integer::new();
        self.data
            .iter()
            .map(|x| {
                if *x == 0 {
                    0
                } else {
                    mont.to_mont(reduce(x, &p, &mut scratch))
                }
            })
            .collect()
    }
}

/// Rank of `a` modulo `p`. A full rank modulo any prime certifies full rank
/// over the rationals.
pub fn rank_mod_p(a: &IntMatrix, p: u64) -> usize {
    let mont = Montgomery::new(p);
    let mut m = a.reduce_mont(&mont);
    row_echelon(&mut m, a.rows, a.cols, &mont).len()
}

/// In-place row echelon form over `Z/p`; returns the pivot columns.
fn row_echelon(m: &mut [u64], rows: usize, cols: usize, mont: &Montgomery) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for k in 0..cols {
                m.swap(piv * cols + k, r * cols + k);
            }
        }
        let inv = mont.inv(m[r * cols + c]);
        for k in c..cols {
            m[r * cols + k] = mont.mul(m[r * cols + k], inv);
        }
        for i in r + 1..rows {
            let f = m[i * cols + c];
            if f == 0 {
                continue;
            }
            for k in c..cols {
                let t = mont.mul(f, m[r * cols + k]);
                m[i * cols + k] = mont.sub(m[i * cols + k], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves the square system modulo `p`: returns `(det, det * x)` in ordinary
/// (non-Montgomery) representation, or `None` when singular modulo `p`.
fn solve_mod_p(
    a: &IntMatrix,
    b: &[Integer],
    mont: &Montgomery,
) -> Option<(u64, Vec<u64>)> {
    let n = a.rows;
    let cols = n + 1;
    let pz = Integer::from(mont.modulus());
    let mut scratch = Integer::new();
    let base = a.reduce_mont(mont);
    let mut m = vec![0u64; n * cols];
    for r in 0..n {
        m[r * cols..r * cols + n].copy_from_slice(&base[r * n..(r + 1) * n]);
        m[r * cols + n] = if b[r] == 0 {
            0
        } else {
            mont.to_mont(reduce(&b[r], &pz, &mut scratch))
        };
    }
    let mut det = mont.one();
    let mut negate = false;
    for c in 0..n {
        let piv = (c..n).find(|&i| m[i * cols + c] != 0)?;
        if piv != c {
            negate = !negate;
            for k in 0..cols {
                m.swap(piv * cols + k, c * cols + k);
            }
        }
        let pv = m[c * cols + c];
        det = mont.mul(det, pv);
        let inv = mont.inv(pv);
        for k in c..cols {
            m[c * cols + k] = mont.mul(m[c * cols + k], inv);
        }
        for i in 0..n {
            if i == c {
                continue;
            }
            let f = m[i * cols + c];
            if f == 0 {
                continue;
            }
            for k in c..cols {
                let t = mont.mul(f, m[c * cols + k]);
                m[i * cols + k] = mont.sub(m[i * cols + k], t);
            }
        }
    }
    if negate {
        det = mont.sub(0, det);
    }
    let x: Vec<u64> = (0..n)
        .map(|r| mont.from_mont(mont.mul(det, m[r * cols + n])))
        .collect();
    Some((mont.from_mont(det), x))
}

/// Exact solution of a nonsingular square system as `y / det`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtSolution {
    pub det: Integer,
    pub numerators: Vec<Integer>,
    pub primes_used: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrtFailure {
    /// The matrix was singular modulo every prime tried.
    Singular,
    /// Reconstruction did not verify (never expected).
    Verification,
}

/// Upper bound on `log2 |det|` of any matrix formed from the rows of `[A | b]`.
fn hadamard_bits(a: &IntMatrix, b: &[Integer]) -> u64 {
    let width = ((a.cols + 1) as f64).log2() / 2.0;
    let mut total = 0f64;
    for r in 0..a.rows {
        let max_bits = a
            .row(r)
            .iter()
            .chain(std::iter::once(&b[r]))
            .map(|x| x.significant_bits())
            .max()
            .unwrap_or(0);
        total += max_bits as f64 + width;
    }
    total.ceil() as u64 + 2
}

/// Number of consecutive singular primes (with no nonsingular one seen) after
/// which the matrix is declared singular.
const SINGULAR_PRIMES: usize = 3;

/// Primes between two attempts at early rational reconstruction.
const ATTEMPT_EVERY: usize = 8;

fn balanced(values: &[Integer], modulus: &Integer) -> Vec<Integer> {
    let half = Integer::from(modulus >> 1);
    values
        .iter()
        .map(|v| if *v > half { Integer::from(v - modulus) } else { v.clone() })
        .collect()
}

/// `a/b` with `a ≡ b u (mod m)`, `|a| ≤ bound` and `0 < b ≤ bound`.
pub fn rational_reconstruction(u: &Integer, m: &Integer, bound: &Integer) -> Option<Rational> {
    let (mut r0, mut r1) = (m.clone(), Integer::from(u % m));
    if r1 < 0 {
        r1 += m;
    }
    let (mut s0, mut s1) = (Integer::new(), Integer::from(1));
    while r1.cmp_abs(bound).is_gt() {
        let (q, r) = Integer::from(&r0).div_rem_floor(r1.clone());
        r0 = std::mem::replace(&mut r1, r);
        let s = Integer::from(&s0 - &q * &s1);
        s0 = std::mem::replace(&mut s1, s);
    }
    if s1 == 0 || s1.cmp_abs(bound).is_gt() || Integer::from(r1.gcd_ref(&s1)) != 1 {
        return None;
    }
    Some(Rational::from((r1, s1)))
}

/// Candidate solution from the Cramer images modulo `modulus`, recovered
/// with a shared denominator and checked exactly.
fn early_solution(a: &IntMatrix, b: &[Integer], values: &[Integer], modulus: &Integer) -> Option<(Integer, Vec<Integer>)> {
    let inv = values[0].clone().invert(modulus).ok()?;
    let bound = Integer::from(modulus >> 1).sqrt();
    let mut denom = Integer::from(1);
    let mut xs = Vec::with_capacity(values.len() - 1);
    for v in &values[1..] {
        let mut y = Integer::from(v * &inv) * &denom % modulus;
        if y.cmp_abs(&Integer::from(modulus >> 1)).is_gt() {
            y -= modulus;
        }
        let x = if y.cmp_abs(&bound).is_le() {
            Rational::from((y, denom.clone()))
        } else {
            let r = rational_reconstruction(&y, modulus, &bound)?;
            let x = Rational::from((r.numer().clone(), Integer::from(r.denom() * &denom)));
            denom *= r.denom();
            x
        };
        xs.push(x);
    }
    let nums: Vec<Integer> = xs
        .into_iter()
        .map(|x| Rational::from(x * &denom).into_numer_denom().0)
        .collect();
    verifies(a, b, &denom, &nums).then_some((denom, nums))
}

fn verifies(a: &IntMatrix, b: &[Integer], det: &Integer, numerators: &[Integer]) -> bool {
    a.mul_vec(numerators)
        .iter()
        .zip(b)
        .all(|(l, r)| *l == Integer::from(r * det))
}

/// `det` in the result is a common denominator of the solution: the
/// determinant, or the least common denominator after early reconstruction.
pub fn solve_square_crt(a: &IntMatrix, b: &[Integer]) -> Result<CrtSolution, CrtFailure> {
    assert_eq!(a.rows, a.cols);
    assert_eq!(b.len(), a.rows);
    let n = a.rows;
    let target_bits = hadamard_bits(a, b) + 1;
    let mut modulus = Integer::from(1);
    let mut values: Vec<Integer> = vec![Integer::new(); n + 1];
    let mut singular = 0usize;
    let mut used = 0usize;
    let mut scratch = Integer::new();
    for p in PrimeStream::default() {
        if used > 0 && modulus.significant_bits() as u64 > target_bits {
            break;
        }
        let mont = Montgomery::new(p);
        let Some((det, xs)) = solve_mod_p(a, b, &mont) else {
            singular += 1;
            if used == 0 && singular >= SINGULAR_PRIMES {
                return Err(CrtFailure::Singular);
            }
            continue;
        };
        let pz = Integer::from(p);
        let m_red = reduce(&modulus, &pz, &mut scratch);
        let m_inv = pow_mod(m_red, p - 2, p);
        for (v, r) in values.iter_mut().zip(std::iter::once(det).chain(xs)) {
            let cur = reduce(v, &pz, &mut scratch);
            let diff = (r + p - cur) % p;
            let t = mul_mod(diff, m_inv, p);
            if t != 0 {
                *v += Integer::from(&modulus * t);
            }
        }
        modulus *= p;
        used += 1;
        if used % ATTEMPT_EVERY == 0 {
            if let Some((det, numerators)) = early_solution(a, b, &values, &modulus) {
                return Ok(CrtSolution {
                    det,
                    numerators,
                    primes_used: used,
                });
            }
        }
    }
    let mut values = balanced(&values, &modulus);
    let det = values.remove(0);
    if det == 0 {
        return Err(CrtFailure::Singular);
    }
    if !verifies(a, b, &det, &values) {
        return Err(CrtFailure::Verification);
    }
    Ok(CrtSolution {
        det,
        numerators: values,
        primes_used: used,
    })
}

/// Polynomial remainder over `Z/p` (plain representation).
fn poly_rem_mod(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let inv = pow_mod(b[db], p - 2, p);
    while a.len() > db && !a.is_empty() {
        let lead = *a.last().unwrap();
        if lead != 0 {
            let f = mul_mod(lead, inv, p);
            let off = a.len() - 1 - db;
            for (j, &bc) in b.iter().enumerate() {
                let t = mul_mod(f, bc, p);
                a[off + j] = (a[off + j] + p - t) % p;
            }
        }
        a.pop();
    }
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Certifies square-freeness of an integer polynomial (lowest degree first):
/// if `gcd(f, f')` is constant modulo a prime not dividing the leading
/// coefficient, `f` is square-free over the rationals. `false` means
/// "not certified", not "has a repeated factor".
pub fn certify_squarefree(coeffs: &[Integer]) -> bool {
    let deg = match coeffs.iter().rposition(|c| *c != 0) {
        Some(d) => d,
        None => return false,
    };
    if deg <= 1 {
        return true;
    }
    for p in PrimeStream::default().take(3) {
        let pz = Integer::from(p);
        let mut scratch = Integer::new();
        let f: Vec<u64> = coeffs[..=deg]
            .iter()
            .map(|c| reduce(c, &pz, &mut scratch))
            .collect();
        if f[deg] == 0 {
            continue;
        }
        let df: Vec<u64> = (1..=deg).map(|k| mul_mod(f[k], k as u64 % p, p)).collect();
        let mut a = f;
        let mut b = df;
        while b.last() == Some(&0) {
            b.pop();
        }
        while !b.is_empty() {
            let r = poly_rem_mod(a, &b, p);
            a = b;
            b = r;
        }
        if a.len() == 1 {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn primes_and_montgomery() {
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
        let p = PrimeStream::default().next().unwrap();
        assert!(p > (1 << 61));
        let m = Montgomery::new(p);
        let a = m.to_mont(123456789);
        let b = m.to_mont(987654321);
        assert_eq!(m.from_mont(m.mul(a, b)), mul_mod(123456789, 987654321, p));
        assert_eq!(m.from_mont(m.mul(a, m.inv(a))), 1);
    }

    #[test]
    fn solves_small_system_exactly() {
        let mut a = IntMatrix::zeros(3, 3);
        let rows = [[2, 1, -1], [-3, -1, 2], [-2, 1, 2]];
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                *a.get_mut(r, c) = Integer::from(*v);
            }
        }
        let b = vec![Integer::from(8), Integer::from(-11), Integer::from(-3)];
        let sol = solve_square_crt(&a, &b).unwrap();
        let x: Vec<Rational> = sol
            .numerators
            .iter()
            .map(|y| Rational::from((y.clone(), sol.det.clone())))
            .collect();
        assert_eq!(x, vec![Rational::from(2), Rational::from(3), Rational::from(-1)]);
    }

    #[test]
    fn detects_singular() {
        let mut a = IntMatrix::zeros(2, 2);
        *a.get_mut(0, 0) = Integer::from(1);
        *a.get_mut(0, 1) = Integer::from(2);
        *a.get_mut(1, 0) = Integer::from(2);
        *a.get_mut(1, 1) = Integer::from(4);
        let b = vec![Integer::from(1), Integer::from(2)];
        assert_eq!(solve_square_crt(&a, &b), Err(CrtFailure::Singular));
        assert_eq!(rank_mod_p(&a, 1_000_000_007), 1);
    }

    #[test]
    fn large_entries_reconstruct() {
        // Entries far beyond a single prime force several CRT rounds.
        let n = 6;
        let mut a = IntMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let base = Integer::from(3 + r + 2 * c);
                *a.get_mut(r, c) = Integer::from((&base).pow(40 + (r * c) as u32));
            }
        }
        let b: Vec<Integer> = (0..n).map(|r| Integer::from(r as i64 - 2)).collect();
        let sol = solve_square_crt(&a, &b).unwrap();
        assert!(sol.primes_used > 3);
        let lhs = a.mul_vec(&sol.numerators);
        for (l, r) in lhs.iter().zip(&b) {
            assert_eq!(*l, Integer::from(r * &sol.det));
        }
    }

    #[test]
    fn stops_before_the_hadamard_bound() {
        // Huge entries, determinant -1 and a small solution.
        let big = Integer::from(Integer::from(1) << 2000);
        let mut a = IntMatrix::zeros(2, 2);
        *a.get_mut(0, 0) = big.clone();
        *a.get_mut(0, 1) = Integer::from(&big + 1);
        *a.get_mut(1, 0) = Integer::from(1);
        *a.get_mut(1, 1) = Integer::from(1);
        let b = a.mul_vec(&[Integer::from(5), Integer::from(7)]);
        let sol = solve_square_crt(&a, &b).unwrap();
        assert!(sol.primes_used < 10, "{} primes", sol.primes_used);
        let lhs = a.mul_vec(&sol.numerators);
        for (l, r) in lhs.iter().zip(&b) {
            assert_eq!(*l, Integer::from(r * &sol.det));
        }
    }

    #[test]
    fn reconstructs_small_fractions() {
        let m = Integer::from(1_000_000_007u64);
        let u = Integer::from(Integer::from(3) * Integer::from(7).invert(&m).unwrap()) % &m;
        let bound = Integer::from(&m >> 1).sqrt();
        assert_eq!(rational_reconstruction(&u, &m, &bound), Some(Rational::from((3, 7))));
        let neg = Integer::from(&m - &u);
        assert_eq!(rational_reconstruction(&neg, &m, &bound), Some(Rational::from((-3, 7))));
    }

    #[test]
    fn squarefree_certificate() {
        let sq = [1, -3, 2].map(Integer::from); // (1-x)(1-2x)
        assert!(certify_squarefree(&sq));
        let dbl = [1, -2, 1].map(Integer::from); // (1-x)^2
        assert!(!certify_squarefree(&dbl));
    }
}
