#![allow(dead_code)]

use diagasym::numeric::BigComplex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer, Rational};

/// All complex roots of `Σ c_j x^j` by Durand–Kerner iteration from the
/// usual spiral start, followed by Newton polishing.
pub fn durand_kerner(coeffs: &[Integer], prec: u32) -> Vec<BigComplex> {
    let n = coeffs.len() - 1;
    let lead = Float::with_val(prec, &coeffs[n]);
    let monic: Vec<Float> = coeffs.iter().map(|c| Float::with_val(prec, c) / &lead).collect();
    let eval = |z: &BigComplex| z.eval(&monic);
    let seed = BigComplex::from_f64(prec, 0.4, 0.9);
    let mut z: Vec<BigComplex> = Vec::with_capacity(n);
    let mut p = BigComplex::from_f64(prec, 1.0, 0.0);
    for _ in 0..n {
        z.push(p.clone());
        p = p.mul(&seed);
    }
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8));
    for _ in 0..2000 {
        let mut worst = Float::new(prec);
        for i in 0..n {
            let mut denom = BigComplex::from_f64(prec, 1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom = denom.mul(&z[i].sub(&z[j]));
                }
            }
            let step = eval(&z[i]).div(&denom);
            let size = step.abs();
            if size > worst {
                worst = size;
            }
            z[i] = z[i].sub(&step);
        }
        if worst < tol {
            break;
        }
    }
    for r in &mut z {
        for _ in 0..4 {
            let (v, dv) = r.eval_with_derivative(&monic);
            if dv.is_zero() {
                break;
            }
            *r = r.sub(&v.div(&dv));
        }
    }
    z
}

/// Squarefree test through the resultant-free route: `gcd(Q, Q')` over the
/// rationals is constant.
pub fn is_squarefree(q: &[Integer]) -> bool {
    use diagasym::numeric::RatPoly;
    let p = RatPoly::from_integers(q.iter().cloned());
    p.gcd(&p.derivative()).degree() == Some(0)
}

pub fn coprime(p: &[Integer], q: &[Integer]) -> bool {
    use diagasym::numeric::RatPoly;
    let (p, q) = (RatPoly::from_integers(p.iter().cloned()), RatPoly::from_integers(q.iter().cloned()));
    p.gcd(&q).degree() == Some(0)
}

/// Series coefficients of `P/Q` with `Q(0) = 1`.
pub fn rational_series(p: &[Integer], q: &[Integer], n: usize) -> Vec<Integer> {
    assert_eq!(q[0], 1);
    let mut out: Vec<Integer> = Vec::with_capacity(n);
    for k in 0..n {
        let mut v = p.get(k).cloned().unwrap_or_default();
        for j in 1..q.len().min(k + 1) {
            v -= Integer::from(&q[j] * &out[k - j]);
        }
        out.push(v);
    }
    out
}

pub struct RationalInstance {
    pub p: Vec<Integer>,
    pub q: Vec<Integer>,
}

/// Random `P/Q` with `deg Q ∈ [1, 4]`, squarefree `Q`, `Q(0) = 1`,
/// `deg P ≤ 3`, `P(0) ≠ 0` and `gcd(P, Q) = 1`, small integer coefficients.
pub fn random_rational_functions(count: usize, seed: u64) -> Vec<RationalInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let dq = rng.gen_range(1..=4usize);
        let dp = rng.gen_range(0..=3usize);
        let mut q: Vec<Integer> = vec![Integer::from(1)];
        q.extend((0..dq).map(|_| Integer::from(rng.gen_range(-6..=6i32))));
        let mut p: Vec<Integer> = (0..=dp).map(|_| Integer::from(rng.gen_range(-5..=5i32))).collect();
        if p[0] == 0 {
            p[0] = Integer::from(1);
        }
        if q[dq] == 0 || p[dp] == 0 || !is_squarefree(&q) || !coprime(&p, &q) {
            continue;
        }
        out.push(RationalInstance { p, q });
    }
    out
}

fn pow(b: i64, e: i64) -> Rational {
    Rational::from(Integer::from(Integer::i_pow_u(b as i32, e as u32)))
}

/// Closed forms written out directly from their defining expressions.
pub struct ClosedForms {
    pub dh: Rational,
    pub ddh: Rational,
    pub d1dh: Rational,
    pub q: Rational,
    pub det_g: Rational,
    pub l0: Rational,
}

pub fn expected_closed_forms(d: i64) -> ClosedForms {
    ClosedForms {
        dh: -(pow(d - 2, d) * pow(d, d - 2)) / pow(d - 1, 2 * d - 2),
        ddh: Rational::from(2) * pow(d, d - 2) * pow(d - 2, d - 1) / pow(d - 1, 2 * d - 3),
        d1dh: Rational::from(4) * pow(d, d - 3) * pow(d - 2, d - 1) / pow(d - 1, 2 * d - 3),
        q: Rational::from((d - 2, d)),
        det_g: pow(d - 2, d - 1) / pow(d, d - 2),
        l0: pow(d - 1, d - 1) / (pow(d, d - 2) * pow(d - 2, d)),
    }
}
