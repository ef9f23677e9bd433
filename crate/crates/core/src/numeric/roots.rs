//! Roots of exact polynomials to a requested binary precision.
//!
//! Repeated factors are split off exactly (square-free decomposition, skipped
//! when a modular certificate shows the input is already square-free), so each
//! remaining root is simple. Starting values come from the eigenvalues of the
//! companion matrix in double precision; they are then polished by
//! simultaneous Aberth–Ehrlich iteration in MPFR arithmetic.

use nalgebra::{DMatrix, Schur};
use rug::ops::Pow;
use rug::{float::Constant, Float, Integer};

use super::complex::BigComplex;
use super::modular::certify_squarefree;
use super::upoly::RatPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct PolyRoot {
    pub value: BigComplex,
    pub multiplicity: usize,
    /// Error estimate on `value`: the degree times the final Newton correction,
    /// bounded below by the working precision.
    pub uncertainty: Float,
}

/// All roots of `poly` with multiplicities, sorted by real then imaginary part.
pub fn polynomial_roots(poly: &RatPoly, prec: u32) -> Result<Vec<PolyRoot>> {
    if poly.is_zero() {
        return Err(Error::domain("roots of the zero polynomial"));
    }
    let ints = poly.primitive_integer_coeffs();
    let factors = if certify_squarefree(&ints) {
        vec![(RatPoly::from_integers(ints), 1)]
    } else {
        poly.squarefree_decomposition()
    };
    let mut out = Vec::new();
    for (factor, mult) in factors {
        let coeffs = factor.primitive_integer_coeffs();
        for (value, uncertainty) in simple_roots(&coeffs, prec) {
            out.push(PolyRoot {
                value,
                multiplicity: mult,
                uncertainty,
            });
        }
    }
    out.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap()
            .then(a.value.im.partial_cmp(&b.value.im).unwrap())
    });
    Ok(out)
}

/// Roots of a square-free integer polynomial.
fn simple_roots(coeffs: &[Integer], prec: u32) -> Vec<(BigComplex, Float)> {
    let wp = prec + 32;
    let mut roots = Vec::new();
    let low = coeffs.iter().position(|c| *c != 0).unwrap_or(0);
    if low > 0 {
        // Square-free: x divides at most once.
        roots.push((BigComplex::zero(prec), Float::new(prec)));
    }
    let c: Vec<Float> = coeffs[low..].iter().map(|x| Float::with_val(wp, x)).collect();
    let n = c.len() - 1;
    if n == 0 {
        return roots;
    }
    if n == 1 {
        let z = -Float::with_val(wp, &c[0] / &c[1]);
        let z = BigComplex::from_real(Float::with_val(prec, z));
        roots.push((z, Float::new(prec)));
        return roots;
    }
    let mut z = initial_guesses(&c, wp);
    let corr = aberth(&c, &mut z, wp, prec);
    for (zi, ci) in z.into_iter().zip(corr) {
        let mut unc = Float::with_val(prec, &ci * n as u32);
        let floor = Float::with_val(prec, zi.abs() >> (prec as i32 - 4));
        if unc < floor {
            unc = floor;
        }
        let mut re = Float::with_val(prec, &zi.re);
        let mut im = Float::with_val(prec, &zi.im);
        if Float::with_val(prec, im.abs_ref()) <= unc {
            im = Float::new(prec);
        }
        if re.is_zero() {
            re = Float::new(prec);
        }
        roots.push((BigComplex::new(re, im), unc));
    }
    roots
}

/// Eigenvalues of the companion matrix of the root-scaled polynomial, or
/// points on a circle when double precision cannot represent it.
fn initial_guesses(c: &[Float], wp: u32) -> Vec<BigComplex> {
    let n = c.len() - 1;
    let ratio = Float::with_val(wp, &c[0] / &c[n]).abs();
    let scale = ratio.root(n as u32);
    let mut monic = Vec::with_capacity(n);
    let lead = Float::with_val(wp, &c[n] * Float::with_val(wp, (&scale).pow(n as u32)));
    let mut sk = Float::with_val(wp, 1);
    let mut ok = true;
    for ck in &c[..n] {
        let b = Float::with_val(wp, ck * &sk) / &lead;
        let v = b.to_f64();
        ok &= v.is_finite();
        monic.push(v);
        sk *= &scale;
    }
    if ok {
        let mut comp = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            comp[(i, i - 1)] = 1.0;
        }
        for (i, b) in monic.iter().enumerate() {
            comp[(i, n - 1)] = -b;
        }
        // Unbounded QR iteration can cycle on some companion matrices.
        let eig = Schur::try_new(comp, f64::EPSILON, 1000 * n).map(|s| s.complex_eigenvalues());
        if let Some(eig) = eig.filter(|e| e.iter().all(|e| e.re.is_finite() && e.im.is_finite())) {
            let mut guesses: Vec<BigComplex> = eig
                .iter()
                .map(|e| BigComplex::from_f64(wp, e.re, e.im).mul_real(&scale))
                .collect();
            separate_duplicates(&mut guesses, &scale);
            return guesses;
        }
    }
    circle_guesses(n, &scale, wp)
}

fn circle_guesses(n: usize, radius: &Float, wp: u32) -> Vec<BigComplex> {
    let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
    (0..n)
        .map(|k| {
            let theta = Float::with_val(wp, &two_pi * k as u32) / n as u32 + 0.4f64;
            let (s, co) = theta.sin_cos(Float::new(wp));
            BigComplex::new(Float::with_val(wp, &co * radius), Float::with_val(wp, &s * radius))
        })
        .collect()
}

/// Aberth iteration needs pairwise distinct starting points.
fn separate_duplicates(z: &mut [BigComplex], scale: &Float) {
    let wp = scale.prec();
    for i in 0..z.len() {
        for j in 0..i {
            if z[i] == z[j] {
                let bump = Float::with_val(wp, scale * (1e-6 * (i as f64 + 1.0)));
                z[i].im += &bump;
            }
        }
    }
}

/// Simultaneous Aberth–Ehrlich iteration; returns the last correction size
/// per root.
fn aberth(c: &[Float], z: &mut [BigComplex], wp: u32, prec: u32) -> Vec<Float> {
    let n = z.len();
    let mut last = vec![Float::with_val(wp, 1); n];
    let mut done = vec![false; n];
    let max_iter = 100 + 10 * n;
    for _ in 0..max_iter {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (val, der) = z[i].eval_with_derivative(c);
            if val.is_zero() {
                last[i] = Float::new(wp);
                done[i] = true;
                continue;
            }
            if der.is_zero() {
                z[i].re += Float::with_val(wp, z[i].abs() >> 20u32) + Float::with_val(wp, 1e-30);
                all_done = false;
                continue;
            }
            let w = val.div(&der);
            let mut s = BigComplex::zero(wp);
            for j in 0..n {
                if j != i {
                    s = s.add(&z[i].sub(&z[j]).recip());
                }
            }
            let one = BigComplex::from_real(Float::with_val(wp, 1));
            let denom = one.sub(&w.mul(&s));
            let step = if denom.is_zero() { w.clone() } else { w.div(&denom) };
            z[i] = z[i].sub(&step);
            let size = step.abs();
            let tol = Float::with_val(wp, z[i].abs() >> (prec as i32 + 8));
            if size <= tol || !z[i].is_finite() {
                done[i] = true;
            } else {
                all_done = false;
            }
            last[i] = w.abs();
        }
        if all_done {
            break;
        }
    }
    // Final Newton correction as the error estimate.
    for i in 0..n {
        let (val, der) = z[i].eval_with_derivative(c);
        if !der.is_zero() {
            last[i] = val.div(&der).abs();
        }
    }
    last
}
