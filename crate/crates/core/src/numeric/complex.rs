use std::fmt;

use rug::Float;

/// Complex number over MPFR floats of a fixed working precision.
///
/// Only the handful of operations needed by the root finders are provided.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex::new(Float::new(prec), Float::new(prec))
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        BigComplex::new(re, Float::new(prec))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        BigComplex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re + &o.re),
            Float::with_val(p, &self.im + &o.im),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re - &o.re),
            Float::with_val(p, &self.im - &o.im),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        BigComplex::new(re, im)
    }

    pub fn mul_real(&self, s: &Float) -> Self {
        let p = self.prec();
        BigComplex::new(Float::with_val(p, &self.re * s), Float::with_val(p, &self.im * s))
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re / &n),
            Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        )
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Evaluates the real-coefficient polynomial (lowest degree first) and
    /// its derivative at `self` by Horner's rule.
    pub fn eval_with_derivative(&self, coeffs: &[Float]) -> (Self, Self) {
        let p = self.prec();
        let mut val = BigComplex::zero(p);
        let mut der = BigComplex::zero(p);
        for c in coeffs.iter().rev() {
            der = der.mul(self).add(&val);
            val = val.mul(self);
            val.re += c;
        }
        (val, der)
    }

    pub fn eval(&self, coeffs: &[Float]) -> Self {
        let p = self.prec();
        let mut val = BigComplex::zero(p);
        for c in coeffs.iter().rev() {
            val = val.mul(self);
            val.re += c;
        }
        val
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = Some(f.precision().unwrap_or(20));
        let re = self.re.to_string_radix(10, digits);
        if self.im.is_zero() {
            write!(f, "{re}")
        } else {
            let im = self.im.to_string_radix(10, digits);
            write!(f, "{re} + {im}i")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = BigComplex::from_f64(128, 1.0, 2.0);
        let b = BigComplex::from_f64(128, -3.0, 0.5);
        let q = a.div(&b);
        let back = q.mul(&b);
        assert!(back.sub(&a).abs() < 1e-30);
        assert_eq!(a.norm_sqr(), 5.0);
    }

    #[test]
    fn horner() {
        // p(z) = 1 + z^2, p'(z) = 2z, at z = i
        let coeffs: Vec<Float> = [1.0, 0.0, 1.0].iter().map(|&c| Float::with_val(64, c)).collect();
        let z = BigComplex::from_f64(64, 0.0, 1.0);
        let (v, d) = z.eval_with_derivative(&coeffs);
        assert!(v.is_zero());
        assert_eq!(d.to_f64_pair(), (0.0, 2.0));
    }
}
