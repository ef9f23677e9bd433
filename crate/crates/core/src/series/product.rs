//! Direct coefficient extraction from the product formula
//!
//! `a_d(m) = [t^(m-1)] Π_i (t̂_i^{m_i} − t_i^{m_i}) / (t̂_i − t_i)`,
//! `t̂_i = (Σ_j t_j) − t_i`.
//!
//! Slow, but shares nothing with the kernel recurrence, so it serves as the
//! oracle for [`super::gf_coefficients`].

use rug::Integer;

use super::MultiIndex;

/// Dense polynomial truncated to the box `e_j < dims[j]`.
struct BoxPoly {
    dims: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<Integer>,
}

impl BoxPoly {
    fn one(dims: &[usize]) -> Self {
        let mut strides = vec![1; dims.len()];
        for j in (0..dims.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * dims[j + 1];
        }
        let size = dims.iter().product();
        let mut data = vec![Integer::new(); size];
        data[0] = Integer::from(1);
        BoxPoly {
            dims: dims.to_vec(),
            strides,
            data,
        }
    }

    fn zero_like(&self) -> Self {
        BoxPoly {
            dims: self.dims.clone(),
            strides: self.strides.clone(),
            data: vec![Integer::new(); self.data.len()],
        }
    }

    fn exponent(&self, mut flat: usize, j: usize) -> usize {
        flat /= self.strides[j];
        flat % self.dims[j]
    }

    /// `(Σ_{j≠i} t_j) · self`, truncated.
    fn mul_hat(&self, i: usize) -> Self {
        let mut out = self.zero_like();
        for (flat, c) in self.data.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            for j in 0..self.dims.len() {
                if j == i || self.exponent(flat, j) + 1 >= self.dims[j] {
                    continue;
                }
                out.data[flat + self.strides[j]] += c;
            }
        }
        out
    }

    /// `acc += t_i^k · self`, truncated.
    fn add_shifted(&self, acc: &mut Self, i: usize, k: usize) {
        for (flat, c) in self.data.iter().enumerate() {
            if *c == 0 || self.exponent(flat, i) + k >= self.dims[i] {
                continue;
            }
            acc.data[flat + k * self.strides[i]] += c;
        }
    }
}

/// Number of simple singular vector tuples `a_d(m)` by expanding the product
/// formula; `0` when some `m_i = 0`.
pub fn tuple_count_product(m: &MultiIndex) -> Integer {
    let e = m.entries();
    if e.contains(&0) {
        return Integer::new();
    }
    let dims: Vec<usize> = e.iter().map(|&k| k as usize).collect();
    let mut acc = BoxPoly::one(&dims);
    for (i, &mi) in dims.iter().enumerate() {
        // Σ_{k=0}^{m_i-1} t̂_i^k t_i^{m_i-1-k} · acc
        let mut next = acc.zero_like();
        let mut power = acc;
        for k in 0..mi {
            power.add_shifted(&mut next, i, mi - 1 - k);
            if k + 1 < mi {
                power = power.mul_hat(i);
            }
        }
        acc = next;
    }
    acc.data.pop().unwrap_or_default()
}
