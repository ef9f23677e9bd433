//! Fraction-free Gaussian elimination over the integers.

use rug::{Integer, Rational};

/// Row echelon form of an integer matrix.
pub struct Echelon {
    pub rows: Vec<Vec<Integer>>,
    pub pivot_cols: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

/// Bareiss elimination; pivots are chosen as the smallest available entry in
/// each column, which keeps intermediate entries short.
pub fn bareiss_echelon(mut a: Vec<Vec<Integer>>, ncols: usize) -> Echelon {
    let nrows = a.len();
    let mut pivot_cols = Vec::new();
    let mut prev = Integer::from(1);
    let mut top = 0;
    for col in 0..ncols {
        if top == nrows {
            break;
        }
        let best = (top..nrows)
            .filter(|&r| a[r][col] != 0)
            .min_by_key(|&r| a[r][col].significant_bits());
        let Some(best) = best else { continue };
        a.swap(top, best);
        let (head, tail) = a.split_at_mut(top + 1);
        let pivot_row = &head[top];
        let p = &pivot_row[col];
        for row in tail.iter_mut() {
            let f = row[col].clone();
            for c in col..ncols {
                let mut v = Integer::from(p * &row[c]);
                if f != 0 {
                    v -= Integer::from(&f * &pivot_row[c]);
                }
                v.div_exact_mut(&prev);
                row[c] = v;
            }
        }
        prev = pivot_row[col].clone();
        pivot_cols.push(col);
        top += 1;
    }
    a.truncate(top);
    Echelon {
        rows: a,
        pivot_cols,
        ncols,
    }
}

/// Primitive integer vector spanning the kernel direction obtained by setting
/// the first free column to one. `None` when the columns are independent.
pub fn nullspace_vector(a: Vec<Vec<Integer>>, ncols: usize) -> Option<Vec<Integer>> {
    let ech = bareiss_echelon(a, ncols);
    let free = (0..ncols).find(|c| !ech.pivot_cols.contains(c))?;
    let mut x = vec![Rational::new(); ncols];
    x[free] = Rational::from(1);
    for (i, &pc) in ech.pivot_cols.iter().enumerate().rev() {
        let row = &ech.rows[i];
        let mut s = Rational::new();
        for c in pc + 1..ncols {
            if x[c] != 0 && row[c] != 0 {
                s += Rational::from(&x[c] * &row[c]);
            }
        }
        x[pc] = -s / &row[pc];
    }
    Some(primitive(&x))
}

/// Integer multiple of `x` with coprime entries.
pub fn primitive(x: &[Rational]) -> Vec<Integer> {
    let mut lcm = Integer::from(1);
    for v in x {
        lcm.lcm_mut(v.denom());
    }
    let mut ints: Vec<Integer> = x
        .iter()
        .map(|v| Integer::from(v.numer() * Integer::from(&lcm / v.denom())))
        .collect();
    let mut g = Integer::new();
    for v in &ints {
        g.gcd_mut(v);
    }
    if g > 1 {
        for v in &mut ints {
            v.div_exact_mut(&g);
        }
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Integer>> {
        rows.iter().map(|r| r.iter().map(|&x| Integer::from(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ech = bareiss_echelon(a.clone(), 3);
        assert_eq!(ech.rank(), 2);
        let v = nullspace_vector(a.clone(), 3).unwrap();
        for row in &a {
            let dot: Integer = row.iter().zip(&v).map(|(x, y)| Integer::from(x * y)).sum();
            assert_eq!(dot, 0);
        }
        assert!(nullspace_vector(m(&[&[1, 0], &[0, 1], &[1, 1]]), 2).is_none());
    }

    #[test]
    fn tall_system_with_zero_column() {
        let a = m(&[&[0, 3, 6], &[0, 1, 2], &[0, 5, 10], &[0, 2, 4]]);
        let ech = bareiss_echelon(a, 3);
        assert_eq!(ech.pivot_cols, vec![1]);
        let v = nullspace_vector(m(&[&[0, 3, 6], &[0, 1, 2]]), 3).unwrap();
        assert_eq!(v, vec![Integer::from(1), Integer::new(), Integer::new()]);
    }
}
