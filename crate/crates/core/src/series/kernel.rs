//! Kernel recurrence for the coefficients of `A_d = G_d / H_d`.
//!
//! Writing `A_d = x_1⋯x_d · B_d` with `B_d = 1/H_d`, the coefficients of `B_d`
//! satisfy `b(k) = [k = 0] − Σ_{v≠0} h_v b(k − v)`, and `a(m) = b(m − 1)`
//! (zero as soon as some `m_i = 0`). Both `H_d` and `b` are invariant under
//! permuting variables, so only nonincreasing `k` are stored. Entries are
//! produced layer by layer in total degree; a layer depends only on the `2d`
//! layers below it.

use std::collections::VecDeque;

use rayon::prelude::*;
use rug::Integer;
use rustc_hash::FxHashMap;

use super::multi_index::MultiIndex;
use super::polynomial::build_denominator;
use crate::error::{Error, Result};

/// Largest dimension the packed keys support.
pub const MAX_DIMENSION: usize = 32;

/// Default memory budget for coefficient storage (bytes).
pub const DEFAULT_MEMORY_BUDGET: u64 = 3 << 30;

/// Symmetry-reduced table of `a_d(m)` for all `m ∈ [0, n_max]^d`.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    d: usize,
    n_max: usize,
    codec: KeyCodec,
    // keyed by the packed sorted shift k = m - 1
    values: FxHashMap<u128, Integer>,
}

impl CoefficientTable {
    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of stored (nonzero-candidate) orbit representatives.
    pub fn stored_len(&self) -> usize {
        self.values.len()
    }

    /// `a_d(m)` for any ordering of the entries of `m`; `None` when `m` has the
    /// wrong length or leaves the box `[0, n_max]^d`.
    pub fn get(&self, m: &[u32]) -> Option<Integer> {
        if m.len() != self.d || m.iter().any(|&e| e as usize > self.n_max) {
            return None;
        }
        if m.contains(&0) {
            return Some(Integer::new());
        }
        let mut k: Vec<u32> = m.iter().map(|e| e - 1).collect();
        k.sort_unstable_by(|a, b| b.cmp(a));
        Some(self.values.get(&self.codec.pack(&k)).cloned().unwrap_or_default())
    }

    pub fn get_index(&self, m: &MultiIndex) -> Option<Integer> {
        self.get(m.entries())
    }

    /// Stored orbit representatives as `(sorted m, a_d(m))`, in no particular
    /// order. Indices with a zero entry are implicit and not listed.
    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, &Integer)> + '_ {
        self.values.iter().map(|(key, v)| {
            let m = self.codec.unpack(*key).into_iter().map(|k| k + 1).collect();
            (MultiIndex::new(m).expect("d >= 1"), v)
        })
    }
}

#[derive(Clone, Copy, Debug)]
struct KeyCodec {
    d: usize,
    bits: u32,
}

impl KeyCodec {
    fn new(d: usize, max_entry: usize) -> Option<Self> {
        let bits = (usize::BITS - max_entry.leading_zeros()).max(1);
        (d * bits as usize <= 128).then_some(KeyCodec { d, bits })
    }

    #[inline]
    fn pack(&self, k: &[u32]) -> u128 {
        k.iter()
            .fold(0u128, |acc, &e| (acc << self.bits) | e as u128)
    }

    fn unpack(&self, mut key: u128) -> Vec<u32> {
        let mask = (1u128 << self.bits) - 1;
        let mut out = vec![0; self.d];
        for slot in out.iter_mut().rev() {
            *slot = (key & mask) as u32;
            key >>= self.bits;
        }
        out
    }
}

/// Denominator terms other than the constant, grouped by coefficient.
struct Stencil {
    groups: Vec<(Integer, Vec<(Vec<u32>, usize)>)>,
    reach: usize,
}

impl Stencil {
    fn new(d: usize) -> Result<Self> {
        let h = build_denominator(d)?;
        let terms = h
            .integer_terms()
            .ok_or_else(|| Error::consistency("H_d has non-integer coefficients"))?;
        let mut groups: Vec<(Integer, Vec<(Vec<u32>, usize)>)> = Vec::new();
        let mut reach = 0;
        for (e, c) in terms {
            let deg: usize = e.iter().map(|&x| x as usize).sum();
            if deg == 0 {
                if c != 1 {
                    return Err(Error::consistency("H_d must have constant term 1"));
                }
                continue;
            }
            reach = reach.max(deg);
            match groups.iter_mut().find(|(g, _)| *g == c) {
                Some((_, list)) => list.push((e, deg)),
                None => groups.push((c, vec![(e, deg)])),
            }
        }
        Ok(Stencil { groups, reach })
    }
}

/// Number of nonincreasing `d`-tuples with entries in `0..side`.
fn multiset_count(side: usize, d: usize) -> f64 {
    // C(side + d - 1, d)
    let mut c = 1f64;
    for i in 0..d {
        c *= (side + i) as f64 / (i + 1) as f64;
    }
    c
}

/// Rough bytes per stored coefficient (hash slot, mpz header, limbs).
fn bytes_per_entry(d: usize, n_max: usize) -> f64 {
    let growth_bits = (d as f64 - 1.0).max(1.0).log2() * d as f64;
    let bits = growth_bits * n_max as f64 + 64.0;
    64.0 + (bits / 64.0).ceil() * 8.0
}

/// All sorted (nonincreasing) tuples of length `d`, entries `< side`, summing
/// to `total`, in lexicographically decreasing order.
fn layer_keys(d: usize, side: usize, total: usize) -> Vec<Vec<u32>> {
    fn rec(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, left: usize, cap: usize, slots: usize) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if left > cap * slots {
            return;
        }
        let hi = cap.min(left);
        let lo = left.div_ceil(slots);
        for v in (lo..=hi).rev() {
            cur.push(v as u32);
            rec(out, cur, left - v, v, slots - 1);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if side == 0 {
        return out;
    }
    rec(&mut out, &mut Vec::with_capacity(d), total, side - 1, d);
    out
}

/// Runs the recurrence over all layers, handing each completed layer (total
/// degree, keys, values) to `sink`. Keeps only the layers still reachable by
/// the stencil unless the sink retains them itself.
fn run_layers<F>(d: usize, side: usize, codec: KeyCodec, mut sink: F) -> Result<()>
where
    F: FnMut(usize, &[Vec<u32>], &[Integer]),
{
    let stencil = Stencil::new(d)?;
    if side == 0 {
        return Ok(());
    }
    let max_total = d * (side - 1);
    let mut window: VecDeque<FxHashMap<u128, Integer>> = VecDeque::new();
    for total in 0..=max_total {
        let keys = layer_keys(d, side, total);
        let values: Vec<Integer> = {
            let window = &window;
            let lookup = |shift: usize, key: u128| -> Option<&Integer> {
                // window.back() is layer total-1
                let depth = window.len().checked_sub(shift)?;
                window.get(depth)?.get(&key)
            };
            keys.par_iter()
                .map_init(
                    || {
                        (
                            vec![Integer::new(); stencil.groups.len()],
                            vec![0u32; d],
                        )
                    },
                    |(acc, scratch), k| {
                        let mut out = Integer::from(u32::from(total == 0));
                        for (gi, (_, list)) in stencil.groups.iter().enumerate() {
                            let a = &mut acc[gi];
                            *a = Integer::new();
                            'terms: for (v, deg) in list {
                                for ((s, &ki), &vi) in scratch.iter_mut().zip(k).zip(v) {
                                    if ki < vi {
                                        continue 'terms;
                                    }
                                    *s = ki - vi;
                                }
                                insertion_sort_desc(scratch);
                                if let Some(b) = lookup(*deg, codec.pack(scratch)) {
                                    *a += b;
                                }
                            }
                        }
                        for (gi, (c, _)) in stencil.groups.iter().enumerate() {
                            if acc[gi] != 0 {
                                out -= Integer::from(&acc[gi] * c);
                            }
                        }
                        out
                    },
                )
                .collect()
        };
        sink(total, &keys, &values);
        let mut layer = FxHashMap::default();
        layer.reserve(keys.len());
        for (k, v) in keys.iter().zip(values) {
            if v != 0 {
                layer.insert(codec.pack(k), v);
            }
        }
        window.push_back(layer);
        if window.len() > stencil.reach {
            window.pop_front();
        }
    }
    Ok(())
}

#[inline]
fn insertion_sort_desc(v: &mut [u32]) {
    for i in 1..v.len() {
        let x = v[i];
        let mut j = i;
        while j > 0 && v[j - 1] < x {
            v[j] = v[j - 1];
            j -= 1;
        }
        v[j] = x;
    }
}

fn check_args(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::domain(format!("requires d >= 2, got d={d}")));
    }
    if d > MAX_DIMENSION {
        return Err(Error::domain(format!(
            "d={d} exceeds the supported maximum {MAX_DIMENSION}"
        )));
    }
    Ok(())
}

fn codec_for(d: usize, n_max: usize) -> Result<KeyCodec> {
    KeyCodec::new(d, n_max.saturating_sub(1)).ok_or_else(|| Error::Resource {
        d,
        n_max,
        detail: "index does not fit the 128-bit packed key".into(),
    })
}

/// All `a_d(m)`, `m ∈ [0, n_max]^d`, with the default memory budget.
pub fn gf_coefficients(d: usize, n_max: usize) -> Result<CoefficientTable> {
    gf_coefficients_with_budget(d, n_max, DEFAULT_MEMORY_BUDGET)
}

pub fn gf_coefficients_with_budget(d: usize, n_max: usize, budget: u64) -> Result<CoefficientTable> {
    check_args(d)?;
    let estimate = multiset_count(n_max, d) * bytes_per_entry(d, n_max);
    if estimate > budget as f64 {
        return Err(Error::Resource {
            d,
            n_max,
            detail: format!(
                "full table needs about {:.0} MiB, budget is {} MiB",
                estimate / (1 << 20) as f64,
                budget >> 20
            ),
        });
    }
    let codec = codec_for(d, n_max)?;
    let mut values = FxHashMap::default();
    run_layers(d, n_max, codec, |_, keys, vals| {
        for (k, v) in keys.iter().zip(vals) {
            if *v != 0 {
                values.insert(codec.pack(k), v.clone());
            }
        }
    })?;
    Ok(CoefficientTable {
        d,
        n_max,
        codec,
        values,
    })
}

/// `[C_d(0), …, C_d(n_max)]` with the default memory budget.
pub fn cubical_series(d: usize, n_max: usize) -> Result<Vec<Integer>> {
    cubical_series_with_budget(d, n_max, DEFAULT_MEMORY_BUDGET)
}

/// Only the sliding window of `2d + 1` layers is kept in memory.
pub fn cubical_series_with_budget(d: usize, n_max: usize, budget: u64) -> Result<Vec<Integer>> {
    check_args(d)?;
    let estimate = window_entries(d, n_max) * bytes_per_entry(d, n_max);
    if estimate > budget as f64 {
        return Err(Error::Resource {
            d,
            n_max,
            detail: format!(
                "layer window needs about {:.0} MiB, budget is {} MiB",
                estimate / (1 << 20) as f64,
                budget >> 20
            ),
        });
    }
    let codec = codec_for(d, n_max)?;
    let mut out = vec![Integer::new(); n_max + 1];
    run_layers(d, n_max, codec, |total, keys, vals| {
        if total % d == 0 {
            let n = total / d;
            let diag = vec![n as u32; d];
            if let Some(pos) = keys.iter().position(|k| *k == diag) {
                out[n + 1] = vals[pos].clone();
            }
        }
    })?;
    Ok(out)
}

/// Upper estimate of the entries held at once by the layer window.
fn window_entries(d: usize, n_max: usize) -> f64 {
    if n_max == 0 {
        return 0.0;
    }
    // The middle layer is the widest; approximate it by the average layer
    // size times a shape factor and keep 2d + 1 of them.
    let layers = (d * (n_max - 1) + 1) as f64;
    let avg = multiset_count(n_max, d) / layers;
    avg * 2.0 * (2 * d + 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layer_enumeration_counts() {
        let side = 5;
        let d = 3;
        let total: usize = (0..=d * (side - 1)).map(|t| layer_keys(d, side, t).len()).sum();
        assert_eq!(total as f64, multiset_count(side, d));
        for k in layer_keys(d, side, 6) {
            assert!(k.windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(k.iter().sum::<u32>(), 6);
        }
    }

    #[test]
    fn codec_round_trip() {
        let c = KeyCodec::new(5, 40).unwrap();
        let k = vec![40, 17, 17, 3, 0];
        assert_eq!(c.unpack(c.pack(&k)), k);
        assert!(KeyCodec::new(40, 1 << 20).is_none());
    }

    #[test]
    fn matrix_case_diagonal() {
        // C_2(n) = n: the diagonal of x1 x2 / ((1-x1)(1-x2)(1-x1 x2)).
        let s = cubical_series(2, 12).unwrap();
        let want: Vec<Integer> = (0..=12).map(Integer::from).collect();
        assert_eq!(s, want);
    }

    #[test]
    fn table_lookups() {
        let t = gf_coefficients(3, 4).unwrap();
        assert_eq!(t.get(&[1, 1, 1]).unwrap(), 1);
        assert_eq!(t.get(&[2, 2, 2]).unwrap(), 6);
        assert_eq!(t.get(&[0, 3, 2]).unwrap(), 0);
        assert_eq!(t.get(&[3, 1, 2]), t.get(&[1, 2, 3]));
        assert!(t.get(&[5, 1, 1]).is_none());
        assert!(t.get(&[1, 1]).is_none());
        assert!(t.iter().all(|(m, v)| m.is_sorted_key() && *v >= 0));
    }

    #[test]
    fn budget_is_enforced() {
        let err = gf_coefficients_with_budget(5, 40, 1 << 20).unwrap_err();
        match err {
            Error::Resource { d, n_max, .. } => assert_eq!((d, n_max), (5, 40)),
            e => panic!("unexpected {e}"),
        }
        assert!(cubical_series_with_budget(5, 40, 1 << 10).is_err());
    }

    #[test]
    fn rejects_small_d() {
        assert!(gf_coefficients(1, 3).is_err());
        assert!(cubical_series(1, 3).is_err());
    }

    #[test]
    fn zero_n_max() {
        assert_eq!(cubical_series(3, 0).unwrap(), vec![Integer::new()]);
        let t = gf_coefficients(3, 0).unwrap();
        assert_eq!(t.get(&[0, 0, 0]).unwrap(), 0);
    }
}
