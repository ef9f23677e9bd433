use std::fmt;

use crate::error::{Error, Result};

/// Exponent vector `(m_1, …, m_d)` of nonnegative entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain("multi-index must have at least one entry"));
        }
        Ok(MultiIndex(entries))
    }

    /// The index `(n, …, n)` of length `d`.
    pub fn cubical(d: usize, n: u32) -> Self {
        MultiIndex(vec![n; d.max(1)])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn has_zero(&self) -> bool {
        self.0.contains(&0)
    }

    /// Entries in nonincreasing order: the canonical representative of the
    /// permutation orbit.
    pub fn sorted_key(&self) -> MultiIndex {
        let mut e = self.0.clone();
        e.sort_unstable_by(|a, b| b.cmp(a));
        MultiIndex(e)
    }

    pub fn is_sorted_key(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<u32>> for MultiIndex {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        MultiIndex::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_key_is_nonincreasing() {
        let m = MultiIndex::new(vec![1, 4, 0, 4, 2]).unwrap();
        assert_eq!(m.sorted_key().entries(), &[4, 4, 2, 1, 0]);
        assert!(m.sorted_key().is_sorted_key());
        assert!(!m.is_sorted_key());
        assert!(m.has_zero());
        assert_eq!(m.total_degree(), 11);
    }

    #[test]
    fn empty_is_rejected() {
        assert!(MultiIndex::new(vec![]).is_err());
    }
}
