//! Line-oriented series cache files:
//!
//! ```text
//! diagasym-series v1 d=<d> n_max=<n>
//! C_d(0)
//! …
//! C_d(n)
//! ```
//!
//! One exact decimal integer per line.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rug::Integer;

use crate::error::{Error, Result};

pub const HEADER_TAG: &str = "diagasym-series v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesFile {
    pub d: usize,
    pub n_max: usize,
    pub terms: Vec<Integer>,
}

pub fn header_line(d: usize, n_max: usize) -> String {
    format!("{HEADER_TAG} d={d} n_max={n_max}")
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let rest = line.strip_prefix(HEADER_TAG)?.strip_prefix(' ')?;
    let (d, n) = rest.split_once(' ')?;
    let d = d.strip_prefix("d=")?.parse().ok()?;
    let n = n.strip_prefix("n_max=")?.parse().ok()?;
    Some((d, n))
}

fn parse_term(s: &str) -> Option<Integer> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn write_series(path: &Path, d: usize, terms: &[Integer]) -> Result<()> {
    if terms.is_empty() {
        return Err(Error::domain("cannot write an empty series"));
    }
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension("tmp");
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        writeln!(w, "{}", header_line(d, terms.len() - 1))?;
        for t in terms {
            writeln!(w, "{t}")?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_series(path: &Path) -> Result<SeriesFile> {
    let bad = |detail: String| Error::Format {
        path: Some(path.to_path_buf()),
        detail,
    };
    let reader = BufReader::new(fs::File::open(path)?);
    let mut lines = reader.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))??;
    let (d, n_max) = parse_header(header.trim_end()).ok_or_else(|| bad(format!("bad header {header:?}")))?;
    let mut terms = Vec::with_capacity(n_max + 1);
    for (i, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let t = parse_term(line).ok_or_else(|| bad(format!("line {}: not a decimal integer", i + 2)))?;
        terms.push(t);
    }
    if terms.len() != n_max + 1 {
        return Err(bad(format!(
            "header promises {} terms, file has {}",
            n_max + 1,
            terms.len()
        )));
    }
    Ok(SeriesFile { d, n_max, terms })
}

/// Path of the cache entry for dimension `d`.
pub fn cache_path(cache_dir: &Path, d: usize) -> PathBuf {
    cache_dir.join(format!("cubical-d{d}.series"))
}

/// Cached `[C_d(0), …, C_d(n_max)]`, if a consistent cache file holds at least
/// that many terms. Files with a foreign header or inconsistent length are
/// ignored.
pub fn load_cached(cache_dir: &Path, d: usize, n_max: usize) -> Option<Vec<Integer>> {
    let file = read_series(&cache_path(cache_dir, d)).ok()?;
    if file.d != d || file.n_max < n_max {
        return None;
    }
    let mut terms = file.terms;
    terms.truncate(n_max + 1);
    Some(terms)
}

/// Loads the series from the cache or computes and stores it. Returns the terms
/// and whether they came from the cache.
pub fn cached_cubical_series(cache_dir: &Path, d: usize, n_max: usize) -> Result<(Vec<Integer>, bool)> {
    if let Some(t) = load_cached(cache_dir, d, n_max) {
        return Ok((t, true));
    }
    let terms = super::cubical_series(d, n_max)?;
    write_series(&cache_path(cache_dir, d), d, &terms)?;
    Ok((terms, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn write_then_read() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.series");
        let terms: Vec<Integer> = (0..=10).map(Integer::from).collect();
        write_series(&path, 2, &terms).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("diagasym-series v1 d=2 n_max=10\n0\n1\n"));
        assert_eq!(text.lines().count(), 12);
        let back = read_series(&path).unwrap();
        assert_eq!(back, SeriesFile { d: 2, n_max: 10, terms });
    }

    #[test]
    fn rejects_malformed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.series");
        fs::write(&path, "diagasym-series v1 d=3 n_max=2\n0\n1\n").unwrap();
        assert!(read_series(&path).is_err());
        fs::write(&path, "diagasym-series v1 d=3 n_max=1\n0\n1e5\n").unwrap();
        assert!(read_series(&path).is_err());
        fs::write(&path, "other v1 d=3 n_max=1\n0\n1\n").unwrap();
        assert!(read_series(&path).is_err());
    }

    #[test]
    fn cache_respects_header() {
        let dir = tempfile::tempdir().unwrap();
        let (t, hit) = cached_cubical_series(dir.path(), 3, 6).unwrap();
        assert!(!hit);
        assert_eq!(t[2], 6);
        let (t2, hit) = cached_cubical_series(dir.path(), 3, 4).unwrap();
        assert!(hit);
        assert_eq!(&t2[..], &t[..5]);
        // A file for d=3 placed under the d=4 name is not trusted.
        fs::copy(cache_path(dir.path(), 3), cache_path(dir.path(), 4)).unwrap();
        assert!(load_cached(dir.path(), 4, 3).is_none());
        let (_, hit) = cached_cubical_series(dir.path(), 3, 8).unwrap();
        assert!(!hit);
    }
}
