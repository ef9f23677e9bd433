use rug::ops::Pow;
use rug::{Float, Rational};
use serde_json::json;

use super::analysis::{singularities_with_exponents, SingularityEstimate};
use super::approximant::DifferentialApproximant;
use crate::error::{Error, Result};
use crate::numeric::rational::format_float;
use crate::numeric::BigComplex;

pub const DEFAULT_CLUSTER_RADIUS: f64 = 1e-3;

/// Groups `points` by single linkage: two points are linked when their
/// distance is at most `radius` times the larger modulus.
fn single_linkage(points: &[BigComplex], radius: &Float) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let moduli: Vec<Float> = points.iter().map(|p| p.abs()).collect();
    for i in 0..n {
        for j in i + 1..n {
            let scale = if moduli[i] > moduli[j] { &moduli[i] } else { &moduli[j] };
            let limit = Float::with_val(radius.prec(), radius * scale);
            if points[i].sub(&points[j]).abs() <= limit {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }
    groups
}

fn mean(points: &[&BigComplex], prec: u32) -> BigComplex {
    let mut acc = BigComplex::zero(prec);
    for p in points {
        acc = acc.add(p);
    }
    let inv = Float::with_val(prec, points.len() as u32).recip();
    acc.mul_real(&inv)
}

fn median(values: &mut [Float]) -> Float {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values[values.len() / 2].clone()
}

/// Pools the roots of `Q_K` of every approximant into clusters. Clusters
/// supported by fewer than half of the approximants are marked spurious.
/// Clusters come out sorted by modulus.
pub fn pool_estimates(
    das: &[DifferentialApproximant],
    clustering_radius: &Float,
    precision_bits: u32,
) -> Result<Vec<SingularityEstimate>> {
    if das.len() < 3 {
        return Err(Error::domain(format!(
            "pooling needs at least 3 approximants, got {}",
            das.len()
        )));
    }
    let per_fit = das
        .iter()
        .map(|da| singularities_with_exponents(da, precision_bits))
        .collect::<Result<Vec<_>>>()?;
    Ok(pool_roots(&per_fit, clustering_radius))
}

/// Clusters per-approximant roots, one inner vector per approximant.
///
/// Roots are grouped by single linkage. Within a group each approximant
/// contributes only its root nearest to the componentwise median; the roots
/// it leaves out are clustered again in a further round.
pub fn pool_roots(per_fit: &[Vec<SingularityEstimate>], radius: &Float) -> Vec<SingularityEstimate> {
    let family_size = per_fit.len();
    let all: Vec<(usize, &SingularityEstimate)> = per_fit
        .iter()
        .enumerate()
        .flat_map(|(owner, roots)| roots.iter().map(move |r| (owner, r)))
        .collect();
    let prec = all.first().map_or(64, |(_, s)| s.location.prec());
    let mut out = Vec::new();
    let mut pending: Vec<usize> = (0..all.len()).collect();
    while !pending.is_empty() {
        let locations: Vec<BigComplex> = pending.iter().map(|&i| all[i].1.location.clone()).collect();
        let mut leftover = Vec::new();
        for group in single_linkage(&locations, radius) {
            let members: Vec<usize> = group.iter().map(|&g| pending[g]).collect();
            let centre = BigComplex::new(
                median(&mut members.iter().map(|&i| all[i].1.location.re.clone()).collect::<Vec<_>>()),
                median(&mut members.iter().map(|&i| all[i].1.location.im.clone()).collect::<Vec<_>>()),
            );
            let mut chosen: Vec<(usize, Float)> = Vec::new();
            for &i in &members {
                let dist = all[i].1.location.sub(&centre).abs();
                match chosen.iter_mut().find(|(j, _)| all[*j].0 == all[i].0) {
                    Some(slot) if dist < slot.1 => {
                        leftover.push(slot.0);
                        *slot = (i, dist);
                    }
                    Some(_) => leftover.push(i),
                    None => chosen.push((i, dist)),
                }
            }
            let kept: Vec<&SingularityEstimate> = chosen.iter().map(|&(i, _)| all[i].1).collect();
            out.push(summarize(&kept, family_size, prec));
        }
        pending = leftover;
    }
    out.sort_by(|a, b| a.modulus().partial_cmp(&b.modulus()).unwrap());
    out
}

fn summarize(kept: &[&SingularityEstimate], family_size: usize, prec: u32) -> SingularityEstimate {
    let pts: Vec<&BigComplex> = kept.iter().map(|s| &s.location).collect();
    let centre = mean(&pts, prec);
    let mut spread = Float::new(prec);
    for p in &pts {
        let d = p.sub(&centre).abs();
        if d > spread {
            spread = d;
        }
    }
    let exps: Vec<&BigComplex> = kept.iter().filter_map(|s| s.exponent.as_ref()).collect();
    let exponent = (!exps.is_empty()).then(|| mean(&exps, prec));
    SingularityEstimate {
        location: centre,
        uncertainty: spread,
        exponent,
        n_supporting: kept.len(),
        multiplicity: kept.iter().map(|s| s.multiplicity).max().unwrap_or(1),
        spurious: 2 * kept.len() < family_size,
    }
}

#[derive(Clone, Debug)]
pub struct SubdominanceReport {
    /// Estimates considered, ordered by distance from the origin.
    pub ordered: Vec<SingularityEstimate>,
    /// The closest estimate has larger uncertainty than one farther out.
    pub signature: bool,
    /// The estimate farther out with the smallest uncertainty.
    pub best_resolved: Option<usize>,
    pub expected: Option<ExpectedCheck>,
}

/// Distances of the closest and the best-resolved estimates to
/// `1/(2d−3)^{d−1}` and `1/(d−1)^d`.
#[derive(Clone, Debug)]
pub struct ExpectedCheck {
    pub d: usize,
    pub subdominant_target: Rational,
    pub dominant_target: Rational,
    pub subdominant_error: f64,
    pub dominant_error: f64,
}

/// Looks for the signature of a subdominant growth constant: the singularity
/// closest to the origin being resolved worse than one farther away. Spurious
/// clusters are ignored.
pub fn subdominance_report(estimates: &[SingularityEstimate], d: Option<usize>) -> Result<SubdominanceReport> {
    let mut ordered: Vec<SingularityEstimate> = estimates.iter().filter(|e| !e.spurious).cloned().collect();
    if ordered.len() < 2 {
        return Err(Error::domain("subdominance needs at least two non-spurious estimates"));
    }
    ordered.sort_by(|a, b| a.modulus().partial_cmp(&b.modulus()).unwrap());
    let best_resolved = (1..ordered.len()).min_by(|&a, &b| {
        ordered[a]
            .uncertainty
            .partial_cmp(&ordered[b].uncertainty)
            .unwrap()
    });
    let signature = best_resolved.is_some_and(|i| ordered[0].uncertainty > ordered[i].uncertainty);
    let expected = d.filter(|&d| d >= 3).map(|d| {
        let sub = Rational::from((1, rug::Integer::from(2 * d as u32 - 3).pow(d as u32 - 1)));
        let dom = Rational::from((1, rug::Integer::from(d as u32 - 1).pow(d as u32)));
        let err = |e: &SingularityEstimate, t: &Rational| {
            let prec = e.location.prec();
            let t = BigComplex::from_real(Float::with_val(prec, t));
            e.location.sub(&t).abs().to_f64()
        };
        ExpectedCheck {
            d,
            subdominant_error: err(&ordered[0], &sub),
            dominant_error: best_resolved.map_or(f64::INFINITY, |i| err(&ordered[i], &dom)),
            subdominant_target: sub,
            dominant_target: dom,
        }
    });
    Ok(SubdominanceReport {
        ordered,
        signature,
        best_resolved,
        expected,
    })
}

pub fn estimate_json(e: &SingularityEstimate) -> serde_json::Value {
    let digits = 40;
    json!({
        "re": format_float(&e.location.re, digits),
        "im": format_float(&e.location.im, digits),
        "uncertainty": format_float(&e.uncertainty, 6),
        "exponent": e.exponent.as_ref().map(|x| json!({
            "re": format_float(&x.re, 20),
            "im": format_float(&x.im, 20),
        })),
        "n_supporting": e.n_supporting,
        "multiplicity": e.multiplicity,
        "spurious": e.spurious,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn est(x: f64, unc: f64) -> SingularityEstimate {
        SingularityEstimate {
            location: BigComplex::from_f64(128, x, 0.0),
            uncertainty: Float::with_val(128, unc),
            exponent: None,
            n_supporting: 5,
            multiplicity: 1,
            spurious: false,
        }
    }

    #[test]
    fn clustering_by_relative_radius() {
        let radius = Float::with_val(64, DEFAULT_CLUSTER_RADIUS);
        let per_fit = vec![
            vec![est(0.125, 0.0), est(0.1111, 0.0), est(0.5, 0.0)],
            vec![est(0.12500001, 0.0), est(0.11110002, 0.0)],
            vec![est(0.125, 0.0)],
            vec![],
        ];
        let pooled = pool_roots(&per_fit, &radius);
        assert_eq!(pooled.len(), 3);
        assert_eq!(pooled[0].n_supporting, 2);
        assert!(!pooled[0].spurious);
        assert!(pooled[2].spurious);
        assert!((pooled[1].uncertainty.to_f64() - 2.0 * 0.01e-6 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn one_root_per_approximant() {
        // The second approximant has a companion root next to 0.125 that
        // single linkage chains into the same group.
        let radius = Float::with_val(64, DEFAULT_CLUSTER_RADIUS);
        let per_fit = vec![
            vec![est(0.125, 0.0)],
            vec![est(0.125, 0.0), est(0.12501, 0.0)],
            vec![est(0.125, 0.0)],
        ];
        let pooled = pool_roots(&per_fit, &radius);
        assert_eq!(pooled.len(), 2);
        assert_eq!(pooled[0].location.re, 0.125);
        assert_eq!(pooled[0].uncertainty, 0.0);
        assert_eq!(pooled[0].n_supporting, 3);
        assert!(pooled[1].spurious);
    }

    #[test]
    fn signature_present_and_absent() {
        let r = subdominance_report(&[est(0.125, 1e-20), est(1.0 / 9.0, 1e-7)], Some(3)).unwrap();
        assert!(r.signature);
        let ex = r.expected.unwrap();
        assert!(ex.subdominant_error < 1e-15 && ex.dominant_error < 1e-15);
        let r = subdominance_report(&[est(0.125, 1e-7), est(1.0 / 9.0, 1e-20)], None).unwrap();
        assert!(!r.signature);
        assert!(subdominance_report(&[est(0.1, 0.0)], None).is_err());
    }
}
