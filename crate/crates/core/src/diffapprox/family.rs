use rayon::prelude::*;
use rug::{Float, Integer};
use serde_json::json;

use super::analysis::{singularities_with_exponents, SingularityEstimate, DEFAULT_PRECISION};
use super::approximant::{fit_approximant, DifferentialApproximant, Shape};
use super::pool::{estimate_json, pool_roots, subdominance_report, SubdominanceReport, DEFAULT_CLUSTER_RADIUS};
use crate::error::{Error, Result};
use crate::numeric::rational::format_float;

#[derive(Clone, Debug)]
pub struct FamilyConfig {
    pub orders: Vec<usize>,
    pub inhom_degrees: Vec<usize>,
    /// Degree moved from `Q_0` to `Q_K` relative to the balanced split.
    pub shifts: Vec<i64>,
    pub precision_bits: u32,
    pub cluster_radius: f64,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig {
            orders: vec![1, 2, 3],
            inhom_degrees: (0..=4).collect(),
            shifts: vec![-1, 0, 1],
            precision_bits: DEFAULT_PRECISION,
            cluster_radius: DEFAULT_CLUSTER_RADIUS,
        }
    }
}

/// Shape of order `order` using exactly `n_terms` terms, with the `Q_k`
/// degrees as equal as possible (extra degree going to the higher `k`) and
/// then `shift` moved from `Q_0` to `Q_K`.
pub fn balanced_shape(n_terms: usize, order: usize, inhom_degree: usize, shift: i64) -> Option<Shape> {
    if order == 0 {
        return None;
    }
    let slots = n_terms.checked_sub(inhom_degree + order)?;
    let per = slots / (order + 1);
    if per == 0 {
        return None;
    }
    let extra = slots % (order + 1);
    let mut degrees: Vec<i64> = (0..=order)
        .map(|k| per as i64 - 1 + i64::from(k + extra > order))
        .collect();
    degrees[order] += shift;
    degrees[0] -= shift;
    if degrees.iter().any(|&d| d < 0) {
        return None;
    }
    let shape = Shape::new(degrees.into_iter().map(|d| d as usize).collect(), inhom_degree).ok()?;
    debug_assert_eq!(shape.terms_needed(), n_terms);
    Some(shape)
}

pub fn family_shapes(n_terms: usize, config: &FamilyConfig) -> Vec<Shape> {
    let mut out = Vec::new();
    for &k in &config.orders {
        for &m in &config.inhom_degrees {
            for &s in &config.shifts {
                if let Some(shape) = balanced_shape(n_terms, k, m, s) {
                    if !out.contains(&shape) {
                        out.push(shape);
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug)]
pub struct FitOutcome {
    pub shape: Shape,
    pub fit: Result<(DifferentialApproximant, Vec<SingularityEstimate>)>,
}

/// Fits every shape independently; results keep the order of `shapes`.
pub fn fit_family(terms: &[Integer], shapes: &[Shape], precision_bits: u32) -> Vec<FitOutcome> {
    shapes
        .par_iter()
        .map(|shape| {
            let fit = fit_approximant(terms, &shape.degrees, shape.inhom_degree).and_then(|da| {
                let roots = singularities_with_exponents(&da, precision_bits)?;
                Ok((da, roots))
            });
            if let Err(e) = &fit {
                log::debug!("{shape}: {e}");
            }
            FitOutcome {
                shape: shape.clone(),
                fit,
            }
        })
        .collect()
}

#[derive(Debug)]
pub struct FamilyReport {
    pub n_terms: usize,
    pub config: FamilyConfig,
    pub fits: Vec<FitOutcome>,
    pub clusters: Vec<SingularityEstimate>,
    pub subdominance: Option<SubdominanceReport>,
}

impl FamilyReport {
    pub fn successful(&self) -> usize {
        self.fits.iter().filter(|f| f.fit.is_ok()).count()
    }

    /// Non-spurious cluster nearest to `target` on the real line.
    pub fn nearest_cluster(&self, target: f64) -> Option<&SingularityEstimate> {
        self.clusters
            .iter()
            .filter(|c| !c.spurious)
            .min_by(|a, b| {
                let da = (a.location.re.to_f64() - target).abs() + a.location.im.to_f64().abs();
                let db = (b.location.re.to_f64() - target).abs() + b.location.im.to_f64().abs();
                da.partial_cmp(&db).unwrap()
            })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let fits: Vec<_> = self
            .fits
            .iter()
            .map(|f| match &f.fit {
                Ok((da, roots)) => json!({
                    "shape": f.shape,
                    "ok": true,
                    "terms_used": da.terms_used,
                    "roots": roots.iter().map(estimate_json).collect::<Vec<_>>(),
                }),
                Err(e) => json!({ "shape": f.shape, "ok": false, "error": e.to_string() }),
            })
            .collect();
        let sub = self.subdominance.as_ref().map(|s| {
            json!({
                "signature": s.signature,
                "closest": estimate_json(&s.ordered[0]),
                "best_resolved": s.best_resolved.map(|i| estimate_json(&s.ordered[i])),
                "expected": s.expected.as_ref().map(|e| json!({
                    "d": e.d,
                    "subdominant_target": crate::numeric::format_rational(&e.subdominant_target),
                    "dominant_target": crate::numeric::format_rational(&e.dominant_target),
                    "subdominant_error": e.subdominant_error,
                    "dominant_error": e.dominant_error,
                })),
            })
        });
        json!({
            "n_terms": self.n_terms,
            "family": {
                "orders": self.config.orders,
                "inhom_degrees": self.config.inhom_degrees,
                "shifts": self.config.shifts,
                "precision_bits": self.config.precision_bits,
                "cluster_radius": self.config.cluster_radius,
                "uncertainty": "max deviation of a cluster member from the cluster mean, one root per approximant",
                "successful_fits": self.successful(),
            },
            "fits": fits,
            "clusters": self.clusters.iter().map(estimate_json).collect::<Vec<_>>(),
            "subdominance": sub,
        })
    }
}

/// Fits the family to `terms[..n_terms]`, pools the roots and checks for the
/// subdominance signature (against the cubical targets when `d` is given).
pub fn analyze_series(terms: &[Integer], n_terms: usize, d: Option<usize>, config: &FamilyConfig) -> Result<FamilyReport> {
    if n_terms > terms.len() {
        return Err(Error::domain(format!(
            "requested {n_terms} terms, only {} available",
            terms.len()
        )));
    }
    let shapes = family_shapes(n_terms, config);
    let fits = fit_family(&terms[..n_terms], &shapes, config.precision_bits);
    let ok = fits.iter().filter(|f| f.fit.is_ok()).count();
    if ok < 3 {
        return Err(Error::DegenerateFit(format!(
            "only {ok} of {} approximants could be fitted",
            fits.len()
        )));
    }
    let per_fit: Vec<Vec<SingularityEstimate>> = fits
        .iter()
        .filter_map(|f| f.fit.as_ref().ok())
        .map(|(_, roots)| roots.clone())
        .collect();
    let radius = Float::with_val(64, config.cluster_radius);
    let clusters = pool_roots(&per_fit, &radius);
    let subdominance = subdominance_report(&clusters, d).ok();
    Ok(FamilyReport {
        n_terms,
        config: config.clone(),
        fits,
        clusters,
        subdominance,
    })
}

/// Short human-readable cluster line.
pub fn describe(e: &SingularityEstimate) -> String {
    format!(
        "{} ± {} (support {}{})",
        format_float(&e.location.re, 25),
        format_float(&e.uncertainty, 3),
        e.n_supporting,
        if e.spurious { ", spurious" } else { "" }
    )
}
