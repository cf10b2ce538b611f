use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::embed::EmbeddingSet;
use super::exact::{ExactGroup, IntMat};
use super::ArchimedeanError;

#[derive(Debug, Clone, Serialize)]
pub struct NormRow {
    pub l: usize,
    /// `|∏_l S|`.
    pub size: usize,
    /// `max_{g ∈ ∏_l S} log ‖σ̂(g)‖`, operator norm maximized over embeddings.
    pub max_log_norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormGrowth {
    pub rows: Vec<NormRow>,
    /// Least-squares slope of `max_log_norm` against `l`.
    pub slope: f64,
    pub intercept: f64,
    /// `max(l₁ + l₂) ≤ max(l₁) + max(l₂)` for all tested splits.
    pub subadditive: bool,
}

/// Maximal log-norms over the exact product sets `∏_l S`, `l = 1..=l_max`.
pub fn norm_growth(
    group: &ExactGroup,
    emb: &EmbeddingSet,
    s: &[IntMat],
    l_max: usize,
    cap: usize,
) -> Result<NormGrowth, ArchimedeanError> {
    if s.is_empty() || l_max == 0 {
        return Err(ArchimedeanError::InvalidParameter("need a nonempty set and l_max ≥ 1"));
    }
    let base: Vec<IntMat> = s.iter().cloned().collect::<HashSet<_>>().into_iter().collect();
    let log_norm = |g: &IntMat| -> Result<f64, ArchimedeanError> {
        let mut best = f64::NEG_INFINITY;
        for e in 0..emb.len() {
            let m = emb.sigma(group, g, e)?;
            let top = m.singular_values().iter().copied().fold(0.0, f64::max);
            best = best.max(top.ln());
        }
        Ok(best)
    };
    let mut rows = Vec::with_capacity(l_max);
    let mut layer = base.clone();
    for l in 1..=l_max {
        if l > 1 {
            let next: HashSet<IntMat> = layer
                .par_iter()
                .flat_map_iter(|x| base.iter().map(move |y| group.mul(x, y)))
                .collect();
            if next.len() > cap {
                return Err(ArchimedeanError::TooLarge { size: next.len(), cap });
            }
            layer = next.into_iter().collect();
        }
        let max_log_norm = layer
            .par_iter()
            .map(log_norm)
            .collect::<Result<Vec<f64>, _>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        rows.push(NormRow {
            l,
            size: layer.len(),
            max_log_norm,
        });
    }
    let n = rows.len() as f64;
    let mean_l = rows.iter().map(|r| r.l as f64).sum::<f64>() / n;
    let mean_y = rows.iter().map(|r| r.max_log_norm).sum::<f64>() / n;
    let sxx: f64 = rows.iter().map(|r| (r.l as f64 - mean_l).powi(2)).sum();
    let sxy: f64 = rows
        .iter()
        .map(|r| (r.l as f64 - mean_l) * (r.max_log_norm - mean_y))
        .sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = mean_y - slope * mean_l;
    let at = |l: usize| rows[l - 1].max_log_norm;
    let subadditive = (2..=l_max).all(|l| (1..l).all(|a| at(l) <= at(a) + at(l - a) + 1e-9));
    Ok(NormGrowth {
        rows,
        slope,
        intercept,
        subadditive,
    })
}
