//! Success probability for diagonal (incoherent) initial states.
//!
//! All basis states inside one edge class share the same success curve, so a
//! diagonal ensemble only needs one full-space simulation per class and the
//! class weights `a_i = Σ_{(a,b) ∈ class i} P_ab`.

use serde::{Deserialize, Serialize};

use crate::coherence::Coherence;
use crate::config::WalkConfig;
use crate::edges::{classify_edge, EdgeIndexer, SubspaceLabel};
use crate::error::{Result, WalkError};
use crate::walk::EdgeStateVector;

const WEIGHT_TOLERANCE: f64 = 1e-12;

/// `ρ₀ = Σ P_ab |a,b⟩⟨a,b|`, stored as per-class totals.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalEnsemble {
    config: WalkConfig,
    weights: [f64; 4],
    edge_weights: Option<Vec<f64>>,
}

impl DiagonalEnsemble {
    /// Weights in [`SubspaceLabel::ALL`] order.
    pub fn from_subspace_weights(config: WalkConfig, weights: [f64; 4]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(WalkError::InvalidArgument(format!("weights must be non-negative, got {weights:?}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(WalkError::InvalidArgument(format!("weights sum to {total}, expected 1")));
        }
        for label in SubspaceLabel::ALL {
            if label.dimension(&config) == 0 && weights[label.position()] > 0.0 {
                return Err(WalkError::EmptySubspace(label));
            }
        }
        Ok(Self { config, weights, edge_weights: None })
    }

    /// Per-edge probabilities `P_ab` in [`EdgeIndexer`] order.
    pub fn from_edge_weights(config: WalkConfig, edge_weights: Vec<f64>) -> Result<Self> {
        if edge_weights.len() != config.dimension() {
            return Err(WalkError::InvalidArgument(format!(
                "expected {} edge weights, got {}",
                config.dimension(),
                edge_weights.len()
            )));
        }
        if edge_weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(WalkError::InvalidArgument("edge weights must be non-negative".into()));
        }
        let mut weights = [0.0; 4];
        for ((a, b), w) in EdgeIndexer::new(config.n_vertices()).pairs().zip(&edge_weights) {
            weights[classify_edge(a, b, &config)?.position()] += w;
        }
        let mut ensemble = Self::from_subspace_weights(config, weights)?;
        ensemble.edge_weights = Some(edge_weights);
        Ok(ensemble)
    }

    /// `P_ab = 1 / (N (N - 1))` for every edge.
    pub fn uniform(config: WalkConfig) -> Self {
        let total = config.dimension() as f64;
        let weights = SubspaceLabel::ALL.map(|l| l.dimension(&config) as f64 / total);
        Self { config, weights, edge_weights: None }
    }

    pub fn config(&self) -> &WalkConfig {
        &self.config
    }

    pub fn weights(&self) -> [f64; 4] {
        self.weights
    }

    pub fn weight(&self, label: SubspaceLabel) -> f64 {
        self.weights[label.position()]
    }

    pub fn edge_weights(&self) -> Option<&[f64]> {
        self.edge_weights.as_deref()
    }

    /// A diagonal density matrix carries no coherence under either measure.
    pub fn coherence(&self) -> Coherence {
        Coherence::ZERO
    }
}

/// Success probability after `n` steps starting from the canonical basis
/// state of `label`.
pub fn subspace_success(config: &WalkConfig, label: SubspaceLabel, n: usize) -> Result<f64> {
    let (a, b) = label.representative(config)?;
    Ok(EdgeStateVector::basis(*config, a, b)?.evolve(n).success_probability())
}

/// [`subspace_success`] for steps `0..=n_max` from a single evolution.
pub fn subspace_trace(config: &WalkConfig, label: SubspaceLabel, n_max: usize) -> Result<Vec<f64>> {
    let (a, b) = label.representative(config)?;
    trace_from(config, a, b, n_max)
}

/// Same trace seeded from the lexicographically largest edge of the class.
pub fn alternate_subspace_trace(config: &WalkConfig, label: SubspaceLabel, n_max: usize) -> Result<Vec<f64>> {
    let (a, b) = label.alternate_representative(config)?;
    trace_from(config, a, b, n_max)
}

fn trace_from(config: &WalkConfig, a: usize, b: usize, n_max: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n_max + 1);
    EdgeStateVector::basis(*config, a, b)?.trajectory(n_max, |_, s| out.push(s.success_probability()));
    Ok(out)
}

/// Success curves of every class for one `(N, v)`; empty classes are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceTraces {
    pub n_vertices: usize,
    pub n_marked: usize,
    pub traces: [Option<Vec<f64>>; 4],
}

impl SubspaceTraces {
    pub fn compute(config: &WalkConfig, n_max: usize) -> Result<Self> {
        let mut traces: [Option<Vec<f64>>; 4] = Default::default();
        for label in SubspaceLabel::ALL {
            if label.dimension(config) > 0 {
                traces[label.position()] = Some(subspace_trace(config, label, n_max)?);
            }
        }
        Ok(Self { n_vertices: config.n_vertices(), n_marked: config.n_marked(), traces })
    }

    pub fn get(&self, label: SubspaceLabel) -> Option<&[f64]> {
        self.traces[label.position()].as_deref()
    }

    /// `Σ a_i P_s(class i, n)` for the uniform diagonal ensemble.
    pub fn uniform_total(&self, config: &WalkConfig) -> Vec<f64> {
        ensemble_curve(&DiagonalEnsemble::uniform(*config), self)
    }
}

fn ensemble_curve(ensemble: &DiagonalEnsemble, traces: &SubspaceTraces) -> Vec<f64> {
    let len = traces.traces.iter().flatten().map(Vec::len).min().unwrap_or(0);
    (0..len)
        .map(|n| SubspaceLabel::ALL.iter().filter_map(|&l| traces.get(l).map(|t| ensemble.weight(l) * t[n])).sum())
        .collect()
}

pub fn ensemble_success(ensemble: &DiagonalEnsemble, n: usize) -> Result<f64> {
    let mut total = 0.0;
    for label in SubspaceLabel::ALL {
        let w = ensemble.weight(label);
        if w > 0.0 {
            total += w * subspace_success(&ensemble.config, label, n)?;
        }
    }
    Ok(total)
}

/// [`ensemble_success`] for steps `0..=n_max`.
pub fn ensemble_trace(ensemble: &DiagonalEnsemble, n_max: usize) -> Result<Vec<f64>> {
    let traces = SubspaceTraces::compute(&ensemble.config, n_max)?;
    Ok(ensemble_curve(ensemble, &traces))
}

/// Largest gap between two representatives of `label` over `0..=n_max`.
pub fn representative_deviation(config: &WalkConfig, label: SubspaceLabel, n_max: usize) -> Result<f64> {
    let a = subspace_trace(config, label, n_max)?;
    let b = alternate_subspace_trace(config, label, n_max)?;
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub label: SubspaceLabel,
    pub step: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Grid points where the class exists.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceStatistics {
    /// One entry per `(N, v)` grid point, in grid order (`N` outer, `v` inner).
    pub points: Vec<SubspaceTraces>,
    /// Rows ordered by label then step.
    pub summary: Vec<SummaryRow>,
}

/// Class success curves over the `N × v` grid and their mean/min/max per
/// step. Grid points run in parallel; the reduction walks them in grid order,
/// so the result does not depend on scheduling.
pub fn subspace_statistics(n_list: &[usize], v_list: &[usize], n_max: usize, phase: f64) -> Result<SubspaceStatistics> {
    let mut configs = Vec::new();
    for &n in n_list {
        for &v in v_list {
            configs.push(WalkConfig::new(n, v, phase)?);
        }
    }
    let points =
        crate::par_map(&configs, |c| SubspaceTraces::compute(c, n_max)).into_iter().collect::<Result<Vec<_>>>()?;

    let mut summary = Vec::new();
    for label in SubspaceLabel::ALL {
        for step in 0..=n_max {
            let values: Vec<f64> = points.iter().filter_map(|p| p.get(label).map(|t| t[step])).collect();
            if values.is_empty() {
                continue;
            }
            summary.push(SummaryRow {
                label,
                step,
                mean: values.iter().sum::<f64>() / values.len() as f64,
                min: values.iter().copied().fold(f64::INFINITY, f64::min),
                max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                count: values.len(),
            });
        }
    }
    Ok(SubspaceStatistics { points, summary })
}
