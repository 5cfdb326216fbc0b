//! Oracle-query cost of the search versus the reflection phase.
//!
//! A run walks `m` steps (one oracle call each), measures, then spends two
//! more calls checking both endpoints of the measured edge. Runs repeat until
//! a marked vertex turns up, so the expected cost is `(m + 2) / P_φ(m)`.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coherence::{coherence_symmetric, Coherence};
use crate::config::WalkConfig;
use crate::error::{Result, WalkError};
use crate::reduced::{success_curve, ReducedState};

/// Local maxima averaged per phase in [`phase_sweep`].
pub const DEFAULT_PEAK_COUNT: usize = 3;

/// Monte Carlo trials behind each classical baseline cross-check.
pub const DEFAULT_TRIALS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryCurve {
    pub phase: f64,
    pub best_m: usize,
    pub p_at_m: f64,
    pub avg_queries: f64,
    pub blind_queries: f64,
    pub memory_queries: f64,
}

/// Expected total oracle calls when measuring after `m` steps; `+∞` when the
/// success probability vanishes.
pub fn avg_queries(config: &WalkConfig, m: usize) -> f64 {
    let p = ReducedState::initial(*config).evolve(m).success_probability();
    cost(m, p)
}

fn cost(m: usize, p: f64) -> f64 {
    if p > 0.0 {
        (m as f64 + 2.0) / p
    } else {
        f64::INFINITY
    }
}

/// `avg_queries(config, m)` for `m` in `0..=m_max`.
pub fn query_costs(config: &WalkConfig, m_max: usize) -> Vec<f64> {
    success_curve(config, m_max).iter().enumerate().map(|(m, &p)| cost(m, p)).collect()
}

/// `4 ⌈(π/2) sqrt(N / 2v)⌉`, four times the large-`N` optimal step.
pub fn default_m_max(config: &WalkConfig) -> usize {
    let n = config.n_vertices() as f64;
    let v = config.n_marked() as f64;
    4 * (FRAC_PI_2 * (n / (2.0 * v)).sqrt()).ceil() as usize
}

/// Exhaustive minimum of the expected cost over `m ∈ [0, m_max]`, earliest
/// `m` on ties. Baselines are the analytic values.
pub fn optimize_queries(config: &WalkConfig, m_max: usize) -> Result<QueryCurve> {
    if m_max == 0 {
        return Err(WalkError::InvalidArgument("m_max must be at least 1".into()));
    }
    let curve = success_curve(config, m_max);
    let mut best = 0;
    for m in 1..=m_max {
        if cost(m, curve[m]) < cost(best, curve[best]) {
            best = m;
        }
    }
    Ok(QueryCurve {
        phase: config.phase(),
        best_m: best,
        p_at_m: curve[best],
        avg_queries: cost(best, curve[best]),
        blind_queries: blind_expectation(config.n_vertices(), config.n_marked()),
        memory_queries: memory_expectation(config.n_vertices(), config.n_marked()),
    })
}

/// Expected queries of uniform sampling with replacement, `N / v`.
pub fn blind_expectation(n: usize, v: usize) -> f64 {
    n as f64 / v as f64
}

/// Expected queries of sampling without replacement, `(N + 1) / (v + 1)`.
pub fn memory_expectation(n: usize, v: usize) -> f64 {
    (n as f64 + 1.0) / (v as f64 + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub trials: usize,
}

impl MonteCarloEstimate {
    fn from_samples(samples: impl Iterator<Item = f64>) -> Self {
        let (mut n, mut sum, mut sum_sq) = (0usize, 0.0, 0.0);
        for x in samples {
            n += 1;
            sum += x;
            sum_sq += x * x;
        }
        let mean = sum / n as f64;
        let var = if n > 1 { (sum_sq - n as f64 * mean * mean) / (n as f64 - 1.0) } else { 0.0 };
        Self { mean, std_err: (var.max(0.0) / n as f64).sqrt(), trials: n }
    }

    /// Whether `value` lies within `k` standard errors of the estimate. A
    /// zero-variance estimate must match exactly.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_err + 1e-12 * value.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalBaselines {
    pub blind: f64,
    pub memory: f64,
    pub blind_mc: MonteCarloEstimate,
    pub memory_mc: MonteCarloEstimate,
}

impl ClassicalBaselines {
    /// Both analytic values within three standard errors of their Monte Carlo
    /// estimates.
    pub fn validated(&self) -> bool {
        self.blind_mc.agrees_with(self.blind, 3.0) && self.memory_mc.agrees_with(self.memory, 3.0)
    }
}

/// Analytic classical costs plus a seeded Monte Carlo cross-check. `v = N` is
/// allowed here (every query hits).
pub fn classical_baselines(n: usize, v: usize, seed: u64, trials: usize) -> Result<ClassicalBaselines> {
    if trials == 0 {
        return Err(WalkError::InvalidArgument("need at least one trial".into()));
    }
    if n == 0 || v == 0 || v > n {
        return Err(WalkError::InvalidArgument(format!("need 1 <= v <= N, got v={v}, N={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blind_mc = MonteCarloEstimate::from_samples((0..trials).map(|_| {
        let mut queries = 1u64;
        while rng.gen_range(0..n) >= v {
            queries += 1;
        }
        queries as f64
    }));
    let mut deck: Vec<usize> = (0..n).collect();
    let memory_mc = MonteCarloEstimate::from_samples((0..trials).map(|_| {
        // partial Fisher-Yates: draw until a marked label shows up
        for k in 0..n {
            let j = rng.gen_range(k..n);
            deck.swap(k, j);
            if deck[k] < v {
                return (k + 1) as f64;
            }
        }
        unreachable!("v >= 1 marked vertices in the deck")
    }));
    Ok(ClassicalBaselines { blind: blind_expectation(n, v), memory: memory_expectation(n, v), blind_mc, memory_mc })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    /// Horizon for the maximum and the query optimization; `None` uses
    /// [`default_m_max`].
    pub m_max: Option<usize>,
    pub peak_count: usize,
    pub seed: u64,
    pub trials: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { m_max: None, peak_count: DEFAULT_PEAK_COUNT, seed: 0, trials: DEFAULT_TRIALS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub phase: f64,
    /// Largest success probability over `0..=m_max`.
    pub max_p: f64,
    pub step_at_max: usize,
    /// Coherence at `step_at_max`.
    pub coherence_at_max: Coherence,
    pub c_r_norm_at_max: f64,
    pub c_l_norm_at_max: f64,
    /// Steps of the first local maxima of the success curve (searched up to
    /// `4 m_max`). Falls back to `step_at_max` when the curve has no peak.
    pub peak_steps: Vec<usize>,
    pub peak_mean_p: f64,
    pub peak_mean_c_r_norm: f64,
    pub peak_mean_c_l_norm: f64,
    pub curve: QueryCurve,
    pub baselines: ClassicalBaselines,
}

/// Evaluates the search at each phase in `phases` for fixed `(N, v)`.
/// Points run in parallel and come back in input order.
pub fn phase_sweep(
    n_vertices: usize,
    n_marked: usize,
    phases: &[f64],
    options: &SweepOptions,
) -> Result<Vec<PhasePoint>> {
    let configs = phases.iter().map(|&phi| WalkConfig::new(n_vertices, n_marked, phi)).collect::<Result<Vec<_>>>()?;
    // the classical costs depend on (N, v) only, so one estimate serves every point
    let baselines = classical_baselines(n_vertices, n_marked, options.seed, options.trials)?;
    crate::par_map(&configs, |c| sweep_point(c, options, &baselines)).into_iter().collect()
}

fn sweep_point(config: &WalkConfig, options: &SweepOptions, baselines: &ClassicalBaselines) -> Result<PhasePoint> {
    let m_max = options.m_max.unwrap_or_else(|| default_m_max(config)).max(1);
    let horizon = 4 * m_max;
    let states = ReducedState::initial(*config).trajectory(horizon);
    let probs: Vec<f64> = states.iter().map(ReducedState::success_probability).collect();
    let base = coherence_symmetric(&states[0]);
    let norm = |c: Coherence| (c.relative_entropy / base.relative_entropy, c.l1 / base.l1);

    let mut step_at_max = 0;
    for m in 1..=m_max {
        if probs[m] > probs[step_at_max] {
            step_at_max = m;
        }
    }
    let coherence_at_max = coherence_symmetric(&states[step_at_max]);
    let (c_r_norm_at_max, c_l_norm_at_max) = norm(coherence_at_max);

    let mut peak_steps: Vec<usize> = (1..horizon)
        .filter(|&k| probs[k] > probs[k - 1] && probs[k] >= probs[k + 1])
        .take(options.peak_count)
        .collect();
    if peak_steps.is_empty() {
        peak_steps.push(step_at_max);
    }
    let count = peak_steps.len() as f64;
    let peak_mean_p = peak_steps.iter().map(|&k| probs[k]).sum::<f64>() / count;
    let (sum_r, sum_l) = peak_steps.iter().fold((0.0, 0.0), |(r, l), &k| {
        let (a, b) = norm(coherence_symmetric(&states[k]));
        (r + a, l + b)
    });

    let curve = optimize_queries(config, m_max)?;
    Ok(PhasePoint {
        phase: config.phase(),
        max_p: probs[step_at_max],
        step_at_max,
        coherence_at_max,
        c_r_norm_at_max,
        c_l_norm_at_max,
        peak_steps,
        peak_mean_p,
        peak_mean_c_r_norm: sum_r / count,
        peak_mean_c_l_norm: sum_l / count,
        curve,
        baselines: *baselines,
    })
}

/// `count` evenly spaced phases covering `[0, π]` inclusive.
pub fn even_phases(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![std::f64::consts::PI],
        _ => (0..count).map(|i| std::f64::consts::PI * i as f64 / (count - 1) as f64).collect(),
    }
}
