//! Relative-entropy and l1-norm coherence in the full edge basis.
//!
//! For a pure state with amplitudes `a_k` and `p_k = |a_k|²`:
//!
//! * `C_r = -Σ p_k log₂ p_k` (the von Neumann term vanishes),
//! * `C_l = Σ_{i≠j} |a_i||a_j| = (Σ |a_k|)² - 1`.
//!
//! A state that is uniform on each edge class has `|a_k| = |c_i| / sqrt(d_i)`
//! inside class `i`, so both sums collapse to four terms.

use serde::{Deserialize, Serialize};

use crate::config::WalkConfig;
use crate::edges::SubspaceLabel;
use crate::error::{Result, WalkError};
use crate::reduced::{ReducedCoefficients, ReducedState};
use crate::walk::EdgeStateVector;

/// Maximum tolerated `| ‖ψ‖ - 1 |` for [`coherence_direct`].
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coherence {
    /// Relative-entropy coherence in bits.
    pub relative_entropy: f64,
    pub l1: f64,
}

impl Coherence {
    pub const ZERO: Coherence = Coherence { relative_entropy: 0.0, l1: 0.0 };
}

/// One row of a coherence trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceSample {
    pub step: usize,
    pub p_success: f64,
    pub c_r: f64,
    pub c_l: f64,
    pub c_r_norm: f64,
    pub c_l_norm: f64,
}

pub fn coherence_direct(state: &EdgeStateVector) -> Result<Coherence> {
    let deviation = (state.norm() - 1.0).abs();
    if deviation > NORM_TOLERANCE {
        return Err(WalkError::NotNormalized(deviation));
    }
    // N (N - 1) terms: compensated sums keep the uniform state at log2(dim)
    let mut entropy = CompensatedSum::default();
    let mut abs_sum = CompensatedSum::default();
    for amp in state.amplitudes() {
        let p = amp.norm_sqr();
        if p > 0.0 {
            entropy.add(-p * p.log2());
        }
        abs_sum.add(amp.norm());
    }
    let abs_sum = abs_sum.total();
    Ok(Coherence { relative_entropy: entropy.total(), l1: abs_sum * abs_sum - 1.0 })
}

/// Neumaier summation.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Exact coherence of `Σ_i c_i |W_i⟩` expressed in the full edge basis.
pub fn coherence_symmetric(state: &ReducedState) -> Coherence {
    let config = state.config();
    let mut entropy = 0.0;
    let mut abs_sum = 0.0;
    for (label, c) in SubspaceLabel::ALL.iter().zip(state.components()) {
        let d = label.dimension(config) as f64;
        let weight = c.norm_sqr();
        if d > 0.0 && weight > 0.0 {
            entropy += weight * (d / weight).log2();
            abs_sum += c.norm() * d.sqrt();
        }
    }
    Coherence { relative_entropy: entropy, l1: abs_sum * abs_sum - 1.0 }
}

/// Binary Shannon entropy in bits.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    term(x) + term(1.0 - x)
}

/// Large-`N` approximations of both measures at `φ = π`, written in terms of
/// `sin² nθ`. Reporting only.
pub fn coherence_asymptotic(config: &WalkConfig, n: usize) -> Coherence {
    let theta = ReducedCoefficients::new(config).theta;
    let nn = config.n_vertices() as f64;
    let v = config.n_marked() as f64;
    let angle = n as f64 * theta;
    let sin2 = angle.sin().powi(2);
    let cos2 = angle.cos().powi(2);
    let pairs = nn * (nn - 1.0);
    let relative_entropy = binary_entropy(sin2) + cos2 * (nn * nn).log2() + sin2 * (2.0 * nn * v).log2()
        - (v * (v - 1.0) / pairs) * (1.0 / pairs).log2();
    let l1 = 2.0 * nn * v * sin2 + nn * nn * cos2 + (2.0 * nn * v).sqrt() * nn * (2.0 * angle).sin().abs();
    Coherence { relative_entropy, l1 }
}

fn normalize(rows: Vec<(usize, f64, Coherence)>) -> Vec<CoherenceSample> {
    let base = rows.first().map(|r| r.2).unwrap_or(Coherence::ZERO);
    let ratio = |x: f64, b: f64| if b > 0.0 { x / b } else { 0.0 };
    rows.into_iter()
        .map(|(step, p, c)| CoherenceSample {
            step,
            p_success: p,
            c_r: c.relative_entropy,
            c_l: c.l1,
            c_r_norm: ratio(c.relative_entropy, base.relative_entropy),
            c_l_norm: ratio(c.l1, base.l1),
        })
        .collect()
}

/// Per-step success probability and coherence from the uniform start,
/// steps `0..=n_steps`, via the reduced dynamics.
pub fn trace_run(config: &WalkConfig, n_steps: usize) -> Result<Vec<CoherenceSample>> {
    if n_steps == 0 {
        return Err(WalkError::InvalidArgument("trace needs at least one step".into()));
    }
    let rows = ReducedState::initial(*config)
        .trajectory(n_steps)
        .iter()
        .enumerate()
        .map(|(n, s)| (n, s.success_probability(), coherence_symmetric(s)))
        .collect();
    Ok(normalize(rows))
}

/// Same as [`trace_run`] but on the full `N (N - 1)` state vector.
pub fn trace_run_full(config: &WalkConfig, n_steps: usize) -> Result<Vec<CoherenceSample>> {
    if n_steps == 0 {
        return Err(WalkError::InvalidArgument("trace needs at least one step".into()));
    }
    let mut rows = Vec::with_capacity(n_steps + 1);
    let mut failure = None;
    EdgeStateVector::uniform(*config).trajectory(n_steps, |n, s| match coherence_direct(s) {
        Ok(c) => rows.push((n, s.success_probability(), c)),
        Err(e) => {
            failure.get_or_insert(e);
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(normalize(rows)),
    }
}
