//! Full edge-state simulator on the complete graph.
//!
//! The walker lives on the `N (N - 1)` directed edges. One step scatters the
//! amplitude arriving at each vertex `l` back out along the edges leaving
//! `l`. A normal vertex maps the incoming amplitudes `x(k, l)` to
//!
//! ```text
//! x'(l, w) = t * S_l - x(w, l),    S_l = sum_k x(k, l),    t = 2 / (N - 1)
//! ```
//!
//! and a marked vertex reflects with a phase, `x'(l, w) = e^{iφ} x(w, l)`.
//! The whole step costs `O(N^2)`; the dense operator is never built.

use num_complex::Complex64;

use crate::config::WalkConfig;
use crate::edges::{classify_edge, EdgeIndexer, SubspaceLabel};
use crate::error::{Result, WalkError};

/// Complex amplitudes over the ordered edges, laid out by [`EdgeIndexer`].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeStateVector {
    config: WalkConfig,
    amplitudes: Vec<Complex64>,
}

/// Overlaps with the four subspace superpositions plus the norm of whatever
/// is left over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedProjection {
    /// `<W_i|ψ>` in [`SubspaceLabel::ALL`] order; the last entry is 0 when `v = 1`.
    pub overlaps: [Complex64; 4],
    pub residual: f64,
}

impl EdgeStateVector {
    /// Equal superposition of all edge states.
    pub fn uniform(config: WalkConfig) -> Self {
        let dim = config.dimension();
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self { config, amplitudes: vec![amp; dim] }
    }

    pub fn basis(config: WalkConfig, a: usize, b: usize) -> Result<Self> {
        let index = EdgeIndexer::new(config.n_vertices()).index(a, b)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); config.dimension()];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { config, amplitudes })
    }

    pub fn from_amplitudes(config: WalkConfig, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != config.dimension() {
            return Err(WalkError::InvalidArgument(format!(
                "expected {} amplitudes, got {}",
                config.dimension(),
                amplitudes.len()
            )));
        }
        Ok(Self { config, amplitudes })
    }

    /// Builds `Σ_i c_i |W_i⟩` in the full edge basis.
    pub fn from_reduced(config: WalkConfig, components: [Complex64; 4]) -> Self {
        let dims = SubspaceLabel::ALL.map(|l| l.dimension(&config));
        let per_edge: [Complex64; 4] = std::array::from_fn(|i| {
            if dims[i] == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                components[i] / (dims[i] as f64).sqrt()
            }
        });
        let ix = EdgeIndexer::new(config.n_vertices());
        let amplitudes = ix.pairs().map(|(a, b)| per_edge[label_of(&config, a, b).position()]).collect();
        Self { config, amplitudes }
    }

    pub fn config(&self) -> &WalkConfig {
        &self.config
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn indexer(&self) -> EdgeIndexer {
        EdgeIndexer::new(self.config.n_vertices())
    }

    pub fn amplitude(&self, a: usize, b: usize) -> Result<Complex64> {
        Ok(self.amplitudes[self.indexer().index(a, b)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(x, y)| x.conj() * y).sum()
    }

    /// One scattering step.
    pub fn step(&self) -> Self {
        let mut out = Self { config: self.config, amplitudes: vec![Complex64::new(0.0, 0.0); self.amplitudes.len()] };
        self.step_into(&mut out);
        out
    }

    /// One scattering step written into `out`, which must share the config.
    pub fn step_into(&self, out: &mut Self) {
        debug_assert_eq!(self.config, out.config);
        scatter(&self.config, &self.amplitudes, &mut out.amplitudes);
    }

    pub fn evolve(&self, n_steps: usize) -> Self {
        let mut current = self.clone();
        let mut scratch = self.clone();
        for _ in 0..n_steps {
            current.step_into(&mut scratch);
            std::mem::swap(&mut current, &mut scratch);
        }
        current
    }

    /// Calls `visit` with the state at steps `0..=n_steps`.
    pub fn trajectory<F: FnMut(usize, &Self)>(&self, n_steps: usize, mut visit: F) {
        let mut current = self.clone();
        let mut scratch = self.clone();
        visit(0, &current);
        for n in 1..=n_steps {
            current.step_into(&mut scratch);
            std::mem::swap(&mut current, &mut scratch);
            visit(n, &current);
        }
    }

    /// Probability of measuring an edge that touches a marked vertex.
    pub fn success_probability(&self) -> f64 {
        let n = self.config.n_vertices();
        let v = self.config.n_marked();
        let mut fail = 0.0;
        for a in v..n {
            // for a normal source the first v slots are the marked targets
            let row = a * (n - 1);
            fail += self.amplitudes[row + v..row + n - 1].iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        1.0 - fail
    }

    pub fn project_reduced(&self) -> ReducedProjection {
        let dims = SubspaceLabel::ALL.map(|l| l.dimension(&self.config));
        let mut sums = [Complex64::new(0.0, 0.0); 4];
        let ix = self.indexer();
        for ((a, b), amp) in ix.pairs().zip(&self.amplitudes) {
            sums[label_of(&self.config, a, b).position()] += amp;
        }
        let overlaps: [Complex64; 4] = std::array::from_fn(|i| {
            if dims[i] == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                sums[i] / (dims[i] as f64).sqrt()
            }
        });
        // summed directly rather than as norm² - Σ|overlap|², which cancels
        let mut residual_sq = 0.0;
        for ((a, b), amp) in ix.pairs().zip(&self.amplitudes) {
            let i = label_of(&self.config, a, b).position();
            let mean = overlaps[i] / (dims[i] as f64).sqrt();
            residual_sq += (amp - mean).norm_sqr();
        }
        ReducedProjection { overlaps, residual: residual_sq.sqrt() }
    }

    /// Applies a vertex relabeling: amplitude on `(a, b)` moves to
    /// `(perm[a], perm[b])`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.config.n_vertices();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(WalkError::InvalidArgument("not a permutation".into()));
        }
        let ix = self.indexer();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for ((a, b), amp) in ix.pairs().zip(&self.amplitudes) {
            amplitudes[ix.index_unchecked(perm[a], perm[b])] = *amp;
        }
        Ok(Self { config: self.config, amplitudes })
    }
}

/// Free-function form of [`EdgeStateVector::step`], usable as a kernel pointer.
pub fn step(state: &EdgeStateVector) -> EdgeStateVector {
    state.step()
}

fn label_of(config: &WalkConfig, a: usize, b: usize) -> SubspaceLabel {
    classify_edge(a, b, config).expect("indexer yields valid edges")
}

fn scatter(config: &WalkConfig, input: &[Complex64], output: &mut [Complex64]) {
    let n = config.n_vertices();
    let d = n - 1;
    let t = config.transmission();
    let reflect = Complex64::from_polar(1.0, config.phase());

    let mut incoming = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let row = &input[k * d..(k + 1) * d];
        for (slot, amp) in row.iter().enumerate() {
            let l = if slot < k { slot } else { slot + 1 };
            incoming[l] += amp;
        }
    }

    for l in 0..n {
        let out_row = &mut output[l * d..(l + 1) * d];
        let marked = config.is_marked(l);
        let spread = incoming[l] * t;
        for (slot, out) in out_row.iter_mut().enumerate() {
            let w = if slot < l { slot } else { slot + 1 };
            // amplitude on the reversed edge (w, l)
            let back = input[w * d + if l < w { l } else { l - 1 }];
            *out = if marked { reflect * back } else { spread - back };
        }
    }
}
