//! Collapsed dynamics on the four subspace superpositions.
//!
//! Starting from any state that is constant on each edge class, the walk
//! never leaves `span{|W_IN⟩, |W_OUT⟩, |W_NN⟩, |W_MM⟩}`, where it acts as
//!
//! ```text
//! ⎡ 0      q  s  0     ⎤
//! ⎢ e^{iφ} 0  0  0     ⎥      q = -1 + 2v/(N-1),  s = sqrt(1 - q²)
//! ⎢ 0      s -q  0     ⎥
//! ⎣ 0      0  0  e^{iφ}⎦
//! ```
//!
//! For `v = 1` the marked-marked class is empty and the last component is
//! pinned to zero.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;

use crate::config::WalkConfig;
use crate::error::{Result, WalkError};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    config: WalkConfig,
    components: [Complex64; 4],
}

/// Constants of the reduced walk for a given `(N, v)`.
///
/// `a`, `b`, `c`, `d` and `theta` parameterize the exact trajectory at
/// `φ = π` (see [`closed_form_state`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedCoefficients {
    pub q: f64,
    pub s: f64,
    pub theta: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl ReducedCoefficients {
    pub fn new(config: &WalkConfig) -> Self {
        let n = config.n_vertices() as f64;
        let v = config.n_marked() as f64;
        let q = -1.0 + 2.0 * v / (n - 1.0);
        let s = (1.0 - q * q).max(0.0).sqrt();
        // atan2 gives θ = π/2 when v = N - 1
        let theta = (v * (2.0 * n - v - 2.0)).sqrt().atan2(n - v - 1.0);
        let nm1 = n - 1.0;
        let w = 2.0 * n - v - 2.0;
        let a = (v * (n - v - 1.0).powi(2) / nm1.powi(2)).sqrt();
        let b = (v * v * (n - v - 1.0) / nm1.powi(2)).sqrt();
        let c = (v * (v - 1.0) * w * w / ((n - v) * nm1.powi(2))).sqrt();
        let d = ((n - v) * nm1 / (w * w * n)).sqrt();
        Self { q, s, theta, a, b, c, d }
    }
}

impl ReducedState {
    /// Components in `(IN, OUT, NN, MM)` order. The MM component is dropped
    /// when `v = 1`.
    pub fn new(config: WalkConfig, mut components: [Complex64; 4]) -> Self {
        if config.n_marked() == 1 {
            components[3] = ZERO;
        }
        Self { config, components }
    }

    /// The uniform superposition over all edges.
    pub fn initial(config: WalkConfig) -> Self {
        let n = config.n_vertices() as f64;
        let v = config.n_marked() as f64;
        let total = n * (n - 1.0);
        let cross = (v * (n - v) / total).sqrt();
        let nn = ((n - v) * (n - v - 1.0) / total).sqrt();
        let mm = (v * (v - 1.0) / total).sqrt();
        Self::new(config, [cross, cross, nn, mm].map(|x| Complex64::new(x, 0.0)))
    }

    pub fn config(&self) -> &WalkConfig {
        &self.config
    }

    pub fn components(&self) -> [Complex64; 4] {
        self.components
    }

    pub fn c_in(&self) -> Complex64 {
        self.components[0]
    }

    pub fn c_out(&self) -> Complex64 {
        self.components[1]
    }

    pub fn c_nn(&self) -> Complex64 {
        self.components[2]
    }

    pub fn c_mm(&self) -> Complex64 {
        self.components[3]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn step(&self) -> Self {
        let k = ReducedCoefficients::new(&self.config);
        self.step_with(&k, Complex64::from_polar(1.0, self.config.phase()))
    }

    fn step_with(&self, k: &ReducedCoefficients, phase: Complex64) -> Self {
        let [c_in, c_out, c_nn, c_mm] = self.components;
        Self {
            config: self.config,
            components: [c_out * k.q + c_nn * k.s, phase * c_in, c_out * k.s - c_nn * k.q, phase * c_mm],
        }
    }

    pub fn evolve(&self, n_steps: usize) -> Self {
        let k = ReducedCoefficients::new(&self.config);
        let phase = Complex64::from_polar(1.0, self.config.phase());
        (0..n_steps).fold(*self, |s, _| s.step_with(&k, phase))
    }

    /// States at steps `0..=n_steps`.
    pub fn trajectory(&self, n_steps: usize) -> Vec<ReducedState> {
        let k = ReducedCoefficients::new(&self.config);
        let phase = Complex64::from_polar(1.0, self.config.phase());
        let mut out = Vec::with_capacity(n_steps + 1);
        let mut s = *self;
        out.push(s);
        for _ in 0..n_steps {
            s = s.step_with(&k, phase);
            out.push(s);
        }
        out
    }

    /// `1 - |c_nn|²`.
    pub fn success_probability(&self) -> f64 {
        1.0 - self.components[2].norm_sqr()
    }
}

/// The reduced step as a dense 4×4 matrix, rows acting on `(IN, OUT, NN, MM)`.
pub fn reduced_matrix(config: &WalkConfig) -> [[Complex64; 4]; 4] {
    let k = ReducedCoefficients::new(config);
    let e = Complex64::from_polar(1.0, config.phase());
    let r = |x: f64| Complex64::new(x, 0.0);
    [[ZERO, r(k.q), r(k.s), ZERO], [e, ZERO, ZERO, ZERO], [ZERO, r(k.s), r(-k.q), ZERO], [ZERO, ZERO, ZERO, e]]
}

/// Success probabilities from the uniform start at steps `0..=n_steps`.
pub fn success_curve(config: &WalkConfig, n_steps: usize) -> Vec<f64> {
    ReducedState::initial(*config).trajectory(n_steps).iter().map(ReducedState::success_probability).collect()
}

/// Exact state after `n` steps from the uniform start, valid only at `φ = π`.
pub fn closed_form_state(config: &WalkConfig, n: usize) -> Result<ReducedState> {
    if !config.is_phase_pi() {
        return Err(WalkError::UnsupportedPhase(config.phase()));
    }
    let k = ReducedCoefficients::new(config);
    let nv = config.n_vertices() as f64;
    let v = config.n_marked() as f64;
    let nf = n as f64;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let amp = (2.0 * (nv - 1.0)).sqrt();
    let half = k.theta / 2.0;
    let comps = [
        amp * ((2.0 * nf + 1.0) * half).sin() + sign * k.a,
        -amp * ((2.0 * nf - 1.0) * half).sin() + sign * k.a,
        2.0 * (nv - v - 1.0).sqrt() * (nf * k.theta).cos() - sign * k.b,
        sign * k.c,
    ];
    Ok(ReducedState::new(*config, comps.map(|x| Complex64::new(k.d * x, 0.0))))
}

/// Leading-order trajectory for `1 < v ≪ N`. Its norm is `1 + O(v/N)`.
pub fn asymptotic_state(config: &WalkConfig, n: usize) -> ReducedState {
    let theta = ReducedCoefficients::new(config).theta;
    let nf = n as f64;
    let comps = [
        SQRT_2 * ((2.0 * nf + 1.0) * theta / 2.0).sin() / 2.0,
        -SQRT_2 * ((2.0 * nf - 1.0) * theta / 2.0).sin() / 2.0,
        (nf * theta).cos(),
        0.0,
    ];
    ReducedState::new(*config, comps.map(|x| Complex64::new(x, 0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementStep {
    /// Better of `floor` and `ceil` of `π / (2θ)` under the exact dynamics.
    pub step: usize,
    pub success_probability: f64,
    /// `⌊(π/2) sqrt(N / 2v)⌋`, the large-`N` estimate.
    pub approximation: usize,
}

/// When to measure the walker at `φ = π`. The config's own phase is ignored.
pub fn optimal_measurement_step(config: &WalkConfig) -> MeasurementStep {
    let at_pi = config.with_phase(PI).expect("phase π is valid");
    let theta = ReducedCoefficients::new(&at_pi).theta;
    let target = FRAC_PI_2 / theta;
    let lo = (target.floor() as usize).max(1);
    let hi = (target.ceil() as usize).max(1);
    let curve = success_curve(&at_pi, hi);
    let step = if curve[hi] > curve[lo] { hi } else { lo };
    let n = config.n_vertices() as f64;
    let v = config.n_marked() as f64;
    MeasurementStep {
        step,
        success_probability: curve[step],
        approximation: (FRAC_PI_2 * (n / (2.0 * v)).sqrt()).floor() as usize,
    }
}
