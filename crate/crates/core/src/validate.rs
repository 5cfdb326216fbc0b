//! Invariant battery behind `sqw validate`.
//!
//! Each check measures a worst-case deviation and compares it with a fixed
//! tolerance. The step kernel is injectable so a deliberately broken kernel
//! can be shown to trip the battery.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::coherence::{coherence_direct, coherence_symmetric, trace_run};
use crate::config::WalkConfig;
use crate::edges::SubspaceLabel;
use crate::error::Result;
use crate::reduced::{closed_form_state, ReducedState};
use crate::walk::{self, EdgeStateVector};

pub type StepKernel = fn(&EdgeStateVector) -> EdgeStateVector;

#[derive(Debug, Clone, Copy)]
pub struct ValidationOptions {
    /// Smaller graphs and shorter runs.
    pub quick: bool,
    pub kernel: StepKernel,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { quick: false, kernel: walk::step }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub deviation: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub quick: bool,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn check(name: &str, deviation: f64, tolerance: f64, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        // NaN deviations fail
        passed: deviation <= tolerance,
        deviation,
        tolerance,
        detail,
    }
}

fn evolve_with(kernel: StepKernel, state: &EdgeStateVector, n: usize, mut visit: impl FnMut(usize, &EdgeStateVector)) {
    let mut s = state.clone();
    visit(0, &s);
    for k in 1..=n {
        s = kernel(&s);
        visit(k, &s);
    }
}

pub fn run(options: &ValidationOptions) -> Result<ValidationReport> {
    let quick = options.quick;
    let kernel = options.kernel;
    let mut checks = Vec::new();

    // unitarity of the full kernel
    {
        let (n, steps) = if quick { (30, 200) } else { (100, 1000) };
        let cfg = WalkConfig::new(n, 2, 2.345)?;
        let mut worst: f64 = 0.0;
        evolve_with(kernel, &EdgeStateVector::uniform(cfg), steps, |_, s| {
            worst = worst.max((s.norm() - 1.0).abs());
        });
        checks.push(check("unitarity.norm", worst, 1e-10, format!("N={n} v=2 phi=2.345 steps={steps}")));

        let x = pseudo_random_state(cfg, 11);
        let y = pseudo_random_state(cfg, 23);
        let dev = (kernel(&x).inner(&kernel(&y)) - x.inner(&y)).norm();
        checks.push(check("unitarity.inner_product", dev, 1e-10, format!("N={n} random pair")));
    }

    // full vs reduced trajectories
    {
        let sizes: &[usize] = if quick { &[12] } else { &[20, 50] };
        let steps = if quick { 60 } else { 200 };
        let mut worst: f64 = 0.0;
        let mut residual: f64 = 0.0;
        for &n in sizes {
            for v in 1..=3 {
                for phase in [0.0, PI / 4.0, PI / 2.0, PI] {
                    let cfg = WalkConfig::new(n, v, phase)?;
                    let reduced = ReducedState::initial(cfg).trajectory(steps);
                    evolve_with(kernel, &EdgeStateVector::uniform(cfg), steps, |k, s| {
                        let proj = s.project_reduced();
                        residual = residual.max(proj.residual);
                        for (a, b) in proj.overlaps.iter().zip(reduced[k].components()) {
                            worst = worst.max((a - b).norm());
                        }
                    });
                }
            }
        }
        let detail = format!("N={sizes:?} v=1..3 phi={{0,pi/4,pi/2,pi}} steps={steps}");
        checks.push(check("equivalence.components", worst, 1e-10, detail.clone()));
        checks.push(check("equivalence.residual", residual, 1e-10, detail));
    }

    // closed form at φ = π
    {
        let sizes: &[usize] = if quick { &[100] } else { &[100, 1000] };
        let mut worst: f64 = 0.0;
        for &n in sizes {
            for v in [2, 5] {
                let cfg = WalkConfig::search(n, v)?;
                for (k, s) in ReducedState::initial(cfg).trajectory(100).iter().enumerate() {
                    let cf = closed_form_state(&cfg, k)?;
                    for (a, b) in cf.components().iter().zip(s.components()) {
                        worst = worst.max((a - b).norm());
                    }
                }
            }
        }
        checks.push(check("closed_form", worst, 1e-9, format!("N={sizes:?} v={{2,5}} steps=100")));
    }

    // coherence fast path
    {
        let sizes: &[usize] = if quick { &[6, 10] } else { &[6, 10, 20] };
        let mut worst: f64 = 0.0;
        for &n in sizes {
            for v in 1..=2 {
                let cfg = WalkConfig::search(n, v)?;
                let reduced = ReducedState::initial(cfg).trajectory(40);
                let mut failure = None;
                evolve_with(kernel, &EdgeStateVector::uniform(cfg), 40, |k, s| {
                    let fast = coherence_symmetric(&reduced[k]);
                    match coherence_direct(s) {
                        Ok(d) => {
                            worst = worst
                                .max((fast.relative_entropy - d.relative_entropy).abs())
                                .max((fast.l1 - d.l1).abs());
                        }
                        Err(e) => {
                            failure.get_or_insert(e);
                        }
                    }
                });
                if failure.is_some() {
                    worst = f64::INFINITY;
                }
            }
        }
        checks.push(check("coherence.fast_path", worst, 1e-9, format!("N={sizes:?} v=1..2 steps=40")));
    }

    // incoherent identities
    {
        let (n, steps) = if quick { (30, 40) } else { (100, 100) };
        let cfg = WalkConfig::search(n, 2)?;
        let mm = traces_with(kernel, &cfg, SubspaceLabel::MarkedMarked, steps)?;
        let dev = mm.iter().map(|p| (p - 1.0).abs()).fold(0.0, f64::max);
        checks.push(check("incoherent.mm_closure", dev, 1e-12, format!("N={n} v=2 steps={steps}")));

        let inn = traces_with(kernel, &cfg, SubspaceLabel::In, steps + 1)?;
        let out = traces_with(kernel, &cfg, SubspaceLabel::Out, steps)?;
        let dev = (0..=steps).map(|k| (out[k] - inn[k + 1]).abs()).fold(0.0, f64::max);
        checks.push(check("incoherent.shift", dev, 1e-12, format!("N={n} v=2 steps={steps}")));

        let mut dev: f64 = 0.0;
        for label in SubspaceLabel::ALL {
            let a = edge_trace(kernel, &cfg, label.representative(&cfg)?, steps.min(40))?;
            let b = edge_trace(kernel, &cfg, label.alternate_representative(&cfg)?, steps.min(40))?;
            dev = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(dev, f64::max);
        }
        checks.push(check("incoherent.representatives", dev, 1e-12, format!("N={n} v=2 steps<=40")));
    }

    // φ ↔ 2π - φ
    {
        let (n, steps) = if quick { (12, 40) } else { (30, 100) };
        let mut worst: f64 = 0.0;
        for phase in [0.3, 1.1, 2.0, 2.9, 4.4] {
            let a = trace_run(&WalkConfig::new(n, 2, phase)?, steps)?;
            let b = trace_run(&WalkConfig::new(n, 2, TAU - phase)?, steps)?;
            for (x, y) in a.iter().zip(&b) {
                worst = worst
                    .max((x.p_success - y.p_success).abs())
                    .max((x.c_r - y.c_r).abs())
                    .max((x.c_l - y.c_l).abs() / x.c_l.abs().max(1.0));
            }
            let fa = EdgeStateVector::uniform(WalkConfig::new(n, 2, phase)?);
            let fb = EdgeStateVector::uniform(WalkConfig::new(n, 2, TAU - phase)?);
            let (mut ta, mut tb) = (Vec::new(), Vec::new());
            evolve_with(kernel, &fa, steps.min(40), |_, s| ta.push(s.success_probability()));
            evolve_with(kernel, &fb, steps.min(40), |_, s| tb.push(s.success_probability()));
            for (x, y) in ta.iter().zip(&tb) {
                worst = worst.max((x - y).abs());
            }
        }
        checks.push(check("conjugation_symmetry", worst, 1e-12, format!("N={n} v=2 five phases")));
    }

    Ok(ValidationReport { quick, checks })
}

fn traces_with(kernel: StepKernel, cfg: &WalkConfig, label: SubspaceLabel, steps: usize) -> Result<Vec<f64>> {
    edge_trace(kernel, cfg, label.representative(cfg)?, steps)
}

fn edge_trace(kernel: StepKernel, cfg: &WalkConfig, (a, b): (usize, usize), steps: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(steps + 1);
    evolve_with(kernel, &EdgeStateVector::basis(*cfg, a, b)?, steps, |_, s| out.push(s.success_probability()));
    Ok(out)
}

/// Deterministic normalized state with no symmetry.
fn pseudo_random_state(cfg: WalkConfig, salt: u64) -> EdgeStateVector {
    let mut x = salt.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut next = || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut amps: Vec<Complex64> = (0..cfg.dimension()).map(|_| Complex64::new(next(), next())).collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|z| *z /= norm);
    EdgeStateVector::from_amplitudes(cfg, amps).expect("length matches config")
}
