//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function returns a JSON string of column arrays, ready for
//! plotting. The `*_json` functions are plain Rust and carry the logic; the
//! exported wrappers only convert errors.

use serde::Serialize;
use sqw_core::coherence::trace_run;
use sqw_core::incoherent::SubspaceTraces;
use sqw_core::queries::{even_phases, phase_sweep, SweepOptions};
use sqw_core::{SubspaceLabel, WalkConfig};
use wasm_bindgen::prelude::*;

/// Largest graph for the per-step trace and the phase sweep.
pub const MAX_REDUCED_VERTICES: usize = 1_000_000;
/// Largest graph for the edge-class traces, which run the full state vector.
pub const MAX_FULL_VERTICES: usize = 300;
pub const MAX_STEPS: usize = 5_000;
pub const MAX_PHASES: usize = 400;

/// Monte Carlo trials are skipped in the demo; the analytic baselines are
/// what gets plotted.
const DEMO_TRIALS: usize = 1;

#[derive(Serialize)]
struct Trace {
    step: Vec<usize>,
    p_success: Vec<f64>,
    c_r_norm: Vec<f64>,
    c_l_norm: Vec<f64>,
}

#[derive(Serialize)]
struct Sweep {
    phi: Vec<f64>,
    max_p: Vec<f64>,
    step_at_max: Vec<usize>,
    min_c_r_norm: Vec<f64>,
    min_c_l_norm: Vec<f64>,
    best_m: Vec<usize>,
    avg_queries: Vec<f64>,
    blind: f64,
    memory: f64,
}

#[derive(Serialize)]
struct Classes {
    step: Vec<usize>,
    p_in: Vec<f64>,
    p_out: Vec<f64>,
    p_nn: Vec<f64>,
    p_mm: Option<Vec<f64>>,
    p_total: Vec<f64>,
}

fn limit(name: &str, value: usize, max: usize) -> Result<(), String> {
    if value > max {
        return Err(format!("{name} = {value} is above the demo limit of {max}"));
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Success probability and normalized coherences for steps `0..=steps`.
pub fn trace_json(n: usize, v: usize, phi: f64, steps: usize) -> Result<String, String> {
    limit("N", n, MAX_REDUCED_VERTICES)?;
    limit("steps", steps, MAX_STEPS)?;
    let cfg = WalkConfig::new(n, v, phi).map_err(|e| e.to_string())?;
    let samples = trace_run(&cfg, steps).map_err(|e| e.to_string())?;
    to_json(&Trace {
        step: samples.iter().map(|s| s.step).collect(),
        p_success: samples.iter().map(|s| s.p_success).collect(),
        c_r_norm: samples.iter().map(|s| s.c_r_norm).collect(),
        c_l_norm: samples.iter().map(|s| s.c_l_norm).collect(),
    })
}

/// Peak success, coherence at the peak and best query cost for `count`
/// phases evenly spaced in `[0, π]`.
pub fn sweep_json(n: usize, v: usize, count: usize) -> Result<String, String> {
    limit("N", n, MAX_REDUCED_VERTICES)?;
    limit("phases", count, MAX_PHASES)?;
    if count < 2 {
        return Err("need at least 2 phases".into());
    }
    let options = SweepOptions { trials: DEMO_TRIALS, ..SweepOptions::default() };
    let points = phase_sweep(n, v, &even_phases(count), &options).map_err(|e| e.to_string())?;
    to_json(&Sweep {
        phi: points.iter().map(|p| p.phase).collect(),
        max_p: points.iter().map(|p| p.max_p).collect(),
        step_at_max: points.iter().map(|p| p.step_at_max).collect(),
        min_c_r_norm: points.iter().map(|p| p.c_r_norm_at_max).collect(),
        min_c_l_norm: points.iter().map(|p| p.c_l_norm_at_max).collect(),
        best_m: points.iter().map(|p| p.curve.best_m).collect(),
        avg_queries: points.iter().map(|p| p.curve.avg_queries).collect(),
        blind: points[0].baselines.blind,
        memory: points[0].baselines.memory,
    })
}

/// Success probability when the walker starts on a single edge of each
/// class, plus the uniform incoherent mixture.
pub fn classes_json(n: usize, v: usize, phi: f64, steps: usize) -> Result<String, String> {
    limit("N", n, MAX_FULL_VERTICES)?;
    limit("steps", steps, MAX_STEPS)?;
    let cfg = WalkConfig::new(n, v, phi).map_err(|e| e.to_string())?;
    let traces = SubspaceTraces::compute(&cfg, steps).map_err(|e| e.to_string())?;
    let get = |label| traces.get(label).map(<[f64]>::to_vec);
    to_json(&Classes {
        step: (0..=steps).collect(),
        p_in: get(SubspaceLabel::In).unwrap_or_default(),
        p_out: get(SubspaceLabel::Out).unwrap_or_default(),
        p_nn: get(SubspaceLabel::NormalNormal).unwrap_or_default(),
        p_mm: get(SubspaceLabel::MarkedMarked),
        p_total: traces.uniform_total(&cfg),
    })
}

#[wasm_bindgen]
pub fn trace(n: usize, v: usize, phi: f64, steps: usize) -> Result<String, JsError> {
    trace_json(n, v, phi, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sweep(n: usize, v: usize, count: usize) -> Result<String, JsError> {
    sweep_json(n, v, count).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn classes(n: usize, v: usize, phi: f64, steps: usize) -> Result<String, JsError> {
    classes_json(n, v, phi, steps).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;
    use std::f64::consts::PI;

    fn parse(text: &str) -> Value {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn trace_columns() {
        let doc = parse(&trace_json(100, 2, PI, 20).unwrap());
        assert_eq!(doc["step"].as_array().unwrap().len(), 21);
        assert_eq!(doc["c_r_norm"][0], 1.0);
        assert!(doc["p_success"][8].as_f64().unwrap() > 0.99);
    }

    #[test]
    fn sweep_endpoints() {
        let doc = parse(&sweep_json(100, 2, 25).unwrap());
        assert_eq!(doc["phi"].as_array().unwrap().len(), 25);
        assert!(doc["max_p"][24].as_f64().unwrap() > 0.95);
        assert_eq!(doc["blind"], 50.0);
    }

    #[test]
    fn classes_without_marked_pairs() {
        let doc = parse(&classes_json(20, 1, PI, 10).unwrap());
        assert_eq!(doc["p_mm"], Value::Null);
        assert_eq!(doc["p_in"][1], 1.0);
    }

    #[test]
    fn limits_and_bad_input() {
        assert!(classes_json(MAX_FULL_VERTICES + 1, 2, PI, 10).is_err());
        assert!(trace_json(100, 2, PI, MAX_STEPS + 1).is_err());
        assert!(trace_json(2, 1, PI, 5).is_err());
        assert!(sweep_json(100, 2, 1).is_err());
        assert!(trace_json(100, 2, f64::NAN, 5).is_err());
    }
}
