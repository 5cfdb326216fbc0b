//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sqw_cli::{execute, Job, Mode, RunSpec};
use sqw_core::coherence::{coherence_asymptotic, trace_run, trace_run_full};
use sqw_core::incoherent::{subspace_trace, SubspaceTraces};
use sqw_core::queries::{even_phases, phase_sweep, SweepOptions};
use sqw_core::reduced::{optimal_measurement_step, success_curve};
use sqw_core::stats::{pearson, spearman};
use sqw_core::{
    coherence_direct, coherence_symmetric, DiagonalEnsemble, EdgeStateVector, ReducedState, SubspaceLabel, WalkConfig,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn within(what: &str, value: f64, limit: f64) -> Result<(), String> {
    if value <= limit {
        Ok(())
    } else {
        Err(format!("{what} = {value:e} exceeds {limit:e}"))
    }
}

fn in_time(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    within("runtime (s)", elapsed.as_secs_f64(), limit_s)
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5157)
}

fn unitarity() -> Outcome {
    let start = Instant::now();
    let phase = rng().gen_range(0.0..TAU);
    let cfg = WalkConfig::new(100, 2, phase).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    EdgeStateVector::uniform(cfg).trajectory(1000, |_, s| worst = worst.max((s.norm() - 1.0).abs()));
    within("max |norm - 1|", worst, 1e-10)?;
    in_time(start.elapsed(), 5.0)?;
    Ok(format!("phi={phase:.4}, max |norm - 1| = {worst:.1e}, {:.2}s", start.elapsed().as_secs_f64()))
}

fn equivalence() -> Outcome {
    let start = Instant::now();
    let (mut worst, mut residual): (f64, f64) = (0.0, 0.0);
    for n in [20, 50] {
        for v in 1..=3 {
            for phase in [0.0, PI / 4.0, PI / 2.0, PI] {
                let cfg = WalkConfig::new(n, v, phase).map_err(|e| e.to_string())?;
                let reduced = ReducedState::initial(cfg).trajectory(200);
                EdgeStateVector::uniform(cfg).trajectory(200, |k, s| {
                    let proj = s.project_reduced();
                    residual = residual.max(proj.residual);
                    for (a, b) in proj.overlaps.iter().zip(reduced[k].components()) {
                        worst = worst.max((a - b).norm());
                    }
                });
            }
        }
    }
    within("component gap", worst, 1e-10)?;
    within("residual", residual, 1e-10)?;
    in_time(start.elapsed(), 30.0)?;
    Ok(format!("gap {worst:.1e}, residual {residual:.1e}, {:.2}s", start.elapsed().as_secs_f64()))
}

fn success_peak() -> Outcome {
    let cfg = WalkConfig::search(100, 2).map_err(|e| e.to_string())?;
    let curve = success_curve(&cfg, 12);
    let hits: Vec<usize> = (0..=12).filter(|&k| curve[k] >= 0.95).collect();
    let first = *hits.first().ok_or("P_s never reaches 0.95 within 12 steps")?;
    if !(7..=8).contains(&first) {
        return Err(format!("first step with P_s >= 0.95 is {first}"));
    }
    let opt = optimal_measurement_step(&cfg);
    if opt.approximation != 7 {
        return Err(format!("large-N step estimate is {}, expected 7", opt.approximation));
    }
    Ok(format!(
        "P_s(7) = {:.4}, P_s(8) = {:.4}, estimate {}, best step {}",
        curve[7], curve[8], opt.approximation, opt.step
    ))
}

fn depletion() -> Outcome {
    let cfg = WalkConfig::search(100, 2).map_err(|e| e.to_string())?;
    let opt = optimal_measurement_step(&cfg).step;
    let trace = trace_run(&cfg, opt).map_err(|e| e.to_string())?;
    let p: Vec<f64> = trace.iter().map(|s| s.p_success).collect();
    let c_r: Vec<f64> = trace.iter().map(|s| s.c_r).collect();
    let r = pearson(&p, &c_r);
    within("pearson(P_s, C_r)", r, -0.9)?;
    let first = &trace[0];
    let last = &trace[opt];
    within("|C_r(0) - log2 9900|", (first.c_r - 9900f64.log2()).abs(), 1e-12)?;
    within("|C_l(0) - 9899|", (first.c_l - 9899.0).abs(), 1e-9)?;
    if !(last.c_r < first.c_r && last.c_l < first.c_l) {
        return Err(format!("coherence at step {opt} not below step 0"));
    }
    Ok(format!(
        "steps 0..{opt}: pearson {r:.4}; C_r {:.4} -> {:.4}; C_l {:.1} -> {:.1}",
        first.c_r, last.c_r, first.c_l, last.c_l
    ))
}

fn fast_path() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [6, 10, 20] {
        for v in 1..=2 {
            let cfg = WalkConfig::search(n, v).map_err(|e| e.to_string())?;
            let reduced = ReducedState::initial(cfg).trajectory(60);
            let mut failure = None;
            EdgeStateVector::uniform(cfg).trajectory(60, |k, s| match coherence_direct(s) {
                Ok(d) => {
                    let f = coherence_symmetric(&reduced[k]);
                    worst = worst.max((f.relative_entropy - d.relative_entropy).abs()).max((f.l1 - d.l1).abs());
                }
                Err(e) => {
                    failure.get_or_insert(e.to_string());
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
        }
    }
    within("fast path gap", worst, 1e-9)?;

    let cfg = WalkConfig::search(4000, 2).map_err(|e| e.to_string())?;
    let theta = sqw_core::ReducedCoefficients::new(&cfg).theta;
    let period = (PI / theta).round() as usize;
    let states = ReducedState::initial(cfg).trajectory(period);
    let (mut rel_r, mut rel_l): (f64, f64) = (0.0, 0.0);
    for (k, s) in states.iter().enumerate() {
        let exact = coherence_symmetric(s);
        let approx = coherence_asymptotic(&cfg, k);
        rel_r = rel_r.max((approx.relative_entropy - exact.relative_entropy).abs() / exact.relative_entropy);
        rel_l = rel_l.max((approx.l1 - exact.l1).abs() / exact.l1);
    }
    within("asymptotic C_r relative error", rel_r, 0.05)?;
    within("asymptotic C_l relative error", rel_l, 0.05)?;
    Ok(format!("direct gap {worst:.1e}; N=4000 over {period} steps: C_r {rel_r:.1e}, C_l {rel_l:.1e}"))
}

fn phase_sweep_criteria() -> Outcome {
    let start = Instant::now();
    let points = phase_sweep(100, 2, &even_phases(25), &SweepOptions::default()).map_err(|e| e.to_string())?;
    let first = &points[0];
    let last = &points[24];
    if (last.phase - PI).abs() > 1e-15 || first.phase != 0.0 {
        return Err("sweep does not span [0, pi]".into());
    }
    within("1 - max P_s at pi", 1.0 - last.max_p, 0.05)?;
    within("max P_s at 0", first.max_p, 0.1)?;
    let max_p: Vec<f64> = points.iter().map(|p| p.max_p).collect();
    let min_c_r: Vec<f64> = points.iter().map(|p| p.c_r_norm_at_max).collect();
    let rho = spearman(&max_p, &min_c_r);
    within("spearman(max P_s, min C_r)", rho, -0.95)?;
    let memory = last.baselines.memory;
    if last.curve.avg_queries >= memory {
        return Err(format!("queries at pi {} not below {memory}", last.curve.avg_queries));
    }
    let blind = first.baselines.blind;
    within("relative gap to blind at 0", (first.curve.avg_queries - blind).abs() / blind, 0.1)?;
    in_time(start.elapsed(), 60.0)?;
    Ok(format!(
        "max P_s {:.4}/{:.4}, spearman {rho:.3}, queries {:.3} (memory {memory:.2}) / {:.3} (blind {blind}), {:.2}s",
        last.max_p,
        first.max_p,
        last.curve.avg_queries,
        first.curve.avg_queries,
        start.elapsed().as_secs_f64()
    ))
}

fn conjugation() -> Outcome {
    let mut rng = rng();
    let mut worst: f64 = 0.0;
    let mut phases = Vec::new();
    for _ in 0..5 {
        let phase = rng.gen_range(0.0..TAU);
        phases.push(format!("{phase:.3}"));
        let a = WalkConfig::new(100, 2, phase).map_err(|e| e.to_string())?;
        let b = WalkConfig::new(100, 2, TAU - phase).map_err(|e| e.to_string())?;
        let ta = trace_run(&a, 200).map_err(|e| e.to_string())?;
        let tb = trace_run(&b, 200).map_err(|e| e.to_string())?;
        for (x, y) in ta.iter().zip(&tb) {
            worst = worst
                .max((x.p_success - y.p_success).abs())
                .max((x.c_r_norm - y.c_r_norm).abs())
                .max((x.c_l_norm - y.c_l_norm).abs());
        }
        let fa = trace_run_full(&WalkConfig::new(20, 2, phase).map_err(|e| e.to_string())?, 50)
            .map_err(|e| e.to_string())?;
        let fb = trace_run_full(&WalkConfig::new(20, 2, TAU - phase).map_err(|e| e.to_string())?, 50)
            .map_err(|e| e.to_string())?;
        for (x, y) in fa.iter().zip(&fb) {
            worst = worst
                .max((x.p_success - y.p_success).abs())
                .max((x.c_r_norm - y.c_r_norm).abs())
                .max((x.c_l_norm - y.c_l_norm).abs());
        }
    }
    within("trace gap", worst, 1e-12)?;
    Ok(format!("phi in [{}], gap {worst:.1e}", phases.join(", ")))
}

/// Relative entropy and l1 coherence of an explicit density matrix.
fn matrix_coherence(rho: &DMatrix<Complex<f64>>) -> (f64, f64) {
    let entropy = |ps: &mut dyn Iterator<Item = f64>| -> f64 { ps.filter(|&p| p > 1e-15).map(|p| -p * p.log2()).sum() };
    let diag = entropy(&mut rho.diagonal().iter().map(|z| z.re));
    let eig = rho.clone().symmetric_eigenvalues();
    let full = entropy(&mut eig.iter().copied());
    let mut l1 = 0.0;
    for i in 0..rho.nrows() {
        for j in 0..rho.ncols() {
            if i != j {
                l1 += rho[(i, j)].norm();
            }
        }
    }
    (diag - full, l1)
}

fn ensemble_matrix(weights: &[f64]) -> DMatrix<Complex<f64>> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        weights.len(),
        weights.iter().map(|&w| Complex::new(w, 0.0)),
    ))
}

fn incoherent() -> Outcome {
    let cfg = WalkConfig::search(100, 2).map_err(|e| e.to_string())?;
    let mm = subspace_trace(&cfg, SubspaceLabel::MarkedMarked, 100).map_err(|e| e.to_string())?;
    within("|P_s(MM) - 1|", mm.iter().map(|p| (p - 1.0).abs()).fold(0.0, f64::max), 1e-12)?;
    let traces = SubspaceTraces::compute(&cfg, 101).map_err(|e| e.to_string())?;
    let inn = traces.get(SubspaceLabel::In).ok_or("no IN trace")?;
    let out = traces.get(SubspaceLabel::Out).ok_or("no OUT trace")?;
    let shift = (0..=100).map(|n| (out[n] - inn[n + 1]).abs()).fold(0.0, f64::max);
    within("|P_s(OUT, n) - P_s(IN, n+1)|", shift, 1e-12)?;

    let total = traces.uniform_total(&cfg);
    within("|P_s(0) - 394/9900|", (total[0] - 394.0 / 9900.0).abs(), 1e-12)?;
    let drift = total.iter().map(|p| (p - total[0]).abs()).fold(0.0, f64::max);
    within("max |P_s(n) - P_s(0)|", drift, 0.05)?;

    // explicit density matrices on a small graph
    let small = WalkConfig::search(6, 2).map_err(|e| e.to_string())?;
    let dim = small.dimension();
    let mut rng = rng();
    let random: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect();
    let sum: f64 = random.iter().sum();
    let ensembles = [
        DiagonalEnsemble::uniform(small),
        DiagonalEnsemble::from_subspace_weights(small, [0.1, 0.2, 0.3, 0.4]).map_err(|e| e.to_string())?,
        DiagonalEnsemble::from_edge_weights(small, random.iter().map(|w| w / sum).collect())
            .map_err(|e| e.to_string())?,
    ];
    let mut worst: f64 = 0.0;
    for e in &ensembles {
        let weights: Vec<f64> = match e.edge_weights() {
            Some(w) => w.to_vec(),
            None => {
                let ix = sqw_core::EdgeIndexer::new(6);
                let mut w = Vec::with_capacity(dim);
                for (a, b) in ix.pairs() {
                    let label = sqw_core::classify_edge(a, b, &small).map_err(|e| e.to_string())?;
                    w.push(e.weight(label) / label.dimension(&small) as f64);
                }
                w
            }
        };
        let (c_r, c_l) = matrix_coherence(&ensemble_matrix(&weights));
        let reported = e.coherence();
        worst = worst.max(c_r.abs()).max(c_l.abs()).max(reported.relative_entropy).max(reported.l1);
    }
    within("diagonal ensemble coherence", worst, 1e-12)?;
    Ok(format!("MM closure, shift {shift:.1e}, drift {drift:.4}, ensemble coherence {worst:.1e}"))
}

fn figure_data() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut surface = sqw_cli::spec::default_sweep(100, 2);
    if let Job::SweepPhase { surface: s, .. } = &mut surface {
        *s = true;
    }
    let datasets: [(&str, Job, &[&str]); 5] = [
        (
            "fig2",
            Job::Evolve { n: 100, v: 2, phi: PI, steps: 20, mode: Mode::Reduced },
            &["step", "p_success", "c_r_norm", "c_l_norm"],
        ),
        ("fig3", surface, &["phi", "step", "p_success", "c_r_norm", "c_l_norm"]),
        ("fig56", sqw_cli::spec::default_sweep(100, 2), &["phi", "max_p", "min_c_r_norm", "min_c_l_norm"]),
        ("fig8", sqw_cli::spec::default_sweep(100, 2), &["phi", "avg_queries", "blind", "memory"]),
        (
            "fig4",
            Job::Incoherent { n_list: vec![100, 120, 140], v_list: vec![1, 2, 3], n_max: 100, phi: PI },
            &["stat", "N", "v", "n", "p_in", "p_out", "p_nn", "p_mm", "p_total"],
        ),
    ];
    let mut sizes = Vec::new();
    for (name, job, required) in datasets {
        let spec = RunSpec::new(job);
        let output = execute(&spec).map_err(|e| format!("{name}: {e}"))?;
        let text = output.render(&spec);
        let path = dir.path().join(format!("{name}.csv"));
        std::fs::write(&path, &text).map_err(|e| e.to_string())?;
        let back = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        if sqw_cli::RunSpec::from_output(&back).map_err(|e| e.to_string())? != spec {
            return Err(format!("{name}: metadata does not round-trip"));
        }
        let header = back.lines().find(|l| !l.starts_with('#')).ok_or(format!("{name}: no header"))?;
        let columns: Vec<&str> = header.split(',').collect();
        if let Some(missing) = required.iter().find(|c| !columns.contains(c)) {
            return Err(format!("{name}: missing column {missing}"));
        }
        if output.table.rows.is_empty() {
            return Err(format!("{name}: no rows"));
        }
        sizes.push(format!("{name} {} rows", output.table.rows.len()));
    }
    Ok(sizes.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("unitarity", unitarity),
        ("full/reduced equivalence", equivalence),
        ("success peak", success_peak),
        ("coherence depletion", depletion),
        ("coherence fast path", fast_path),
        ("phase sweep", phase_sweep_criteria),
        ("conjugation symmetry", conjugation),
        ("incoherent identities", incoherent),
        ("figure data emission", figure_data),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
