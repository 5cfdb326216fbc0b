//! One function per subcommand, each turning a [`RunSpec`] into a table.

use sqw_core::coherence::{trace_run, trace_run_full};
use sqw_core::incoherent::subspace_statistics;
use sqw_core::queries::{
    blind_expectation, default_m_max, even_phases, memory_expectation, optimize_queries, phase_sweep, query_costs,
    SweepOptions,
};
use sqw_core::reduced::success_curve;
use sqw_core::validate::{self, ValidationOptions};
use sqw_core::{coherence_symmetric, ReducedState, SubspaceLabel, WalkConfig};

use crate::error::{CliError, CliResult};
use crate::spec::{Job, Mode, RunSpec};
use crate::table::{Cell, Table};

/// Largest allowed gap between the full and reduced engines.
pub const ENGINE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub table: Table,
    /// Set when the run completed but a check failed; the table is still
    /// written.
    pub failure: Option<String>,
}

impl Output {
    fn ok(table: Table) -> Self {
        Self { table, failure: None }
    }

    pub fn render(&self, spec: &RunSpec) -> String {
        match spec.format {
            crate::spec::Format::Csv => self.table.to_csv(spec),
            crate::spec::Format::Json => self.table.to_json(spec),
        }
    }
}

pub fn execute(spec: &RunSpec) -> CliResult<Output> {
    match &spec.job {
        Job::Evolve { n, v, phi, steps, mode } => evolve(spec, *n, *v, *phi, *steps, *mode),
        Job::SweepPhase { n, v, phases, m_max, peaks, trials, surface } => {
            if *phases < 2 {
                return Err(CliError::Usage("--phases must be at least 2".into()));
            }
            let options = SweepOptions { m_max: *m_max, peak_count: *peaks, seed: spec.seed, trials: *trials };
            if *surface {
                surface_table(*n, *v, *phases, m_max.as_ref().copied())
            } else {
                sweep(*n, *v, *phases, &options)
            }
        }
        Job::Queries { n, v, phi, m_max } => queries(*n, *v, *phi, *m_max),
        Job::Incoherent { n_list, v_list, n_max, phi } => incoherent(spec, n_list, v_list, *n_max, *phi),
        Job::Validate { quick } => validate_battery(*quick),
    }
}

fn check_memory(spec: &RunSpec, n: usize) -> CliResult<()> {
    let needed = n.saturating_mul(n.saturating_sub(1));
    if needed > spec.memory_cap {
        return Err(CliError::MemoryCap { needed, cap: spec.memory_cap });
    }
    Ok(())
}

fn evolve(spec: &RunSpec, n: usize, v: usize, phi: f64, steps: usize, mode: Mode) -> CliResult<Output> {
    let cfg = WalkConfig::new(n, v, phi)?;
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let reduced = trace_run(&cfg, steps)?;
    let mut failure = None;
    let samples = match mode {
        Mode::Reduced => reduced,
        Mode::Full => {
            check_memory(spec, n)?;
            let full = trace_run_full(&cfg, steps)?;
            let gap = full.iter().zip(&reduced).map(|(a, b)| (a.p_success - b.p_success).abs()).fold(0.0, f64::max);
            // NaN counts as a mismatch
            if gap.is_nan() || gap > ENGINE_TOLERANCE {
                failure = Some(format!("full and reduced success probabilities differ by {gap:e}"));
            }
            full
        }
    };
    let mut table = Table::new(vec!["step", "p_success", "c_r", "c_l", "c_r_norm", "c_l_norm"]);
    for s in samples {
        table.push(vec![
            s.step.into(),
            s.p_success.into(),
            s.c_r.into(),
            s.c_l.into(),
            s.c_r_norm.into(),
            s.c_l_norm.into(),
        ]);
    }
    Ok(Output { table, failure })
}

pub const SWEEP_COLUMNS: [&str; 21] = [
    "phi",
    "max_p",
    "step_at_max",
    "min_c_r_norm",
    "min_c_l_norm",
    "best_m",
    "avg_queries",
    "blind",
    "memory",
    "p_at_best_m",
    "c_r_at_max",
    "c_l_at_max",
    "peak_steps",
    "peak_mean_p",
    "peak_mean_c_r_norm",
    "peak_mean_c_l_norm",
    "blind_mc",
    "blind_mc_err",
    "memory_mc",
    "memory_mc_err",
    "mc_trials",
];

fn sweep(n: usize, v: usize, count: usize, options: &SweepOptions) -> CliResult<Output> {
    let points = phase_sweep(n, v, &even_phases(count), options)?;
    let mut table = Table::new(SWEEP_COLUMNS.to_vec());
    for p in points {
        let peaks: Vec<String> = p.peak_steps.iter().map(usize::to_string).collect();
        let b = &p.baselines;
        table.push(vec![
            p.phase.into(),
            p.max_p.into(),
            p.step_at_max.into(),
            p.c_r_norm_at_max.into(),
            p.c_l_norm_at_max.into(),
            p.curve.best_m.into(),
            p.curve.avg_queries.into(),
            b.blind.into(),
            b.memory.into(),
            p.curve.p_at_m.into(),
            p.coherence_at_max.relative_entropy.into(),
            p.coherence_at_max.l1.into(),
            Cell::Text(peaks.join(";")),
            p.peak_mean_p.into(),
            p.peak_mean_c_r_norm.into(),
            p.peak_mean_c_l_norm.into(),
            b.blind_mc.mean.into(),
            b.blind_mc.std_err.into(),
            b.memory_mc.mean.into(),
            b.memory_mc.std_err.into(),
            b.blind_mc.trials.into(),
        ]);
    }
    Ok(Output::ok(table))
}

/// Long-format `(phi, step)` grid of success probability and normalized
/// coherence.
fn surface_table(n: usize, v: usize, count: usize, m_max: Option<usize>) -> CliResult<Output> {
    let mut table = Table::new(vec!["phi", "step", "p_success", "c_r_norm", "c_l_norm"]);
    for phi in even_phases(count) {
        let cfg = WalkConfig::new(n, v, phi)?;
        let steps = m_max.unwrap_or_else(|| default_m_max(&cfg)).max(1);
        let states = ReducedState::initial(cfg).trajectory(steps);
        let base = coherence_symmetric(&states[0]);
        for (k, s) in states.iter().enumerate() {
            let c = coherence_symmetric(s);
            table.push(vec![
                phi.into(),
                k.into(),
                s.success_probability().into(),
                (c.relative_entropy / base.relative_entropy).into(),
                (c.l1 / base.l1).into(),
            ]);
        }
    }
    Ok(Output::ok(table))
}

fn queries(n: usize, v: usize, phi: f64, m_max: usize) -> CliResult<Output> {
    let cfg = WalkConfig::new(n, v, phi)?;
    let best = optimize_queries(&cfg, m_max)?;
    let probs = success_curve(&cfg, m_max);
    let costs = query_costs(&cfg, m_max);
    let (blind, memory) = (blind_expectation(n, v), memory_expectation(n, v));
    let mut table = Table::new(vec!["m", "p_success", "avg_queries", "is_best", "blind", "memory"]);
    for (m, (p, q)) in probs.iter().zip(&costs).enumerate() {
        let is_best = usize::from(m == best.best_m);
        table.push(vec![m.into(), (*p).into(), (*q).into(), is_best.into(), blind.into(), memory.into()]);
    }
    Ok(Output::ok(table))
}

pub const INCOHERENT_COLUMNS: [&str; 9] = ["stat", "N", "v", "n", "p_in", "p_out", "p_nn", "p_mm", "p_total"];

fn incoherent(spec: &RunSpec, n_list: &[usize], v_list: &[usize], n_max: usize, phi: f64) -> CliResult<Output> {
    if n_list.is_empty() || v_list.is_empty() {
        return Err(CliError::Usage("--n-list and --v-list must be non-empty".into()));
    }
    for &n in n_list {
        check_memory(spec, n)?;
    }
    let stats = subspace_statistics(n_list, v_list, n_max, phi)?;
    let totals: Vec<Vec<f64>> = stats
        .points
        .iter()
        .map(|p| p.uniform_total(&WalkConfig::new(p.n_vertices, p.n_marked, phi).expect("validated above")))
        .collect();

    let mut table = Table::new(INCOHERENT_COLUMNS.to_vec());
    for (point, total) in stats.points.iter().zip(&totals) {
        for step in 0..=n_max {
            let mut row: Vec<Cell> = vec![Cell::Empty, point.n_vertices.into(), point.n_marked.into(), step.into()];
            row.extend(SubspaceLabel::ALL.iter().map(|&l| Cell::from(point.get(l).map(|t| t[step]))));
            row.push(total[step].into());
            table.push(row);
        }
    }
    for stat in ["mean", "min", "max"] {
        for step in 0..=n_max {
            let mut row: Vec<Cell> = vec![stat.into(), Cell::Empty, Cell::Empty, step.into()];
            for label in SubspaceLabel::ALL {
                let summary = stats.summary.iter().find(|r| r.label == label && r.step == step);
                row.push(Cell::from(summary.map(|r| match stat {
                    "mean" => r.mean,
                    "min" => r.min,
                    _ => r.max,
                })));
            }
            let column: Vec<f64> = totals.iter().map(|t| t[step]).collect();
            row.push(reduce(stat, &column).into());
            table.push(row);
        }
    }
    Ok(Output::ok(table))
}

fn reduce(stat: &str, values: &[f64]) -> f64 {
    match stat {
        "mean" => values.iter().sum::<f64>() / values.len() as f64,
        "min" => values.iter().copied().fold(f64::INFINITY, f64::min),
        _ => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

fn validate_battery(quick: bool) -> CliResult<Output> {
    let report = validate::run(&ValidationOptions { quick, ..Default::default() })?;
    let mut table = Table::new(vec!["check", "passed", "deviation", "tolerance", "detail"]);
    for c in &report.checks {
        table.push(vec![
            c.name.as_str().into(),
            Cell::Bool(c.passed),
            c.deviation.into(),
            c.tolerance.into(),
            c.detail.as_str().into(),
        ]);
    }
    let failed: Vec<String> = report.failures().map(|c| format!("{} (deviation {:e})", c.name, c.deviation)).collect();
    let failure = (!failed.is_empty()).then(|| failed.join(", "));
    Ok(Output { table, failure })
}
