//! Command-line front end for the `sqw-core` simulator.
//!
//! Every output file carries the [`RunSpec`] that produced it, so any file
//! can be regenerated bit for bit with `sqw replay`.

pub mod commands;
pub mod error;
pub mod phase;
pub mod spec;
pub mod table;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use commands::{execute, Output};
pub use error::{CliError, CliResult};
pub use spec::{Format, Job, Mode, RunSpec, DEFAULT_MEMORY_CAP};

/// Environment variable naming the directory for outputs when `--out` is
/// not given. Without it, output goes to stdout.
pub const OUT_DIR_ENV: &str = "SQW_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "sqw", version, about = "Scattering quantum-walk search on the complete graph")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format; `validate` defaults to json, everything else to csv.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file. Relative paths resolve against the working directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest full state vector, in amplitudes.
    #[arg(long, global = true, default_value_t = DEFAULT_MEMORY_CAP)]
    pub memory_cap: usize,
    /// Seed for the Monte Carlo baselines.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Number of vertices.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Number of marked vertices.
    #[arg(long, default_value_t = 2)]
    pub v: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Success probability and coherence along one run.
    Evolve {
        #[command(flatten)]
        graph: GraphArgs,
        /// Phase at marked vertices: radians, `pi`, `pi/2`, `2pi/3`, ...
        #[arg(long, default_value = "pi", value_parser = phase::parse_phase, allow_hyphen_values = true)]
        phi: f64,
        /// Steps to run (default: four times the optimal measurement step).
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Reduced)]
        mode: Mode,
    },
    /// Peak success, coherence and query cost across evenly spaced phases in [0, pi].
    SweepPhase {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 25)]
        phases: usize,
        /// Step horizon for the maximum and the query optimization.
        #[arg(long)]
        m_max: Option<usize>,
        /// Local maxima averaged in the peak_mean columns.
        #[arg(long, default_value_t = sqw_core::queries::DEFAULT_PEAK_COUNT)]
        peaks: usize,
        /// Monte Carlo trials per classical baseline.
        #[arg(long, default_value_t = sqw_core::queries::DEFAULT_TRIALS)]
        trials: usize,
        /// Emit the (phi, step) grid instead of the per-phase summary.
        #[arg(long)]
        surface: bool,
    },
    /// Expected oracle queries for each measurement step.
    Queries {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value = "pi", value_parser = phase::parse_phase, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long)]
        m_max: Option<usize>,
    },
    /// Success curves of the four edge classes over a grid of graphs.
    Incoherent {
        #[arg(long, value_delimiter = ',', default_value = "100,200,300,400")]
        n_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        v_list: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        #[arg(long, default_value = "pi", value_parser = phase::parse_phase, allow_hyphen_values = true)]
        phi: f64,
    },
    /// Invariant battery; exits 1 if any check fails.
    Validate {
        #[arg(long)]
        quick: bool,
    },
    /// Re-run the spec embedded in an output file.
    Replay {
        file: PathBuf,
        /// Compare with the file instead of writing; exit 1 on any difference.
        #[arg(long)]
        check: bool,
    },
}

fn default_steps(n: usize, v: usize, phi: f64) -> CliResult<usize> {
    let cfg = sqw_core::WalkConfig::new(n, v, phi)?;
    Ok(sqw_core::queries::default_m_max(&cfg))
}

/// Builds the fully resolved spec for a run command. `None` for `replay`.
pub fn resolve(cli: &Cli) -> CliResult<Option<RunSpec>> {
    let job = match &cli.command {
        Command::Evolve { graph, phi, steps, mode } => Job::Evolve {
            n: graph.n,
            v: graph.v,
            phi: *phi,
            steps: match steps {
                Some(s) => *s,
                None => default_steps(graph.n, graph.v, *phi)?,
            },
            mode: *mode,
        },
        Command::SweepPhase { graph, phases, m_max, peaks, trials, surface } => Job::SweepPhase {
            n: graph.n,
            v: graph.v,
            phases: *phases,
            m_max: *m_max,
            peaks: *peaks,
            trials: *trials,
            surface: *surface,
        },
        Command::Queries { graph, phi, m_max } => Job::Queries {
            n: graph.n,
            v: graph.v,
            phi: *phi,
            m_max: match m_max {
                Some(m) => *m,
                None => default_steps(graph.n, graph.v, *phi)?,
            },
        },
        Command::Incoherent { n_list, v_list, n_max, phi } => {
            Job::Incoherent { n_list: n_list.clone(), v_list: v_list.clone(), n_max: *n_max, phi: *phi }
        }
        Command::Validate { quick } => Job::Validate { quick: *quick },
        Command::Replay { .. } => return Ok(None),
    };
    let mut spec = RunSpec::new(job).with_seed(cli.global.seed);
    if let Some(format) = cli.global.format {
        spec = spec.with_format(format);
    }
    spec.memory_cap = cli.global.memory_cap;
    Ok(Some(spec))
}

/// Where to write: `--out`, else `$SQW_OUT_DIR/<default name>`, else stdout.
pub fn destination(out: Option<&Path>, out_dir: Option<&Path>, spec: &RunSpec) -> Option<PathBuf> {
    out.map(Path::to_path_buf).or_else(|| out_dir.map(|d| d.join(spec.default_file_name())))
}

fn write(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, text)?;
            eprintln!("wrote {}", p.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// Runs a parsed command line to completion.
pub fn run(cli: &Cli) -> CliResult<()> {
    let out_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    if let Command::Replay { file, check } = &cli.command {
        let original = std::fs::read_to_string(file)?;
        let spec = RunSpec::from_output(&original)?;
        let output = execute(&spec)?;
        let text = output.render(&spec);
        if *check {
            if text != original {
                return Err(CliError::Validation(format!("{} does not reproduce", file.display())));
            }
            eprintln!("{} reproduces", file.display());
        } else {
            write(&text, cli.global.out.as_deref())?;
        }
        return finish(output);
    }
    let spec = resolve(cli)?.expect("run commands resolve to a spec");
    let output = execute(&spec)?;
    let path = destination(cli.global.out.as_deref(), out_dir.as_deref(), &spec);
    write(&output.render(&spec), path.as_deref())?;
    finish(output)
}

fn finish(output: Output) -> CliResult<()> {
    match output.failure {
        Some(msg) => Err(CliError::Validation(msg)),
        None => Ok(()),
    }
}
