//! Run specifications and their embedding in output files.

use serde::{Deserialize, Serialize};
use sqw_core::queries::{DEFAULT_PEAK_COUNT, DEFAULT_TRIALS};

use crate::error::{CliError, CliResult};

/// Largest full state vector accepted by default, in amplitudes.
pub const DEFAULT_MEMORY_CAP: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Reduced,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Command-specific parameters, with every default already resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Job {
    Evolve { n: usize, v: usize, phi: f64, steps: usize, mode: Mode },
    SweepPhase { n: usize, v: usize, phases: usize, m_max: Option<usize>, peaks: usize, trials: usize, surface: bool },
    Queries { n: usize, v: usize, phi: f64, m_max: usize },
    Incoherent { n_list: Vec<usize>, v_list: Vec<usize>, n_max: usize, phi: f64 },
    Validate { quick: bool },
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Evolve { .. } => "evolve",
            Job::SweepPhase { .. } => "sweep-phase",
            Job::Queries { .. } => "queries",
            Job::Incoherent { .. } => "incoherent",
            Job::Validate { .. } => "validate",
        }
    }
}

/// Everything that determines the bytes of an output file. The output
/// location and thread count are deliberately absent: neither changes the
/// data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    #[serde(flatten)]
    pub job: Job,
    pub seed: u64,
    pub format: Format,
    pub memory_cap: usize,
}

impl RunSpec {
    pub fn new(job: Job) -> Self {
        let format = match job {
            Job::Validate { .. } => Format::Json,
            _ => Format::Csv,
        };
        Self { job, seed: 0, format, memory_cap: DEFAULT_MEMORY_CAP }
    }

    pub fn with_format(mut self, format: Format) -> Self {
        self.format = format;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("run spec serializes")
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Metadata(e.to_string()))
    }

    /// Recovers the spec embedded in a CSV or JSON output file.
    pub fn from_output(text: &str) -> CliResult<Self> {
        if text.trim_start().starts_with('{') {
            let doc: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Metadata(e.to_string()))?;
            let spec = doc.get("runspec").ok_or_else(|| CliError::Metadata("no runspec field".into()))?;
            return serde_json::from_value(spec.clone()).map_err(|e| CliError::Metadata(e.to_string()));
        }
        text.lines()
            .take_while(|l| l.starts_with('#'))
            .find_map(|l| l.strip_prefix("# runspec:"))
            .ok_or_else(|| CliError::Metadata("no '# runspec:' line".into()))
            .and_then(|json| Self::from_json(json.trim()))
    }

    /// File name used when only an output directory is known.
    pub fn default_file_name(&self) -> String {
        let stem = match &self.job {
            Job::Evolve { n, v, mode, .. } => {
                format!("evolve_n{n}_v{v}_{}", if *mode == Mode::Full { "full" } else { "reduced" })
            }
            Job::SweepPhase { n, v, surface, .. } => {
                format!("sweep-phase_n{n}_v{v}{}", if *surface { "_surface" } else { "" })
            }
            Job::Queries { n, v, .. } => format!("queries_n{n}_v{v}"),
            Job::Incoherent { .. } => "incoherent".to_string(),
            Job::Validate { .. } => "validate".to_string(),
        };
        format!("{stem}.{}", self.format.extension())
    }
}

pub fn default_sweep(n: usize, v: usize) -> Job {
    Job::SweepPhase { n, v, phases: 25, m_max: None, peaks: DEFAULT_PEAK_COUNT, trials: DEFAULT_TRIALS, surface: false }
}
