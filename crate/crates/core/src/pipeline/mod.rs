//! Command layer behind the `hatenet` binary.
//!
//! Every command reads a [`RunConfig`], writes CSV artifacts into the output
//! directory and finishes with `manifest_<command>.json`, which lists the
//! inputs and artifacts with their SHA-256 digests. Downstream commands read
//! the artifacts of upstream ones (`records.jsonl` from `ingest`, the CSVs
//! consumed by `report`).

mod commands;
mod config;
mod manifest;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

pub use commands::generate;
pub use config::{
    ClassifySection, ContagionSection, HomophilySection, InputSection, RunConfig, RunSection, TimelineSection,
    WindowSection, CONFIG_ENV,
};
pub use manifest::{sha256_hex, ArtifactEntry, InputEntry, Manifest};

/// Failure of a command, grouped by exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    /// Bad configuration, missing input files or missing upstream artifacts.
    #[error("{0}")]
    Validation(String),
    /// Inputs that parse but cannot support the analysis.
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Internal(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Validation(_) => 1,
            PipelineError::Data(_) => 2,
            PipelineError::Internal(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PipelineError::Validation(_) => "validation",
            PipelineError::Data(_) => "data",
            PipelineError::Internal(_) => "internal",
        }
    }

    /// Single-line JSON error record.
    pub fn to_json(&self, command: Option<&str>) -> String {
        serde_json::json!({
            "error": {
                "kind": self.kind(),
                "exit_code": self.exit_code(),
                "command": command,
                "message": self.to_string(),
            }
        })
        .to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Ingest,
    Classify,
    Users,
    Timeline,
    Homophily,
    Contagion,
    Report,
}

impl Command {
    /// Pipeline order.
    pub const ALL: [Command; 7] = [
        Command::Ingest,
        Command::Classify,
        Command::Users,
        Command::Timeline,
        Command::Homophily,
        Command::Contagion,
        Command::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Ingest => "ingest",
            Command::Classify => "classify",
            Command::Users => "users",
            Command::Timeline => "timeline",
            Command::Homophily => "homophily",
            Command::Contagion => "contagion",
            Command::Report => "report",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

/// What a finished command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub command: Command,
    /// Artifact paths relative to the output directory, manifest last.
    pub artifacts: Vec<String>,
    pub warnings: Vec<String>,
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, PipelineError> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| PipelineError::Internal(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Validates the config for `command` and runs it.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<Outcome, PipelineError> {
    cfg.validate(command)?;
    std::fs::create_dir_all(&cfg.run.output).map_err(|e| {
        PipelineError::Validation(format!(
            "cannot create output directory {}: {e}",
            cfg.run.output.display()
        ))
    })?;
    with_pool(cfg.run.threads, || commands::run(command, cfg))?
}

/// Runs every command in order. Graph commands are skipped with a warning
/// when no edge file is configured.
pub fn run_all(cfg: &RunConfig) -> Result<Vec<Outcome>, PipelineError> {
    let mut out = Vec::new();
    for command in Command::ALL {
        if matches!(command, Command::Homophily | Command::Contagion) && cfg.input.edges.is_none() {
            out.push(Outcome {
                command,
                artifacts: Vec::new(),
                warnings: vec!["skipped: input.edges not configured".into()],
            });
            continue;
        }
        out.push(execute(command, cfg)?);
    }
    Ok(out)
}

/// Loads the config at `path`, or the one named by [`CONFIG_ENV`], or the
/// defaults.
pub fn load_config(path: Option<&Path>) -> Result<RunConfig, PipelineError> {
    match path {
        Some(p) => RunConfig::load(p),
        None => match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => RunConfig::load(Path::new(&p)),
            _ => Ok(RunConfig::default()),
        },
    }
}
