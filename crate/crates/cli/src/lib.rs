//! Command-line front end: argument model, dispatch and report persistence.

pub mod commands;
pub mod report;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use gqm_core::GqmError;

pub use report::{Format, Report, RunInfo, Table};

/// Environment variable that relocates relative `--output` paths.
pub const OUTPUT_DIR_ENV: &str = "GQM_OUTPUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] GqmError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 2 for anything the caller can fix by changing the command line.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            _ => 2,
        }
    }
}

impl From<gqm_core::FieldError> for CliError {
    fn from(e: gqm_core::FieldError) -> Self {
        CliError::Model(e.into())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gqm",
    version,
    about = "Exact finite-field quantum mechanics: tables, searches and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Shorthand for --format json.
    #[arg(long, global = true)]
    pub json: bool,
    /// Shorthand for --format markdown (the default).
    #[arg(long, global = true)]
    pub markdown: bool,
    /// Shorthand for --format csv; only for tabular results.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Write to this file instead of stdout. Relative paths resolve under $GQM_OUTPUT_DIR when set.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for the parallel searches (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Addition and multiplication tables of GF(p^n).
    FieldTable {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Coefficients c0,c1,...,cn of a monic irreducible polynomial (lowest degree first).
        #[arg(long, value_delimiter = ',')]
        irreducible: Option<Vec<u32>>,
    },
    /// Labelled states of PG(N-1, q), with duals for N = 2.
    States {
        #[arg(long)]
        q: usize,
        #[arg(long = "n-levels", default_value_t = 2)]
        n_levels: usize,
    },
    /// Lines, planes and the product-state grid of PG(3,2).
    Geometry {
        #[arg(long, default_value_t = 2)]
        q: usize,
    },
    /// Outcome probabilities of every observable on every one-particle state.
    ProbTable {
        #[arg(long)]
        q: usize,
        /// Also list the negated observables.
        #[arg(long)]
        signed: bool,
    },
    /// Product and entangled two-particle states.
    TwoStates {
        #[arg(long)]
        q: usize,
    },
    /// Joint probabilities and correlations of X/Y/Z products on the entangled q = 2 states.
    CorrTable {
        #[arg(long, default_value_t = 2)]
        q: usize,
    },
    /// Exhaustive CHSH maximization.
    Chsh {
        #[arg(long)]
        q: usize,
        /// Search product states as well as entangled ones.
        #[arg(long)]
        include_product: bool,
        /// Search all signed observables instead of one orientation per direction.
        #[arg(long)]
        no_prune: bool,
        /// Limit on listed achievers (0 = no limit); the full count is always reported.
        #[arg(long, default_value_t = 1000)]
        max_achievers: usize,
    },
    /// Local hidden-variable assignments against zero-probability outcomes.
    HvCheck {
        #[arg(long, default_value_t = 2)]
        q: usize,
        /// State label (`S`, `ab`, `(abc)`) or coordinates like `[0,1,1,0]`.
        #[arg(long, default_value = "S")]
        state: String,
        /// Comma-separated observables (default: one per direction).
        #[arg(long)]
        observables: Option<String>,
    },
    /// PGL(2,q) as a permutation group on the q+1 states.
    Group {
        #[arg(long)]
        q: usize,
        /// Report a witness matrix for this label permutation, e.g. `(ab)`.
        #[arg(long)]
        witness: Option<String>,
    },
    /// Cycle-type census of PGL(2,q) inside S_{q+1}.
    S6Census {
        #[arg(long, default_value_t = 5)]
        q: usize,
    },
    /// Run every table, search and structural check and report pass/fail.
    VerifyAll {
        #[arg(long, default_value_t = 2)]
        q: usize,
    },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let o = self.output;
        let mut chosen: Vec<Format> = o.format.into_iter().collect();
        if o.json {
            chosen.push(Format::Json);
        }
        if o.markdown {
            chosen.push(Format::Markdown);
        }
        if o.csv {
            chosen.push(Format::Csv);
        }
        chosen.dedup();
        if chosen.len() > 1 {
            return Err(CliError::Usage("conflicting output formats".into()));
        }
        Ok(RunConfig {
            command: self.command,
            format: chosen.first().copied().unwrap_or(Format::Markdown),
            output: o.output,
            threads: o.threads.map(|t| t as usize),
        })
    }
}

/// Builds the report, running the parallel parts on a pool of the requested size.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    #[cfg(feature = "parallel")]
    {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = config.threads {
            builder = builder.num_threads(t);
        }
        let pool = builder
            .build()
            .map_err(|e| CliError::Internal(e.to_string()))?;
        pool.install(|| commands::dispatch(&config.command))
    }
    #[cfg(not(feature = "parallel"))]
    {
        commands::dispatch(&config.command)
    }
}

pub fn effective_threads(config: &RunConfig) -> usize {
    #[cfg(feature = "parallel")]
    {
        config.threads.unwrap_or_else(rayon::current_num_threads)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = config;
        1
    }
}

pub fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Renders and writes the report; returns the rendered text.
pub fn emit(report: &Report, config: &RunConfig) -> Result<String, CliError> {
    let info = RunInfo {
        threads: effective_threads(config),
        timestamp: chrono::Utc::now().to_rfc3339(),
    };
    let text = report.render(config.format, &info)?;
    match &config.output {
        Some(p) => {
            let path = resolve_output(p);
            std::fs::write(&path, &text).map_err(|source| CliError::Output { path, source })?;
        }
        None => print!("{text}"),
    }
    Ok(text)
}
