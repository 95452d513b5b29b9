//! Experiment files, reports and the command-line front end for
//! `padic-harmonics-core`.
//!
//! A run reads a `padic-harmonics/spec-v1` JSON file, executes its tasks and
//! writes `report.json`, `runtime.json` and `tables/<task>.csv` into an
//! output directory. `report.json` depends only on the spec and the seed,
//! apart from its `timestamp` field.

pub mod exec;
pub mod model;
pub mod report;
pub mod spec;
pub mod tables;

use std::path::Path;
use std::time::Instant;

pub use exec::{TaskOutcome, TaskResult};
pub use spec::{load_spec, parse_spec, ExperimentSpec, SpecError};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Replaces the spec's seed.
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
    /// Indeterminate condition checks count as failures.
    pub strict: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("writing tables: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub struct RunSummary {
    pub outcomes: Vec<TaskOutcome>,
    pub report: serde_json::Value,
}

impl RunSummary {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|t| t.passed)
    }

    pub fn failing(&self) -> impl Iterator<Item = &TaskOutcome> {
        self.outcomes.iter().filter(|t| !t.passed)
    }
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Validates `spec`, runs it and returns the report without touching the disk.
pub fn execute(spec: &ExperimentSpec, opts: &RunOptions, timestamp: &str) -> Result<RunSummary, RunError> {
    let mut spec = spec.clone();
    if let Some(s) = opts.seed {
        spec.seed = s;
    }
    let (canonical, model) = model::build(&spec)?;
    let outcomes = exec::run_tasks(&model, opts.strict, opts.jobs)?;
    let prov = report::Provenance {
        seed: model.seed,
        config_hash: report::digest(&spec::to_json(&canonical)),
        strict: opts.strict,
    };
    let report = report::report(&outcomes, &prov, timestamp);
    Ok(RunSummary { outcomes, report })
}

/// Runs `spec` and writes the output files under `out`.
pub fn run(spec: &ExperimentSpec, out: &Path, opts: &RunOptions) -> Result<RunSummary, RunError> {
    let start = Instant::now();
    let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let summary = execute(spec, opts, &timestamp)?;
    let tables = out.join("tables");
    std::fs::create_dir_all(&tables).map_err(io(&tables))?;
    for t in &summary.outcomes {
        tables::write(&tables, t)?;
    }
    let path = out.join("report.json");
    std::fs::write(&path, pretty(&summary.report)).map_err(io(&path))?;
    let jobs = if opts.jobs == 0 { rayon::current_num_threads() } else { opts.jobs };
    let runtime = report::runtime(&summary.outcomes, jobs, start.elapsed());
    let path = out.join("runtime.json");
    std::fs::write(&path, pretty(&runtime)).map_err(io(&path))?;
    Ok(summary)
}

pub fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}
