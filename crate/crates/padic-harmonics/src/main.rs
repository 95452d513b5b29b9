use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use padic_harmonics::{load_spec, run, spec, RunOptions};

/// Exact p-adic harmonic analysis experiments.
///
/// Exit status: 0 when every task passes, 1 when a task fails or errors,
/// 2 for an invalid spec, bad arguments or an I/O error.
#[derive(Parser)]
#[command(name = "padic-harmonics", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a spec and write report.json, runtime.json and tables/*.csv.
    Run {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the spec's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (0: all cores).
        #[arg(long, env = "PADIC_HARMONICS_JOBS", default_value_t = 0)]
        jobs: usize,
        /// Treat indeterminate condition checks as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Check a spec without running it.
    Validate {
        #[arg(long)]
        spec: PathBuf,
        /// Print the canonical form of the spec.
        #[arg(long)]
        canonical: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { spec: path, canonical } => match load_spec(&path) {
            Ok(s) => {
                if canonical {
                    print!("{}", spec::to_json(&s));
                } else {
                    eprintln!("{}: valid, {} task(s)", path.display(), s.tasks.len());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                ExitCode::from(2)
            }
        },
        Command::Run {
            spec: path,
            out,
            seed,
            jobs,
            strict,
        } => {
            let s = match load_spec(&path) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{}: {e}", path.display());
                    return ExitCode::from(2);
                }
            };
            match run(&s, &out, &RunOptions { seed, jobs, strict }) {
                Ok(summary) if summary.passed() => ExitCode::SUCCESS,
                Ok(summary) => {
                    for t in summary.failing() {
                        match &t.result {
                            Err(e) => eprintln!("task {} failed: {e}", t.id),
                            Ok(_) => eprintln!("task {} failed", t.id),
                        }
                    }
                    ExitCode::from(1)
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
