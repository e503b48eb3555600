//! `msl` — forward and inverse spectral problems for matrix
//! Sturm-Liouville operators on `[0, pi]`.
//!
//! Exit codes: 0 success, 2 validation failure, 3 numerical failure,
//! 4 schema or input error. Verbosity via the `MSL_LOG` environment
//! variable (`error`, `warn`, `info`, `debug`).

mod commands;
mod csvout;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "msl", version, about = "Matrix Sturm-Liouville spectral problems")]
struct Cli {
    /// Cap the worker-thread count (defaults to the core count).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute spectral data {lambda_nq, alpha_nq} of a problem file.
    Forward {
        /// Problem JSON file.
        problem: PathBuf,
        /// Number of eigenvalue clusters (n = 0..=N).
        #[arg(long = "N", default_value_t = 30)]
        n: usize,
        /// ODE grid steps.
        #[arg(long, default_value_t = 2048)]
        grid_points: usize,
        /// Output path for the spectral data (stdout when omitted).
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Optional path for the asymptotics/assembly report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Reconstruct (Q, h, H) from spectral data.
    Inverse {
        /// Spectral data JSON file.
        data: PathBuf,
        /// Truncation order of the main equation.
        #[arg(long = "N-trunc", default_value_t = 30)]
        n_trunc: usize,
        /// Nodes of the reconstruction x-grid.
        #[arg(long, default_value_t = 1024)]
        x_points: usize,
        /// Derivative path for eps = -2 eps0' ("analytic" or "fd").
        #[arg(long, default_value = "analytic")]
        derivative: String,
        /// Model anchoring ("matched" or "canonical").
        #[arg(long, default_value = "matched")]
        model: String,
        /// Reconstruct even when the data fails validation.
        #[arg(long)]
        skip_validation: bool,
        /// Output path for the problem JSON (stdout when omitted).
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Optional diagnostics JSON path.
        #[arg(long)]
        diagnostics: Option<PathBuf>,
        /// Optional CSV with x, Q entries, eps0 entries.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check spectral data against the admissibility conditions.
    Validate {
        /// Spectral data JSON file.
        data: PathBuf,
        /// Output path for the report (stdout when omitted).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Forward + inverse on one problem, reporting reconstruction errors.
    Roundtrip {
        /// Problem JSON file.
        problem: PathBuf,
        /// Number of eigenvalue clusters for the forward pass.
        #[arg(long = "N", default_value_t = 40)]
        n: usize,
        /// Truncation order for the inverse pass; the convergence table
        /// also runs at its halves.
        #[arg(long = "N-trunc", default_value_t = 40)]
        n_trunc: usize,
        /// ODE grid steps.
        #[arg(long, default_value_t = 2048)]
        grid_points: usize,
        /// Nodes of the reconstruction x-grid.
        #[arg(long, default_value_t = 1024)]
        x_points: usize,
        /// Derivative path ("analytic" or "fd").
        #[arg(long, default_value = "analytic")]
        derivative: String,
        /// Metrics JSON output (stdout when omitted).
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Optional CSV with x, Q_true, Q_rec, eps0 columns.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("MSL_LOG", "warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("msl: could not configure {t} threads: {e}");
            return ExitCode::from(3);
        }
    }
    let outcome = match cli.command {
        Command::Forward { problem, n, grid_points, output, report } => {
            commands::forward::run(&problem, n, grid_points, output.as_deref(), report.as_deref())
        }
        Command::Inverse {
            data,
            n_trunc,
            x_points,
            derivative,
            model,
            skip_validation,
            output,
            diagnostics,
            csv,
        } => commands::inverse::run(commands::inverse::Args {
            data: &data,
            n_trunc,
            x_points,
            derivative: &derivative,
            model: &model,
            skip_validation,
            output: output.as_deref(),
            diagnostics: diagnostics.as_deref(),
            csv: csv.as_deref(),
        }),
        Command::Validate { data, output } => commands::validate::run(&data, output.as_deref()),
        Command::Roundtrip {
            problem,
            n,
            n_trunc,
            grid_points,
            x_points,
            derivative,
            output,
            csv,
        } => commands::roundtrip::run(commands::roundtrip::Args {
            problem: &problem,
            n,
            n_trunc,
            grid_points,
            x_points,
            derivative: &derivative,
            output: output.as_deref(),
            csv: csv.as_deref(),
        }),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("msl: {e}");
            ExitCode::from(commands::exit_code_for(&e))
        }
    }
}
