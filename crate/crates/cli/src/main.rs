use std::path::PathBuf;
use std::process::exit;

use clap::{Parser, Subcommand};
use trajopt_cli::{cmd_run, cmd_suite_seeded, cmd_zeta_scan, Format, RunSpec, ScanSpec};

#[derive(Parser)]
#[command(
    name = "trajopt",
    version,
    about = "Trajectory solver for inequality-constrained problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one registry problem.
    Run {
        #[arg(long)]
        problem: String,
        #[arg(long, default_value_t = 0.98)]
        zeta: f64,
        /// Step length; defaults to the problem's reported step.
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Explicit start, comma-separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Option<Vec<f64>>,
        #[arg(long)]
        trace_out: Option<PathBuf>,
        /// Report destination; stdout when absent.
        #[arg(long)]
        report_out: Option<PathBuf>,
        /// Trace file format.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run every registry problem and write a summary table.
    Suite {
        #[arg(long, default_value_t = 0.98)]
        zeta: f64,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Count iterations to the boundary over a list of zeta values.
    ZetaScan {
        #[arg(long)]
        problem: String,
        /// Comma-separated zeta values.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        zetas: Vec<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Option<Vec<f64>>,
        /// Integrate the unnormalized field.
        #[arg(long)]
        raw_field: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let code = match Cli::parse().command {
        Command::Run {
            problem,
            zeta,
            step,
            max_iters,
            seed,
            x0,
            trace_out,
            report_out,
            format,
        } => cmd_run(&RunSpec {
            problem_name: problem,
            zeta,
            step,
            max_iters,
            seed,
            x0,
            trace_out,
            report_out,
            format,
        }),
        Command::Suite { zeta, out_dir, seed } => cmd_suite_seeded(zeta, seed, &out_dir),
        Command::ZetaScan {
            problem,
            zetas,
            step,
            max_iters,
            seed,
            x0,
            raw_field,
            out,
        } => cmd_zeta_scan(&ScanSpec {
            problem_name: problem,
            zetas,
            step,
            max_iters,
            seed,
            x0,
            raw_field,
            out,
        }),
    };
    exit(code);
}
