//! `locc`: build, simulate and certify LOCC discrimination of generalized
//! Pauli ensembles. Reports go to stdout as JSON, diagnostics to stderr.

mod commands;
mod examples;
mod report;
mod seed;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit status for usage and input errors.
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NO_PROTOCOL: u8 = 3;
pub const EXIT_INCONCLUSIVE: u8 = 4;
/// A verification sweep or example reproduction did not pass.
pub const EXIT_FAILED: u8 = 1;

#[derive(Parser)]
#[command(name = "locc", version, about = "LOCC discrimination protocols and indistinguishability certificates")]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone, Copy)]
pub struct OutputArgs {
    /// Compact JSON (the default)
    #[arg(long, global = true, conflicts_with = "pretty")]
    pub json: bool,

    /// Indented JSON
    #[arg(long, global = true)]
    pub pretty: bool,

    /// Include elapsed milliseconds in the report (breaks byte-for-byte reproducibility)
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand)]
pub enum Command {
    /// Print X, Z, the requested U_{m,n} and optionally one H_alpha
    Paulis {
        #[arg(long)]
        d: usize,
        /// Semicolon-separated "m,n" pairs; all d^2 labels when omitted
        #[arg(long)]
        labels: Option<String>,
        /// Also print H_alpha and its label action
        #[arg(long)]
        alpha: Option<usize>,
    },
    /// Search, build and simulate a protocol for a set of maximally entangled states
    Distinguish {
        #[arg(long)]
        d: usize,
        /// Semicolon-separated "m,n" pairs, e.g. "0,1;0,2;1,0"
        #[arg(long)]
        labels: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Certify LOCC-indistinguishability of the Pauli orbit of a seed state
    Certify {
        #[arg(long)]
        d: usize,
        /// phi-plus | pure:c0,c1,... | werner:p | file:PATH
        #[arg(long)]
        seed: String,
        /// Restrict the orbit to these labels (certification then refuses)
        #[arg(long)]
        labels: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run identity checks or a theorem sweep
    Verify {
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum)]
        which: Which,
        /// Subset size for the theorem sweep
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Reproduce the reference scenarios and print a pass/fail table
    Examples {
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Identities,
    Theorem,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match commands::run(&cli.command) {
        Ok((mut report, code)) => {
            let elapsed = start.elapsed().as_millis();
            if cli.output.timing {
                report.elapsed_ms = Some(elapsed);
            }
            let mut stdout = std::io::stdout().lock();
            if writeln!(stdout, "{}", report.render(cli.output.pretty)).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_FAILED);
            }
            eprintln!("{}: {} ms", report.command, elapsed);
            ExitCode::from(code)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
