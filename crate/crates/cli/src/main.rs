//! `hkernel`: evaluations, scans, verification suites and oracle comparisons.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hilbert_kernel::Error;

use commands::{DeltaRatioArgs, DimZeroArgs, EvalArgs, ScanArgs, VerifyArgs};
use config::Overrides;

#[derive(Debug, Parser)]
#[command(name = "hkernel", version, about = "First Fourier coefficient of the Petersson kernel over ℚ and real quadratic fields")]
struct Cli {
    #[command(flatten)]
    opts: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the normalized identity at one point
    Eval(EvalArgs),
    /// Evaluate a (k, δ, t₀) grid; one CSV row per point
    Scan(ScanArgs),
    /// Run verification suites; exit 1 on any failure
    Verify(VerifyArgs),
    /// Compare against independent level-one ground truth
    Oracle {
        #[command(subcommand)]
        mode: OracleMode,
    },
}

#[derive(Debug, Subcommand)]
enum OracleMode {
    /// |A| must vanish at weights without cusp forms
    DimZero(DimZeroArgs),
    /// Kernel ratio A(s₁)/A(s₂) against Λ^{(ℓ)}(Δ, s₁)/Λ^{(ℓ)}(Δ, s₂)
    DeltaRatio(DeltaRatioArgs),
}

#[derive(Debug)]
pub enum CliError {
    /// invalid input: exit 2
    Usage(String),
    /// numerical failure: exit 3
    Numeric(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedField(_)
            | Error::NarrowClassNumber(_)
            | Error::ZeroElement
            | Error::NotCoprime
            | Error::NotTotallyPositive
            | Error::NotInInverseDifferent
            | Error::InvalidEvalPoint(_)
            | Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

/// Text to emit and whether every check passed.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let cfg = cli.opts.resolve()?;
    if let Some(n) = cfg.threads {
        // fails only if a pool already exists, which keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let path = cfg.output.clone();
    let out = match cli.command {
        Command::Eval(a) => commands::eval(&cfg, &a)?,
        Command::Scan(a) => commands::scan(&cfg, &a)?,
        Command::Verify(a) => commands::verify(&cfg, &a)?,
        Command::Oracle { mode: OracleMode::DimZero(a) } => commands::dim_zero(&cfg, &a)?,
        Command::Oracle { mode: OracleMode::DeltaRatio(a) } => commands::delta_ratio(cfg.clone(), &a)?,
    };
    let written = match &path {
        Some(path) => std::fs::write(path, &out.text),
        None => std::io::stdout().lock().write_all(out.text.as_bytes()),
    };
    written.map_err(|e| CliError::Numeric(format!("cannot write output: {e}")))?;
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(o) if o.pass => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(m)) => {
            eprintln!("numeric failure: {m}");
            ExitCode::from(3)
        }
    }
}
