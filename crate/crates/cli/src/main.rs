//! `rotorbell` command-line interface.
//!
//! Exit codes: 0 success, 1 failed validation or I/O error, 2 invalid
//! arguments, 3 eigensolver non-convergence, 4 malformed state file,
//! 5 state dimension mismatch.

mod commands;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rotorbell::BellKind;

#[derive(Debug, Parser)]
#[command(
    name = "rotorbell",
    version,
    about = "Orientation Bell tests for two free rigid rotors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues of cos θ in the truncated basis (CSV).
    Spectrum(SpectrumArgs),
    /// Largest Bell-operator eigenvalue over one rotational period (CSV).
    Scan(ScanArgs),
    /// Evaluate a Bell witness on a state (JSON).
    Witness(WitnessArgs),
    /// Simulate the sign-counting protocol for B2 (JSON).
    Simulate(SimulateArgs),
    /// Run the built-in reference checks.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    B1,
    B2,
}

impl From<KindArg> for BellKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::B1 => BellKind::B1,
            KindArg::B2 => BellKind::B2,
        }
    }
}

#[derive(Debug, Args)]
struct BasisArgs {
    /// Angular momentum cutoff.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=64))]
    jmax: u32,
    /// Fixed magnetic quantum number, |m| <= jmax.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    m: i32,
}

#[derive(Debug, Args)]
struct OutArg {
    /// Write data here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    basis: BasisArgs,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, value_enum, default_value_t = KindArg::B1)]
    kind: KindArg,
    #[command(flatten)]
    basis: BasisArgs,
    /// Number of uniformly spaced times in [0, 1).
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(2..=1_000_000))]
    grid: u64,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    #[arg(long, value_enum, default_value_t = KindArg::B1)]
    kind: KindArg,
    /// Angular momentum cutoff; taken from the state file when omitted.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    jmax: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    m: Option<i32>,
    /// Measurement time in rotational periods.
    #[arg(long)]
    time: f64,
    /// State file path, or `optimal` for the top eigenvector at `--time`.
    #[arg(long)]
    state: String,
    /// Attach the maximally violating state to the report.
    #[arg(long)]
    with_optimal: bool,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    basis: BasisArgs,
    #[arg(long)]
    time: f64,
    /// Shots per measurement setting.
    #[arg(long, default_value_t = 100_000, value_parser = parse_shots)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// State file path, or `optimal` for the top B2 eigenvector at `--time`.
    #[arg(long, default_value = "optimal")]
    state: String,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Largest j covered by the quadrature check.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=64))]
    jmax: u32,
    /// Number of random Hermitian matrices in the eigensolver check.
    #[arg(long, default_value_t = 500)]
    cases: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Perturb one closed-form matrix element by this amount.
    #[arg(long, hide = true)]
    inject_fault: Option<f64>,
}

fn parse_shots(s: &str) -> Result<u64, String> {
    let n: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if n < 2 {
        return Err(format!(
            "need at least 2 shots per setting for an error bar, got {n}"
        ));
    }
    Ok(n)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Scan(a) => commands::scan(a),
        Command::Witness(a) => commands::witness(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Validate(a) => commands::validate(a),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
