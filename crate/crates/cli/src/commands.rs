use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use rotorbell::angular::cos_theta_matrix;
use rotorbell::bell::BellSystem;
use rotorbell::linalg::hermitian_eig;
use rotorbell::scan::{
    optimal_state, refine_curve_peak, scan_system, witness_evaluate, witness_evaluate_with_optimal,
    StateFile,
};
use rotorbell::sim::estimate_b2;
use rotorbell::validation::{run_checks, ValidationOptions};
use rotorbell::{BellKind, BipartiteState, Error, RotorBasis};
use thiserror::Error as ThisError;

use crate::format::{fixed12, sig12};
use crate::{BasisArgs, ScanArgs, SimulateArgs, SpectrumArgs, ValidateArgs, WitnessArgs};

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    NonConvergence(Error),
    #[error("malformed state file: {0}")]
    MalformedState(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Core(_) => 1,
            CliError::Usage(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::MalformedState(_) => 4,
            CliError::DimensionMismatch(_) => 5,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_non_convergence() {
            return CliError::NonConvergence(e);
        }
        match e {
            Error::InvalidBasis { .. } | Error::InvalidArgument(_) => {
                CliError::Usage(e.to_string())
            }
            Error::DimensionMismatch { .. } => CliError::DimensionMismatch(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

type CliResult = Result<ExitCode, CliError>;

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn basis_from(args: &BasisArgs) -> Result<RotorBasis, CliError> {
    RotorBasis::new(args.jmax, args.m)
        .map_err(|e| CliError::Usage(format!("{e}\n\nFor more information, try '--help'.")))
}

pub fn spectrum(args: SpectrumArgs) -> CliResult {
    let basis = basis_from(&args.basis)?;
    let eig = hermitian_eig(&cos_theta_matrix(&basis))?;
    let mut out = open_output(args.out.out.as_deref())?;
    writeln!(out, "eigenvalue")?;
    for &l in &eig.eigenvalues {
        writeln!(out, "{}", fixed12(l))?;
    }
    out.flush()?;
    eprintln!(
        "jmax={} m={} dim={} lambda_max={}",
        basis.jmax(),
        basis.m(),
        basis.dim(),
        fixed12(eig.max_eigenvalue())
    );
    Ok(ExitCode::SUCCESS)
}

pub fn scan(args: ScanArgs) -> CliResult {
    let basis = basis_from(&args.basis)?;
    let kind: BellKind = args.kind.into();
    let system = BellSystem::new(basis, kind)?;
    let curve = scan_system(&system, args.grid as usize)?;

    let mut out = open_output(args.out.out.as_deref())?;
    writeln!(out, "t,max_eigenvalue,threshold,violates")?;
    for s in &curve.samples {
        writeln!(
            out,
            "{},{},{},{}",
            sig12(s.t),
            sig12(s.max_eigenvalue),
            sig12(s.threshold),
            u8::from(s.violates)
        )?;
    }
    out.flush()?;

    let peak = refine_curve_peak(&system, &curve)?;
    eprintln!(
        "kind={kind} jmax={} m={} global_max={:.9} t_star={:.9} threshold={:.9} relative_violation={:.6}",
        basis.jmax(),
        basis.m(),
        peak.value,
        peak.t_star,
        peak.threshold,
        peak.relative_violation
    );
    Ok(ExitCode::SUCCESS)
}

fn read_state(path: &str) -> Result<BipartiteState, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::MalformedState(format!("{path}: {e}")))?;
    let file: StateFile = serde_json::from_str(&text)
        .map_err(|e| CliError::MalformedState(format!("{path}: {e}")))?;
    BipartiteState::from_state_file(file).map_err(|e| match e {
        Error::DimensionMismatch { .. } => CliError::DimensionMismatch(format!("{path}: {e}")),
        other => CliError::MalformedState(format!("{path}: {other}")),
    })
}

/// Loads `--state` and checks it against any basis given on the command line.
fn resolve_state(
    spec: &str,
    jmax: Option<u32>,
    m: Option<i32>,
    optimal: impl FnOnce(RotorBasis) -> Result<BipartiteState, Error>,
) -> Result<(RotorBasis, BipartiteState), CliError> {
    if spec == "optimal" {
        let basis = RotorBasis::new(jmax.unwrap_or(1), m.unwrap_or(0))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        return Ok((basis, optimal(basis)?));
    }
    let state = read_state(spec)?;
    let found = *state.basis();
    let wanted_jmax = jmax.unwrap_or(found.jmax());
    let wanted_m = m.unwrap_or(found.m());
    if (wanted_jmax, wanted_m) != (found.jmax(), found.m()) {
        return Err(CliError::DimensionMismatch(format!(
            "state file has jmax={} m={}, command line asks for jmax={wanted_jmax} m={wanted_m}",
            found.jmax(),
            found.m()
        )));
    }
    Ok((found, state))
}

pub fn witness(args: WitnessArgs) -> CliResult {
    let kind: BellKind = args.kind.into();
    let t = args.time;
    let (basis, state) = resolve_state(&args.state, args.jmax, args.m, |b| {
        optimal_state(&b, kind, t)
    })?;
    let report = if args.with_optimal {
        witness_evaluate_with_optimal(&basis, kind, &state, t)?
    } else {
        witness_evaluate(&basis, kind, &state, t)?
    };
    let mut out = open_output(args.out.out.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &report).map_err(io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

pub fn simulate(args: SimulateArgs) -> CliResult {
    let t = args.time;
    let jmax = Some(args.basis.jmax);
    let m = Some(args.basis.m);
    let (basis, state) =
        resolve_state(&args.state, jmax, m, |b| optimal_state(&b, BellKind::B2, t))?;
    let estimate = estimate_b2(&basis, &state, t, args.shots, args.seed)?;
    let mut out = open_output(args.out.out.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &estimate).map_err(io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    eprintln!(
        "B2 estimate {:.6} ± {:.6} ({:+.2} sigma from the local bound 2)",
        estimate.value,
        estimate.std_error,
        (estimate.value - 2.0) / estimate.std_error
    );
    Ok(ExitCode::SUCCESS)
}

pub fn validate(args: ValidateArgs) -> CliResult {
    let opts = ValidationOptions {
        oracle_jmax: args.jmax,
        reconstruction_cases: args.cases,
        seed: args.seed,
        perturb_element: args.inject_fault,
        ..Default::default()
    };
    let checks = run_checks(&opts)?;
    let mut all = true;
    let mut out = io::stdout().lock();
    for c in &checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        all &= c.passed;
        let value = if c.name == "lhv_bound" {
            format!("{:.6}", c.value)
        } else {
            format!("{:.3e}", c.value)
        };
        writeln!(out, "{}: {value} {verdict}", c.name)?;
    }
    Ok(if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_class() {
        let nc = Error::NonConvergence {
            sweeps: 100,
            off_norm: 1.0,
        };
        assert_eq!(CliError::from(nc.clone()).exit_code(), 3);
        let wrapped = Error::ScanPoint {
            t: 0.5,
            source: Box::new(nc),
        };
        assert_eq!(CliError::from(wrapped).exit_code(), 3);
        let dm = Error::DimensionMismatch {
            expected: 4,
            found: 9,
        };
        assert_eq!(CliError::from(dm).exit_code(), 5);
        assert_eq!(
            CliError::from(Error::InvalidBasis { jmax: 0, m: 0 }).exit_code(),
            2
        );
        assert_eq!(CliError::MalformedState("x".into()).exit_code(), 4);
    }
}
