//! Time scans of the Bell operators: violation curves, peak refinement,
//! witness evaluation and maximally violating states.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angular::RotorBasis;
use crate::bell::{BellKind, BellSystem};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, vector_norm, NORM_TOL};

/// Default number of grid points over one rotational period.
pub const DEFAULT_GRID: usize = 1000;

/// A sample violates only if it exceeds the threshold by more than this.
pub const VIOLATION_MARGIN: f64 = 1e-12;

/// Golden-section search stops once the bracket is narrower than this.
pub const REFINE_TOL: f64 = 1e-10;

/// Number of grid-local maxima refined when locating the global peak.
const PEAKS_TO_REFINE: usize = 4;

/// Normalized two-molecule pure state, molecule-1-major over `|j1> ⊗ |j2>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "StateFile", try_from = "StateFile")]
pub struct BipartiteState {
    basis: RotorBasis,
    amplitudes: Vec<Complex64>,
}

/// On-disk state layout: `{"jmax": .., "m": .., "amplitudes": [[re, im], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub jmax: u32,
    pub m: i32,
    pub amplitudes: Vec<[f64; 2]>,
}

/// States with a norm below this cannot be normalized.
pub const MIN_STATE_NORM: f64 = 1e-6;

impl BipartiteState {
    /// Wraps amplitudes that are already normalized.
    pub fn new(basis: RotorBasis, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_len(&basis, amplitudes.len())?;
        let norm = vector_norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { basis, amplitudes })
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalized(basis: RotorBasis, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_len(&basis, amplitudes.len())?;
        let norm = vector_norm(&amplitudes);
        if !norm.is_finite() || norm < MIN_STATE_NORM {
            return Err(Error::NotNormalized { norm });
        }
        let amplitudes = amplitudes.into_iter().map(|z| z / norm).collect();
        Ok(Self { basis, amplitudes })
    }

    /// `|j1> ⊗ |j2>` by basis index.
    pub fn product_basis(basis: RotorBasis, k1: usize, k2: usize) -> Result<Self> {
        let d = basis.dim();
        if k1 >= d || k2 >= d {
            return Err(Error::InvalidArgument(format!(
                "basis index ({k1}, {k2}) out of range for dimension {d}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
        amps[k1 * d + k2] = Complex64::new(1.0, 0.0);
        Ok(Self {
            basis,
            amplitudes: amps,
        })
    }

    /// `|a> ⊗ |b>` for single-molecule vectors.
    pub fn product(basis: RotorBasis, a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        let d = basis.dim();
        for v in [a, b] {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: v.len(),
                });
            }
        }
        let amps = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| x * y))
            .collect();
        Self::normalized(basis, amps)
    }

    pub fn basis(&self) -> &RotorBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        vector_norm(&self.amplitudes)
    }

    /// Rotates the global phase so the first non-negligible amplitude is
    /// real and positive.
    pub fn with_canonical_phase(mut self) -> Self {
        if let Some(first) = self.amplitudes.iter().find(|z| z.norm() > 1e-12) {
            let phase = first.conj() / first.norm();
            for z in &mut self.amplitudes {
                *z *= phase;
            }
        }
        self
    }

    pub fn to_state_file(&self) -> StateFile {
        StateFile::from(self.clone())
    }

    /// Reads the state-file layout, normalizing the amplitudes.
    pub fn from_state_file(file: StateFile) -> Result<Self> {
        let basis = RotorBasis::new(file.jmax, file.m)?;
        let amps = file
            .amplitudes
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        Self::normalized(basis, amps)
    }
}

fn check_len(basis: &RotorBasis, found: usize) -> Result<()> {
    let expected = basis.bipartite_dim();
    if found != expected {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

impl From<BipartiteState> for StateFile {
    fn from(s: BipartiteState) -> Self {
        StateFile {
            jmax: s.basis.jmax(),
            m: s.basis.m(),
            amplitudes: s.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<StateFile> for BipartiteState {
    type Error = Error;

    fn try_from(file: StateFile) -> Result<Self> {
        BipartiteState::from_state_file(file)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub t: f64,
    pub max_eigenvalue: f64,
    pub threshold: f64,
    pub violates: bool,
}

impl CurveSample {
    pub fn new(t: f64, max_eigenvalue: f64, threshold: f64) -> Self {
        Self {
            t,
            max_eigenvalue,
            threshold,
            violates: max_eigenvalue > threshold + VIOLATION_MARGIN,
        }
    }
}

/// `t ↦` largest Bell-operator eigenvalue over one period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationCurve {
    pub kind: BellKind,
    pub jmax: u32,
    pub m: i32,
    pub samples: Vec<CurveSample>,
}

impl ViolationCurve {
    /// Sample with the largest eigenvalue (first one on ties).
    pub fn best_sample(&self) -> Option<&CurveSample> {
        self.samples.iter().reduce(|best, s| {
            if s.max_eigenvalue > best.max_eigenvalue {
                s
            } else {
                best
            }
        })
    }

    /// Indices of cyclic grid-local maxima, best first.
    fn local_maxima(&self) -> Vec<usize> {
        let n = self.samples.len();
        let v = |i: usize| self.samples[i].max_eigenvalue;
        let mut idx: Vec<usize> = (0..n)
            .filter(|&i| v(i) >= v((i + n - 1) % n) && v(i) >= v((i + 1) % n))
            .collect();
        idx.sort_by(|&a, &b| v(b).total_cmp(&v(a)));
        idx
    }
}

/// Fraction of samples flagged as violating.
pub fn violation_fraction(curve: &ViolationCurve) -> f64 {
    if curve.samples.is_empty() {
        return 0.0;
    }
    let hits = curve.samples.iter().filter(|s| s.violates).count();
    hits as f64 / curve.samples.len() as f64
}

/// Uniform scan `t_k = k / grid_points`, `k = 0..grid_points`.
pub fn scan_curve(
    basis: &RotorBasis,
    kind: BellKind,
    grid_points: usize,
) -> Result<ViolationCurve> {
    let system = BellSystem::new(*basis, kind)?;
    scan_system(&system, grid_points)
}

pub fn scan_system(system: &BellSystem, grid_points: usize) -> Result<ViolationCurve> {
    if grid_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least 2 points, got {grid_points}"
        )));
    }
    let threshold = system.separability();
    let samples = (0..grid_points)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 / grid_points as f64;
            let value = eval(system, t)?;
            Ok(CurveSample::new(t, value, threshold))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ViolationCurve {
        kind: system.kind(),
        jmax: system.basis().jmax(),
        m: system.basis().m(),
        samples,
    })
}

fn eval(system: &BellSystem, t: f64) -> Result<f64> {
    system.max_eigenvalue(t).map_err(|e| Error::ScanPoint {
        t,
        source: Box::new(e),
    })
}

/// Golden-section maximization of the top eigenvalue on
/// `[t_seed - window, t_seed + window]`. Never returns less than the value
/// at the seed.
pub fn refine_max(
    basis: &RotorBasis,
    kind: BellKind,
    t_seed: f64,
    window: f64,
) -> Result<(f64, f64)> {
    let system = BellSystem::new(*basis, kind)?;
    refine_system(&system, t_seed, window)
}

pub fn refine_system(system: &BellSystem, t_seed: f64, window: f64) -> Result<(f64, f64)> {
    if window.is_nan() || window <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "refinement window must be positive, got {window}"
        )));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (t_seed - window, t_seed + window);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = eval(system, x1)?;
    let mut f2 = eval(system, x2)?;
    while hi - lo >= REFINE_TOL {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval(system, x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval(system, x2)?;
        }
    }
    let mid = 0.5 * (lo + hi);
    let candidates = [
        (t_seed, eval(system, t_seed)?),
        (mid, eval(system, mid)?),
        (x1, f1),
        (x2, f2),
    ];
    let (t, v) = candidates
        .into_iter()
        .reduce(|a, b| if b.1 > a.1 { b } else { a })
        .expect("non-empty");
    Ok((t.rem_euclid(1.0), v))
}

/// Global maximum of a Bell curve after refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakSummary {
    pub t_star: f64,
    pub value: f64,
    pub threshold: f64,
    pub relative_violation: f64,
}

/// Refines the best grid-local maxima of `curve` with window `2 / grid`.
pub fn refine_curve_peak(system: &BellSystem, curve: &ViolationCurve) -> Result<PeakSummary> {
    let window = 2.0 / curve.samples.len() as f64;
    let mut best: Option<(f64, f64)> = None;
    for i in curve.local_maxima().into_iter().take(PEAKS_TO_REFINE) {
        let (t, v) = refine_system(system, curve.samples[i].t, window)?;
        if best.is_none_or(|(_, bv)| v > bv) {
            best = Some((t, v));
        }
    }
    let (t_star, value) = best.ok_or_else(|| Error::InvalidArgument("empty curve".into()))?;
    let threshold = system.separability();
    Ok(PeakSummary {
        t_star,
        value,
        threshold,
        relative_violation: value / threshold - 1.0,
    })
}

/// Scan plus refinement.
pub fn global_max(basis: &RotorBasis, kind: BellKind, grid_points: usize) -> Result<PeakSummary> {
    let system = BellSystem::new(*basis, kind)?;
    let curve = scan_system(&system, grid_points)?;
    refine_curve_peak(&system, &curve)
}

/// `max_t <B(t)> / threshold - 1` on the default grid.
pub fn relative_violation(basis: &RotorBasis, kind: BellKind) -> Result<f64> {
    Ok(global_max(basis, kind, DEFAULT_GRID)?.relative_violation)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ViolatesLocality,
    NoViolation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub kind: BellKind,
    pub t: f64,
    pub value: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub optimal_state: Option<BipartiteState>,
}

fn check_state_basis(basis: &RotorBasis, state: &BipartiteState) -> Result<()> {
    if state.amplitudes().len() != basis.bipartite_dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.bipartite_dim(),
            found: state.amplitudes().len(),
        });
    }
    if state.basis() != basis {
        return Err(Error::InvalidArgument(format!(
            "state basis (jmax={}, m={}) differs from (jmax={}, m={})",
            state.basis().jmax(),
            state.basis().m(),
            basis.jmax(),
            basis.m()
        )));
    }
    Ok(())
}

/// `<ψ|B(t)|ψ>` against the separability threshold of `kind`.
pub fn witness_evaluate(
    basis: &RotorBasis,
    kind: BellKind,
    state: &BipartiteState,
    t: f64,
) -> Result<WitnessReport> {
    check_state_basis(basis, state)?;
    let system = BellSystem::new(*basis, kind)?;
    let value = system.operator(t).expectation(state.amplitudes())?;
    let threshold = system.separability();
    let verdict = if value > threshold + VIOLATION_MARGIN {
        Verdict::ViolatesLocality
    } else {
        Verdict::NoViolation
    };
    Ok(WitnessReport {
        kind,
        t,
        value,
        threshold,
        verdict,
        optimal_state: None,
    })
}

/// [`witness_evaluate`] with the maximally violating state at `t` attached.
pub fn witness_evaluate_with_optimal(
    basis: &RotorBasis,
    kind: BellKind,
    state: &BipartiteState,
    t: f64,
) -> Result<WitnessReport> {
    let mut report = witness_evaluate(basis, kind, state, t)?;
    report.optimal_state = Some(optimal_state(basis, kind, t)?);
    Ok(report)
}

/// Top eigenvector of the Bell operator at `t` in canonical phase.
pub fn optimal_state(basis: &RotorBasis, kind: BellKind, t: f64) -> Result<BipartiteState> {
    let system = BellSystem::new(*basis, kind)?;
    let eig = hermitian_eig(&system.operator(t))?;
    Ok(BipartiteState::normalized(*basis, eig.top_eigenvector())?.with_canonical_phase())
}
