//! Bell-type tests with the orientation of two freely rotating linear
//! molecules.
//!
//! Each molecule is a rigid rotor truncated to `|j, m>` with `j <= jmax` and
//! fixed `m`. Observers measure the orientation `cos θ` (or only its sign) at
//! two different times; the time delay plays the role of a polarizer angle.
//! The crate builds the resulting Bell operators, scans their largest
//! eigenvalue over one rotational period, evaluates witnesses on given
//! states and simulates the sign-counting protocol.
//!
//! ```
//! use rotorbell::{bell::BellSystem, BellKind, RotorBasis};
//!
//! let basis = RotorBasis::with_jmax(1)?;
//! let system = BellSystem::new(basis, BellKind::B1)?;
//! let peak = system.max_eigenvalue(0.25)?;
//! assert!((peak - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-12);
//! # Ok::<(), rotorbell::Error>(())
//! ```

pub mod angular;
pub mod bell;
mod error;
pub mod linalg;
pub mod quadrature;
pub mod scan;
pub mod sim;
pub mod validation;

pub use angular::{DiagonalUnitary, RotorBasis};
pub use bell::{BellKind, DichotomyPair, Thresholds};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianOperator, SpectralResult};
pub use scan::{BipartiteState, PeakSummary, Verdict, ViolationCurve, WitnessReport};
pub use sim::{B2Estimate, OutcomeTally};

pub use num_complex::Complex64;
