//! Monte Carlo model of the dichotomous orientation measurement.
//!
//! Each observer records only the sign of the orientation of their molecule
//! at a chosen time. Joint outcome probabilities follow the Born rule for
//! the time-evolved projectors `Π±(t)`. Sampling uses ChaCha8 (`rand_chacha`)
//! seeded with `seed_from_u64(seed)`. Each measurement setting draws from its
//! own stream (`set_stream(setting_index)`), so tallies depend only on
//! `(inputs, seed)` and never on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angular::{heisenberg, RotorBasis};
use crate::bell::{dichotomy_projectors, DichotomyPair};
use crate::error::{Error, Result};
use crate::linalg::HermitianOperator;
use crate::scan::BipartiteState;

/// Joint outcome order used throughout: `(+,+), (+,-), (-,+), (-,-)`.
pub const OUTCOME_LABELS: [&str; 4] = ["++", "+-", "-+", "--"];

/// Sign of each outcome's contribution to the correlator.
const OUTCOME_PARITY: [f64; 4] = [1.0, -1.0, -1.0, 1.0];

/// Born-rule probabilities below this are treated as round-off.
const PROBABILITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointProbabilities(pub [f64; 4]);

impl JointProbabilities {
    /// `E = p(++) + p(--) - p(+-) - p(-+)`.
    pub fn correlator(&self) -> f64 {
        self.0.iter().zip(OUTCOME_PARITY).map(|(p, s)| p * s).sum()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Counts of the four joint outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeTally {
    pub counts: [u64; 4],
    pub shots: u64,
}

impl OutcomeTally {
    /// Sample mean of the product of the two ±1 outcomes.
    pub fn correlator(&self) -> f64 {
        let signed: f64 = self
            .counts
            .iter()
            .zip(OUTCOME_PARITY)
            .map(|(&n, s)| n as f64 * s)
            .sum();
        signed / self.shots as f64
    }

    /// Standard error of [`correlator`](Self::correlator).
    ///
    /// `E = 2p - 1` with `p` the agreement frequency, so
    /// `Var(E) = 4 p (1-p) / N`. `p` is taken as `(agree + 1) / (N + 2)`,
    /// which keeps the error positive when every shot agrees.
    pub fn std_error(&self) -> f64 {
        let n = self.shots as f64;
        let agree = (self.counts[0] + self.counts[3]) as f64;
        let p = (agree + 1.0) / (n + 2.0);
        (4.0 * p * (1.0 - p) / n).sqrt()
    }
}

/// Result of the four-setting reconstruction of `<B2(t)>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct B2Estimate {
    pub value: f64,
    pub std_error: f64,
    pub shots_per_setting: u64,
    pub seed: u64,
    /// `(t1, t2)` for the settings `(t,t), (t,0), (0,t), (0,0)`.
    pub times: [[f64; 2]; 4],
    pub correlators: [f64; 4],
    pub correlator_errors: [f64; 4],
    pub tallies: [OutcomeTally; 4],
}

/// Projectors of both observers, reusable across settings.
#[derive(Debug, Clone)]
pub struct MeasurementModel {
    basis: RotorBasis,
    projectors: DichotomyPair,
}

impl MeasurementModel {
    pub fn new(basis: RotorBasis) -> Result<Self> {
        Ok(Self {
            basis,
            projectors: dichotomy_projectors(&basis)?,
        })
    }

    fn evolved(&self, t: f64) -> [HermitianOperator; 2] {
        [
            heisenberg(&self.basis, &self.projectors.pi_plus, t),
            heisenberg(&self.basis, &self.projectors.pi_minus, t),
        ]
    }

    pub fn joint_probabilities(
        &self,
        state: &BipartiteState,
        t1: f64,
        t2: f64,
    ) -> Result<JointProbabilities> {
        let d2 = self.basis.bipartite_dim();
        if state.amplitudes().len() != d2 {
            return Err(Error::DimensionMismatch {
                expected: d2,
                found: state.amplitudes().len(),
            });
        }
        let first = self.evolved(t1);
        let second = self.evolved(t2);
        let mut probs = [0.0; 4];
        for (i, p1) in first.iter().enumerate() {
            for (k, p2) in second.iter().enumerate() {
                let p = p1.kron(p2).expectation(state.amplitudes())?;
                debug_assert!(
                    (-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p),
                    "Born probability {p} out of range"
                );
                probs[2 * i + k] = p.clamp(0.0, 1.0);
            }
        }
        Ok(JointProbabilities(probs))
    }

    pub fn sample(
        &self,
        state: &BipartiteState,
        t1: f64,
        t2: f64,
        shots: u64,
        seed: u64,
        stream: u64,
    ) -> Result<OutcomeTally> {
        if shots == 0 {
            return Err(Error::InvalidArgument("need at least one shot".into()));
        }
        let probs = self.joint_probabilities(state, t1, t2)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Ok(sample_from(&probs, shots, &mut rng))
    }
}

/// Draws `shots` i.i.d. outcomes by inverse-CDF lookup.
pub fn sample_from<R: Rng + ?Sized>(
    probs: &JointProbabilities,
    shots: u64,
    rng: &mut R,
) -> OutcomeTally {
    let mut cumulative = [0.0; 4];
    let mut acc = 0.0;
    for (c, p) in cumulative.iter_mut().zip(probs.0) {
        acc += p;
        *c = acc;
    }
    let total = acc;
    let fallback = probs.0.iter().rposition(|&p| p > 0.0).unwrap_or(3);
    let mut counts = [0u64; 4];
    for _ in 0..shots {
        let u = rng.gen::<f64>() * total;
        let idx = cumulative.iter().position(|&c| u < c).unwrap_or(fallback);
        counts[idx] += 1;
    }
    OutcomeTally { counts, shots }
}

/// `p(s1, s2) = <ψ| Π_{s1}(t1) ⊗ Π_{s2}(t2) |ψ>`.
pub fn joint_probabilities(
    basis: &RotorBasis,
    state: &BipartiteState,
    t1: f64,
    t2: f64,
) -> Result<JointProbabilities> {
    MeasurementModel::new(*basis)?.joint_probabilities(state, t1, t2)
}

/// Samples one setting on stream 0 of `seed`.
pub fn sample_outcomes(
    basis: &RotorBasis,
    state: &BipartiteState,
    t1: f64,
    t2: f64,
    shots: u64,
    seed: u64,
) -> Result<OutcomeTally> {
    MeasurementModel::new(*basis)?.sample(state, t1, t2, shots, seed, 0)
}

/// Reconstructs `<B2(t)>` from independently sampled settings
/// `(t,t), (t,0), (0,t), (0,0)`, with errors added in quadrature.
pub fn estimate_b2(
    basis: &RotorBasis,
    state: &BipartiteState,
    t: f64,
    shots_per_setting: u64,
    seed: u64,
) -> Result<B2Estimate> {
    if shots_per_setting < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 shots per setting for an error bar, got {shots_per_setting}"
        )));
    }
    let model = MeasurementModel::new(*basis)?;
    let times = [[t, t], [t, 0.0], [0.0, t], [0.0, 0.0]];
    let signs = [1.0, 1.0, 1.0, -1.0];
    let tallies: Vec<OutcomeTally> = times
        .par_iter()
        .enumerate()
        .map(|(k, &[t1, t2])| model.sample(state, t1, t2, shots_per_setting, seed, k as u64))
        .collect::<Result<_>>()?;
    let tallies: [OutcomeTally; 4] = tallies.try_into().expect("four settings");

    let correlators = tallies.map(|tally| tally.correlator());
    let correlator_errors = tallies.map(|tally| tally.std_error());
    let value = correlators.iter().zip(signs).map(|(e, s)| e * s).sum();
    let std_error = correlator_errors.iter().map(|e| e * e).sum::<f64>().sqrt();
    Ok(B2Estimate {
        value,
        std_error,
        shots_per_setting,
        seed,
        times,
        correlators,
        correlator_errors,
        tallies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{BellKind, CIRELSON_BOUND};
    use crate::scan::optimal_state;
    use num_complex::Complex64;

    fn basis(jmax: u32) -> RotorBasis {
        RotorBasis::with_jmax(jmax).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn plus_plus() -> BipartiteState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        BipartiteState::product(basis(1), &[c(h), c(h)], &[c(h), c(h)]).unwrap()
    }

    #[test]
    fn oriented_product_state_is_deterministic() {
        let p = joint_probabilities(&basis(1), &plus_plus(), 0.0, 0.0).unwrap();
        assert!((p.0[0] - 1.0).abs() < 1e-14);
        assert!(p.0[1..].iter().all(|&x| x.abs() < 1e-14));
    }

    #[test]
    fn symmetric_superposition_is_perfectly_correlated() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = BipartiteState::new(basis(1), vec![c(0.0), c(h), c(h), c(0.0)]).unwrap();
        let p = joint_probabilities(&basis(1), &psi, 0.0, 0.0).unwrap();
        let expected = [0.5, 0.0, 0.0, 0.5];
        for (x, y) in p.0.iter().zip(expected) {
            assert!((x - y).abs() < 1e-14, "{p:?}");
        }
    }

    #[test]
    fn probabilities_sum_to_one() {
        let b = basis(3);
        let psi = optimal_state(&b, BellKind::B2, 0.2).unwrap();
        for (t1, t2) in [(0.0, 0.0), (0.1, 0.7), (0.33, 0.91)] {
            let p = joint_probabilities(&b, &psi, t1, t2).unwrap();
            assert!((p.total() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn deterministic_distribution_sampling() {
        let tally = sample_outcomes(&basis(1), &plus_plus(), 0.0, 0.0, 100, 12345).unwrap();
        assert_eq!(tally.counts, [100, 0, 0, 0]);
        assert!(tally.std_error() > 0.0);
    }

    #[test]
    fn same_seed_same_tally() {
        let b = basis(2);
        let psi = optimal_state(&b, BellKind::B2, 0.1).unwrap();
        let a = sample_outcomes(&b, &psi, 0.1, 0.0, 5000, 99).unwrap();
        let again = sample_outcomes(&b, &psi, 0.1, 0.0, 5000, 99).unwrap();
        let other = sample_outcomes(&b, &psi, 0.1, 0.0, 5000, 100).unwrap();
        assert_eq!(a, again);
        assert_ne!(a, other);
        assert_eq!(a.counts.iter().sum::<u64>(), a.shots);
    }

    #[test]
    fn zero_shots_rejected() {
        assert!(sample_outcomes(&basis(1), &plus_plus(), 0.0, 0.0, 0, 1).is_err());
        assert!(estimate_b2(&basis(1), &plus_plus(), 0.25, 1, 1).is_err());
    }

    #[test]
    fn estimate_tracks_exact_value() {
        let b = basis(1);
        let psi = optimal_state(&b, BellKind::B2, 0.25).unwrap();
        let est = estimate_b2(&b, &psi, 0.25, 100_000, 7).unwrap();
        assert!(
            (est.value - CIRELSON_BOUND).abs() < 5.0 * est.std_error,
            "{est:?}"
        );
        assert!(est.value - 2.0 > 3.0 * est.std_error);
    }

    #[test]
    fn error_scales_with_shots() {
        let b = basis(1);
        let psi = optimal_state(&b, BellKind::B2, 0.25).unwrap();
        let small = estimate_b2(&b, &psi, 0.25, 20_000, 3).unwrap();
        let large = estimate_b2(&b, &psi, 0.25, 40_000, 3).unwrap();
        let ratio = large.std_error / small.std_error;
        assert!(
            (ratio - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.03,
            "{ratio}"
        );
    }
}
