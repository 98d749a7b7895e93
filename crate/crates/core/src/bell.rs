//! Bell operators built from time-delayed orientation measurements.
//!
//! Both operators share the CHSH combination
//! `A⊗B + A⊗B' + A'⊗B - A'⊗B'`, where the primed settings are the
//! measurements at `t = 0` and the unprimed ones are taken at time `t`.
//! `B1` uses the orientation `O(t)` itself; `B2` uses the dichotomized
//! orientation sign `Π(t) = U^H(t) (Π₊ - Π₋) U(t)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angular::{cos_theta_matrix, heisenberg, RotorBasis};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, HermitianOperator};

/// Eigenvalues of `cos θ` with `|λ| <= ZERO_EIGENVALUE_TOL` count as
/// negatively oriented.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-10;

/// Local-realistic bound on the CHSH combination of ±1 outcomes.
pub const LHV_BOUND: f64 = 2.0;

pub const CIRELSON_BOUND: f64 = 2.0 * std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellKind {
    /// Correlations of the orientation `cos θ`.
    B1,
    /// Correlations of the orientation sign.
    B2,
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellKind::B1 => "b1",
            BellKind::B2 => "b2",
        })
    }
}

impl FromStr for BellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "b1" => Ok(BellKind::B1),
            "b2" => Ok(BellKind::B2),
            other => Err(Error::InvalidArgument(format!(
                "unknown Bell operator kind {other:?} (expected b1 or b2)"
            ))),
        }
    }
}

/// Projectors onto positively and negatively oriented subspaces.
#[derive(Debug, Clone)]
pub struct DichotomyPair {
    pub pi_plus: HermitianOperator,
    pub pi_minus: HermitianOperator,
    pub rank_plus: usize,
    pub rank_minus: usize,
}

impl DichotomyPair {
    /// `Π₊ - Π₋`.
    pub fn sign_observable(&self) -> HermitianOperator {
        &self.pi_plus - &self.pi_minus
    }
}

/// Local and quantum bounds for both Bell operators on one basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub lambda_max: f64,
    /// `2 λmax²`
    pub separability_b1: f64,
    /// `2`
    pub separability_b2: f64,
    /// `2√2 λmax²`
    pub cirelson_b1: f64,
    /// `2√2`
    pub cirelson_b2: f64,
}

impl Thresholds {
    pub fn from_lambda_max(lambda_max: f64) -> Self {
        let l2 = lambda_max * lambda_max;
        Self {
            lambda_max,
            separability_b1: LHV_BOUND * l2,
            separability_b2: LHV_BOUND,
            cirelson_b1: CIRELSON_BOUND * l2,
            cirelson_b2: CIRELSON_BOUND,
        }
    }

    pub fn separability(&self, kind: BellKind) -> f64 {
        match kind {
            BellKind::B1 => self.separability_b1,
            BellKind::B2 => self.separability_b2,
        }
    }

    pub fn cirelson(&self, kind: BellKind) -> f64 {
        match kind {
            BellKind::B1 => self.cirelson_b1,
            BellKind::B2 => self.cirelson_b2,
        }
    }
}

/// `A⊗B + A⊗B' + A'⊗B - A'⊗B'`.
pub fn chsh_combination(
    a: &HermitianOperator,
    a_prime: &HermitianOperator,
    b: &HermitianOperator,
    b_prime: &HermitianOperator,
) -> HermitianOperator {
    let sum = &(&a.kron(b) + &a.kron(b_prime)) + &a_prime.kron(b);
    &sum - &a_prime.kron(b_prime)
}

/// `C(t1, t2) = O(t1) ⊗ O(t2)`.
pub fn correlation_operator(basis: &RotorBasis, t1: f64, t2: f64) -> HermitianOperator {
    let cos = cos_theta_matrix(basis);
    heisenberg(basis, &cos, t1).kron(&heisenberg(basis, &cos, t2))
}

/// Four-time `B1`: molecule 1 is measured at `ta` or `tap`, molecule 2 at
/// `tb` or `tbp`; the `(tap, tbp)` term carries the minus sign.
pub fn bell_b1_general(
    basis: &RotorBasis,
    ta: f64,
    tap: f64,
    tb: f64,
    tbp: f64,
) -> HermitianOperator {
    let cos = cos_theta_matrix(basis);
    let o = |t| heisenberg(basis, &cos, t);
    chsh_combination(&o(ta), &o(tap), &o(tb), &o(tbp))
}

/// `B1(t) = C(t,t) + C(t,0) + C(0,t) - C(0,0)`.
pub fn bell_b1(basis: &RotorBasis, t: f64) -> HermitianOperator {
    bell_b1_general(basis, t, 0.0, t, 0.0)
}

/// Spectral projectors of `cos θ` split by the sign of the eigenvalue.
pub fn dichotomy_projectors(basis: &RotorBasis) -> Result<DichotomyPair> {
    let eig = hermitian_eig(&cos_theta_matrix(basis))?;
    let positive = |l: f64| l > ZERO_EIGENVALUE_TOL;
    let rank_plus = eig.eigenvalues.iter().filter(|&&l| positive(l)).count();
    let pi_plus = HermitianOperator::new(eig.spectral_projector(positive))?;
    let pi_minus = HermitianOperator::new(eig.spectral_projector(|l| !positive(l)))?;
    Ok(DichotomyPair {
        pi_plus,
        pi_minus,
        rank_plus,
        rank_minus: basis.dim() - rank_plus,
    })
}

/// `Π(t) = U^H(t) (Π₊ - Π₋) U(t)`.
pub fn pi_observable(basis: &RotorBasis, t: f64) -> Result<HermitianOperator> {
    let sign = dichotomy_projectors(basis)?.sign_observable();
    Ok(heisenberg(basis, &sign, t))
}

pub fn bell_b2_general(
    basis: &RotorBasis,
    ta: f64,
    tap: f64,
    tb: f64,
    tbp: f64,
) -> Result<HermitianOperator> {
    Ok(BellSystem::new(*basis, BellKind::B2)?.operator_general(ta, tap, tb, tbp))
}

/// `B2(t) = Π(t,t) + Π(t,0) + Π(0,t) - Π(0,0)`.
pub fn bell_b2(basis: &RotorBasis, t: f64) -> Result<HermitianOperator> {
    bell_b2_general(basis, t, 0.0, t, 0.0)
}

/// Largest `cos θ` eigenvalue and the derived bounds.
pub fn thresholds(basis: &RotorBasis) -> Result<Thresholds> {
    let eig = hermitian_eig(&cos_theta_matrix(basis))?;
    Ok(Thresholds::from_lambda_max(eig.max_eigenvalue()))
}

/// `ab + ab' + a'b - a'b'` for one deterministic assignment.
pub fn chsh_value(a: i8, a_prime: i8, b: i8, b_prime: i8) -> i32 {
    let (a, ap, b, bp) = (a as i32, a_prime as i32, b as i32, b_prime as i32);
    a * b + a * bp + ap * b - ap * bp
}

/// Maximum `|CHSH|` over all 16 deterministic local strategies.
pub fn lhv_bruteforce_bound() -> f64 {
    let signs = [-1i8, 1];
    let mut best = 0;
    for &a in &signs {
        for &ap in &signs {
            for &b in &signs {
                for &bp in &signs {
                    best = best.max(chsh_value(a, ap, b, bp).abs());
                }
            }
        }
    }
    best as f64
}

/// Precomputed single-molecule observable and bounds for one basis and
/// operator kind. Building a Bell operator at a new time costs only the
/// phase conjugations and Kronecker products.
#[derive(Debug, Clone)]
pub struct BellSystem {
    basis: RotorBasis,
    kind: BellKind,
    local: HermitianOperator,
    thresholds: Thresholds,
}

impl BellSystem {
    pub fn new(basis: RotorBasis, kind: BellKind) -> Result<Self> {
        let cos = cos_theta_matrix(&basis);
        let eig = hermitian_eig(&cos)?;
        let thresholds = Thresholds::from_lambda_max(eig.max_eigenvalue());
        let local = match kind {
            BellKind::B1 => cos,
            BellKind::B2 => dichotomy_projectors(&basis)?.sign_observable(),
        };
        Ok(Self {
            basis,
            kind,
            local,
            thresholds,
        })
    }

    pub fn basis(&self) -> &RotorBasis {
        &self.basis
    }

    pub fn kind(&self) -> BellKind {
        self.kind
    }

    pub fn thresholds(&self) -> &Thresholds {
        &self.thresholds
    }

    pub fn separability(&self) -> f64 {
        self.thresholds.separability(self.kind)
    }

    pub fn cirelson(&self) -> f64 {
        self.thresholds.cirelson(self.kind)
    }

    /// Single-molecule observable at time `t`.
    pub fn local_at(&self, t: f64) -> HermitianOperator {
        heisenberg(&self.basis, &self.local, t)
    }

    pub fn operator(&self, t: f64) -> HermitianOperator {
        let now = self.local_at(t);
        chsh_combination(&now, &self.local, &now, &self.local)
    }

    pub fn operator_general(&self, ta: f64, tap: f64, tb: f64, tbp: f64) -> HermitianOperator {
        chsh_combination(
            &self.local_at(ta),
            &self.local_at(tap),
            &self.local_at(tb),
            &self.local_at(tbp),
        )
    }

    /// Largest eigenvalue of the Bell operator at `t`.
    pub fn max_eigenvalue(&self, t: f64) -> Result<f64> {
        Ok(hermitian_eig(&self.operator(t))?.max_eigenvalue())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ComplexMatrix, SpectralResult};
    use num_complex::Complex64;

    fn basis(jmax: u32) -> RotorBasis {
        RotorBasis::with_jmax(jmax).unwrap()
    }

    fn spectrum(op: &HermitianOperator) -> SpectralResult {
        hermitian_eig(op).unwrap()
    }

    #[test]
    fn correlation_at_origin_jmax1() {
        let c = correlation_operator(&basis(1), 0.0, 0.0);
        let ev = spectrum(&c).eigenvalues;
        let third = 1.0 / 3.0;
        let expected = [-third, -third, third, third];
        for (x, y) in ev.iter().zip(expected) {
            assert!((x - y).abs() < 1e-14, "{ev:?}");
        }
    }

    #[test]
    fn equal_time_correlation_spectrum_is_constant() {
        let b = basis(3);
        let e0 = spectrum(&correlation_operator(&b, 0.0, 0.0)).eigenvalues;
        let et = spectrum(&correlation_operator(&b, 0.41, 0.41)).eigenvalues;
        for (x, y) in e0.iter().zip(&et) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn b1_general_at_zero_is_twice_correlation() {
        let b = basis(2);
        let lhs = bell_b1_general(&b, 0.0, 0.0, 0.0, 0.0);
        let rhs = correlation_operator(&b, 0.0, 0.0).scale(2.0);
        assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-15);
    }

    #[test]
    fn b1_specializes_general() {
        let b = basis(3);
        for t in [0.0, 0.13, 0.5, 0.87] {
            assert_eq!(bell_b1(&b, t), bell_b1_general(&b, t, 0.0, t, 0.0));
        }
    }

    #[test]
    fn b1_jmax1_examples() {
        let b = basis(1);
        assert!((spectrum(&bell_b1(&b, 0.0)).max_eigenvalue() - 2.0 / 3.0).abs() < 1e-14);
        let peak = 2.0 * 2f64.sqrt() / 3.0;
        assert!((spectrum(&bell_b1(&b, 0.25)).max_eigenvalue() - peak).abs() < 1e-14);
        assert!((spectrum(&bell_b1(&b, 0.5)).max_eigenvalue() - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn projectors_jmax1() {
        let p = dichotomy_projectors(&basis(1)).unwrap();
        let half = Complex64::new(0.5, 0.0);
        let plus = ComplexMatrix::from_fn(2, |_, _| half);
        let minus = ComplexMatrix::from_fn(2, |r, c| if r == c { half } else { -half });
        assert!(p.pi_plus.matrix().max_abs_diff(&plus) < 1e-15);
        assert!(p.pi_minus.matrix().max_abs_diff(&minus) < 1e-15);
    }

    #[test]
    fn projectors_jmax2_zero_mode_is_negative() {
        let p = dichotomy_projectors(&basis(2)).unwrap();
        assert_eq!((p.rank_plus, p.rank_minus), (1, 2));
        let sum = &p.pi_plus + &p.pi_minus;
        assert!(sum.matrix().max_abs_diff(&ComplexMatrix::identity(3)) < 1e-10);
        let tr_plus = p.pi_plus.matrix().trace().re;
        assert!((tr_plus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projector_algebra() {
        for jmax in 1..=6 {
            let p = dichotomy_projectors(&basis(jmax)).unwrap();
            let (pp, pm) = (p.pi_plus.matrix(), p.pi_minus.matrix());
            assert!((pp * pp).max_abs_diff(pp) < 1e-10);
            assert!((pm * pm).max_abs_diff(pm) < 1e-10);
            assert!((pp * pm).max_abs_diff(&ComplexMatrix::zeros(pp.dim())) < 1e-10);
        }
    }

    #[test]
    fn pi_at_zero_jmax1_is_sigma_x() {
        let pi = pi_observable(&basis(1), 0.0).unwrap();
        let sx = ComplexMatrix::from_real_fn(2, |r, c| if r != c { 1.0 } else { 0.0 });
        assert!(pi.matrix().max_abs_diff(&sx) < 1e-15);
    }

    #[test]
    fn pi_squares_to_identity() {
        for jmax in [1, 2, 5] {
            let b = basis(jmax);
            let p = dichotomy_projectors(&b).unwrap();
            for t in [0.0, 0.173, 0.61] {
                let pi = pi_observable(&b, t).unwrap();
                let sq = pi.matrix() * pi.matrix();
                assert!(sq.max_abs_diff(&ComplexMatrix::identity(b.dim())) < 1e-10);
                let ev = spectrum(&pi).eigenvalues;
                let neg = ev.iter().filter(|&&x| (x + 1.0).abs() < 1e-10).count();
                let pos = ev.iter().filter(|&&x| (x - 1.0).abs() < 1e-10).count();
                assert_eq!((pos, neg), (p.rank_plus, p.rank_minus));
            }
        }
    }

    #[test]
    fn b2_examples() {
        let b1 = basis(1);
        let top = spectrum(&bell_b2(&b1, 0.25).unwrap()).max_eigenvalue();
        assert!((top - CIRELSON_BOUND).abs() < 1e-13);
        for jmax in [1, 2, 3, 5] {
            let top = spectrum(&bell_b2(&basis(jmax), 0.0).unwrap()).max_eigenvalue();
            assert!((top - 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn b2_is_rescaled_b1_for_two_levels() {
        let b = basis(1);
        for t in [0.0, 0.1, 0.25, 0.66] {
            let b1 = bell_b1(&b, t).scale(3.0);
            let b2 = bell_b2(&b, t).unwrap();
            assert!(b1.matrix().max_abs_diff(b2.matrix()) < 1e-12);
        }
    }

    #[test]
    fn thresholds_examples() {
        let t1 = thresholds(&basis(1)).unwrap();
        assert!((t1.lambda_max - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((t1.separability_b1 - 2.0 / 3.0).abs() < 1e-15);
        assert!((t1.cirelson_b1 - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-15);
        assert_eq!(t1.separability_b2, 2.0);
        assert_eq!(t1.cirelson_b2, CIRELSON_BOUND);

        let t2 = thresholds(&basis(2)).unwrap();
        assert!((t2.separability_b1 - 1.2).abs() < 1e-14);

        assert!(thresholds(&basis(50)).unwrap().lambda_max > 0.99);
    }

    #[test]
    fn lhv_enumeration() {
        assert_eq!(lhv_bruteforce_bound(), 2.0);
        assert_eq!(chsh_value(1, 1, 1, 1), 2);
        assert_eq!(chsh_value(1, -1, 1, -1).abs(), 2);
        assert_eq!(chsh_value(1, 1, 1, -1), 2);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("b1".parse::<BellKind>().unwrap(), BellKind::B1);
        assert_eq!("B2".parse::<BellKind>().unwrap(), BellKind::B2);
        assert!("b3".parse::<BellKind>().is_err());
    }
}
