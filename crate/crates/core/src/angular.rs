//! Truncated rigid-rotor basis, the `cos θ` orientation operator and its
//! free-rotation Heisenberg-picture dynamics.
//!
//! Units: time in rotational periods, energy in rotational constants, so the
//! free propagator is `exp(-iπ j(j+1) t)` and every observable is periodic
//! in `t` with period 1.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator};

pub use crate::quadrature::cos_theta_element_oracle;

/// Single-molecule basis `{|j, m> : |m| <= j <= jmax}` at fixed `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RotorBasis {
    jmax: u32,
    m: i32,
}

impl RotorBasis {
    pub fn new(jmax: u32, m: i32) -> Result<Self> {
        if jmax < 1 || m.unsigned_abs() > jmax {
            return Err(Error::InvalidBasis { jmax, m });
        }
        Ok(Self { jmax, m })
    }

    /// Basis with `m = 0`.
    pub fn with_jmax(jmax: u32) -> Result<Self> {
        Self::new(jmax, 0)
    }

    pub fn jmax(&self) -> u32 {
        self.jmax
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// Number of basis states, `jmax - |m| + 1`.
    pub fn dim(&self) -> usize {
        (self.jmax - self.m.unsigned_abs() + 1) as usize
    }

    /// Dimension of the two-molecule space.
    pub fn bipartite_dim(&self) -> usize {
        self.dim() * self.dim()
    }

    /// Angular momentum `j` of the `k`-th basis state.
    pub fn j_of(&self, k: usize) -> u32 {
        self.m.unsigned_abs() + k as u32
    }

    pub fn j_values(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.dim()).map(|k| self.j_of(k))
    }

    /// Rotational energy `j(j+1)` of the `k`-th basis state.
    pub fn energy(&self, k: usize) -> u64 {
        let j = self.j_of(k) as u64;
        j * (j + 1)
    }
}

/// Diagonal unitary stored as its phases.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalUnitary {
    phases: Vec<Complex64>,
}

impl DiagonalUnitary {
    pub fn phases(&self) -> &[Complex64] {
        &self.phases
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |r, c| {
            if r == c {
                self.phases[r]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// `exp(iπ x)` with `x` reduced modulo 2 first.
fn unit_phase(x: f64) -> Complex64 {
    let (s, c) = (PI * x.rem_euclid(2.0)).sin_cos();
    Complex64::new(c, s)
}

/// Closed-form `<j+1, m| cos θ |j, m>`.
pub fn cos_theta_coupling(j: u32, m: i32) -> f64 {
    let j = j as f64;
    let m2 = (m as f64).powi(2);
    (((j + 1.0).powi(2) - m2) / ((2.0 * j + 1.0) * (2.0 * j + 3.0))).sqrt()
}

/// Real symmetric tridiagonal `cos θ` in the truncated basis.
pub fn cos_theta_matrix(basis: &RotorBasis) -> HermitianOperator {
    let d = basis.dim();
    let mut a = ComplexMatrix::zeros(d);
    for k in 0..d.saturating_sub(1) {
        let c = Complex64::new(cos_theta_coupling(basis.j_of(k), basis.m()), 0.0);
        a[(k, k + 1)] = c;
        a[(k + 1, k)] = c;
    }
    HermitianOperator::new_unchecked(a)
}

/// Free propagator `U(t) = exp(-iπ H t)` with `H |j> = j(j+1) |j>`.
pub fn evolution_phases(basis: &RotorBasis, t: f64) -> DiagonalUnitary {
    let phases = (0..basis.dim())
        .map(|k| unit_phase(-(basis.energy(k) as f64) * t))
        .collect();
    DiagonalUnitary { phases }
}

/// `U^H(t) A U(t)` for a single-molecule operator `A`.
///
/// Element `(a, b)` picks up `exp(iπ [E_a - E_b] t)`.
pub fn heisenberg(basis: &RotorBasis, op: &HermitianOperator, t: f64) -> HermitianOperator {
    let d = basis.dim();
    assert_eq!(op.dim(), d, "heisenberg: operator does not match basis");
    let m = op.matrix();
    let out = ComplexMatrix::from_fn(d, |a, b| {
        let gap = basis.energy(a) as f64 - basis.energy(b) as f64;
        if gap == 0.0 {
            m[(a, b)]
        } else {
            m[(a, b)] * unit_phase(gap * t)
        }
    });
    HermitianOperator::new_unchecked(out)
}

/// Heisenberg-picture orientation `O(t) = U^H(t) cos θ U(t)`.
pub fn orientation_heisenberg(basis: &RotorBasis, t: f64) -> HermitianOperator {
    heisenberg(basis, &cos_theta_matrix(basis), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eig;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_validation() {
        assert!(RotorBasis::new(0, 0).is_err());
        assert!(RotorBasis::new(2, 3).is_err());
        assert!(RotorBasis::new(2, -3).is_err());
        let b = RotorBasis::new(5, -2).unwrap();
        assert_eq!(b.dim(), 4);
        assert_eq!(b.j_values().collect::<Vec<_>>(), vec![2, 3, 4, 5]);
        assert_eq!(b.energy(0), 6);
    }

    #[test]
    fn cos_theta_jmax1() {
        let a = cos_theta_matrix(&RotorBasis::with_jmax(1).unwrap());
        let s = 1.0 / 3f64.sqrt();
        assert_eq!(a[(0, 0)], c(0.0, 0.0));
        assert!((a[(0, 1)].re - s).abs() < 1e-15);
        assert!((a[(1, 0)].re - s).abs() < 1e-15);
    }

    #[test]
    fn cos_theta_jmax2_couplings() {
        let a = cos_theta_matrix(&RotorBasis::with_jmax(2).unwrap());
        assert!((a[(0, 1)].re - 0.577350269189626).abs() < 1e-12);
        assert!((a[(1, 2)].re - 0.516397779494322).abs() < 1e-12);
        assert_eq!(a[(0, 2)], c(0.0, 0.0));
    }

    #[test]
    fn cos_theta_single_state_basis() {
        let a = cos_theta_matrix(&RotorBasis::new(1, 1).unwrap());
        assert_eq!(a.dim(), 1);
        assert_eq!(a[(0, 0)], c(0.0, 0.0));
    }

    #[test]
    fn phases_examples() {
        let b1 = RotorBasis::with_jmax(1).unwrap();
        assert_eq!(evolution_phases(&b1, 0.0).phases(), &[c(1., 0.), c(1., 0.)]);

        let p = evolution_phases(&b1, 0.25);
        assert!((p.phases()[0] - c(1., 0.)).norm() < 1e-15);
        assert!((p.phases()[1] - c(0., -1.)).norm() < 1e-15);

        let b5 = RotorBasis::with_jmax(5).unwrap();
        for z in evolution_phases(&b5, 1.0).phases() {
            assert!((z - c(1., 0.)).norm() < 1e-12);
        }
        for z in evolution_phases(&b5, 0.3717).phases() {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orientation_examples() {
        let b = RotorBasis::with_jmax(1).unwrap();
        assert_eq!(orientation_heisenberg(&b, 0.0), cos_theta_matrix(&b));

        let o = orientation_heisenberg(&b, 0.25);
        let s = 1.0 / 3f64.sqrt();
        // (0,1) picks up exp(iπ (E_0 - E_1) t) = exp(-iπ/2)
        assert!((o[(0, 1)] - c(0.0, -s)).norm() < 1e-15);
        assert!((o[(1, 0)] - c(0.0, s)).norm() < 1e-15);
        assert_eq!(o[(0, 0)], c(0.0, 0.0));
    }

    #[test]
    fn orientation_matches_explicit_conjugation() {
        let b = RotorBasis::new(4, 1).unwrap();
        let t = 0.1234;
        let u = evolution_phases(&b, t).to_matrix();
        let explicit = &(&u.adjoint() * cos_theta_matrix(&b).matrix()) * &u;
        assert!(
            orientation_heisenberg(&b, t)
                .matrix()
                .max_abs_diff(&explicit)
                < 1e-14
        );
    }

    #[test]
    fn spectrum_is_time_independent() {
        let b = RotorBasis::with_jmax(4).unwrap();
        let e0 = hermitian_eig(&cos_theta_matrix(&b)).unwrap();
        let et = hermitian_eig(&orientation_heisenberg(&b, 0.377)).unwrap();
        for (x, y) in e0.eigenvalues.iter().zip(&et.eigenvalues) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}
