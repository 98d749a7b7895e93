//! Dense complex matrix kernel: storage, Kronecker products, expectation
//! values and a Hermitian eigensolver.

mod eigen;
mod matrix;

pub use eigen::{hermitian_eig, SpectralResult, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::{
    expectation, kron, vector_norm, ComplexMatrix, HermitianOperator, HERMITIAN_TOL, NORM_TOL,
};
