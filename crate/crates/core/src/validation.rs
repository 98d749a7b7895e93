//! Self-checks against independent references: quadrature matrix elements,
//! brute-force local strategies and eigensolver reconstruction.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::angular::{cos_theta_element_oracle, cos_theta_matrix, RotorBasis};
use crate::bell::{lhv_bruteforce_bound, LHV_BOUND};
use crate::error::Result;
use crate::linalg::{hermitian_eig, ComplexMatrix, HermitianOperator};

pub const ORACLE_TOL: f64 = 1e-10;
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
pub const ORTHONORMALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct ValidationOptions {
    /// Oracle battery covers `j, j' <= oracle_jmax`.
    pub oracle_jmax: u32,
    /// Oracle battery covers `|m| <= oracle_m_max`.
    pub oracle_m_max: u32,
    pub reconstruction_cases: usize,
    pub max_dim: usize,
    pub seed: u64,
    /// Adds this offset to `<1,0|cos θ|0,0>` before comparing (negative control).
    pub perturb_element: Option<f64>,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            oracle_jmax: 8,
            oracle_m_max: 2,
            reconstruction_cases: 500,
            max_dim: 40,
            seed: 2024,
            perturb_element: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Largest `|closed form - quadrature|` over the oracle battery.
pub fn oracle_max_deviation(opts: &ValidationOptions) -> f64 {
    let mut worst = 0.0_f64;
    let m_max = opts.oracle_m_max.min(opts.oracle_jmax) as i32;
    for m in -m_max..=m_max {
        let Ok(basis) = RotorBasis::new(opts.oracle_jmax, m) else {
            continue;
        };
        let mut built = cos_theta_matrix(&basis).into_matrix();
        if m == 0 {
            if let Some(delta) = opts.perturb_element {
                built[(0, 1)] += Complex64::new(delta, 0.0);
            }
        }
        for a in 0..basis.dim() {
            for b in 0..basis.dim() {
                let oracle = cos_theta_element_oracle(basis.j_of(b), basis.j_of(a), m);
                worst = worst.max((built[(a, b)] - Complex64::new(oracle, 0.0)).norm());
            }
        }
    }
    worst
}

/// Dense random Hermitian matrix with entries uniform in `[-1, 1]`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    let mut m = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        m[(r, r)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for c in (r + 1)..dim {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(r, c)] = z;
            m[(c, r)] = z.conj();
        }
    }
    HermitianOperator::new(m).expect("Hermitian by construction")
}

/// `(max relative reconstruction error, max orthonormality error)` over a
/// battery of random Hermitian matrices with dimensions cycling `1..=max_dim`.
pub fn reconstruction_battery(opts: &ValidationOptions) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst_rec = 0.0_f64;
    let mut worst_orth = 0.0_f64;
    for case in 0..opts.reconstruction_cases {
        let dim = 1 + case % opts.max_dim.max(1);
        let a = random_hermitian(dim, &mut rng);
        let eig = hermitian_eig(&a)?;
        let scale = a.matrix().frobenius_norm().max(f64::MIN_POSITIVE);
        let rec = (&eig.reconstruct() - a.matrix()).frobenius_norm() / scale;
        let v = &eig.eigenvectors;
        let gram = &v.adjoint() * v;
        worst_rec = worst_rec.max(rec);
        worst_orth = worst_orth.max(gram.max_abs_diff(&ComplexMatrix::identity(dim)));
    }
    Ok((worst_rec, worst_orth))
}

/// Runs every check. Never short-circuits on a failing check.
pub fn run_checks(opts: &ValidationOptions) -> Result<Vec<CheckResult>> {
    let oracle = oracle_max_deviation(opts);
    let lhv = lhv_bruteforce_bound();
    let (rec, orth) = reconstruction_battery(opts)?;
    Ok(vec![
        CheckResult {
            name: "oracle_elements",
            value: oracle,
            tolerance: ORACLE_TOL,
            passed: oracle <= ORACLE_TOL,
        },
        CheckResult {
            name: "lhv_bound",
            value: lhv,
            tolerance: 0.0,
            passed: lhv == LHV_BOUND,
        },
        CheckResult {
            name: "eig_reconstruction",
            value: rec,
            tolerance: RECONSTRUCTION_TOL,
            passed: rec <= RECONSTRUCTION_TOL,
        },
        CheckResult {
            name: "eig_orthonormality",
            value: orth,
            tolerance: ORTHONORMALITY_TOL,
            passed: orth <= ORTHONORMALITY_TOL,
        },
    ])
}
