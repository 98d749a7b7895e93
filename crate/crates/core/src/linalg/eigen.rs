//! Cyclic complex Jacobi eigensolver for dense Hermitian matrices.
//!
//! Each rotation acts on one `(p, q)` pair. The off-diagonal element is first
//! made real by a diagonal phase on column `q`, then annihilated by a real
//! plane rotation. Pairs are visited in a fixed row-cyclic order, so the
//! output is a deterministic function of the input.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, HermitianOperator};
use crate::error::{Error, Result};

/// Maximum number of full cyclic sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Convergence target for the off-diagonal Frobenius norm, relative to `||A||_F`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl SpectralResult {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("empty spectrum")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        let n = self.dim();
        (0..n).map(|r| self.eigenvectors[(r, k)]).collect()
    }

    /// Top eigenvector (paired with the largest eigenvalue).
    pub fn top_eigenvector(&self) -> Vec<Complex64> {
        self.eigenvector(self.dim() - 1)
    }

    /// `V diag(lambda) V^H`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, |r, c| {
            (0..n)
                .map(|k| v[(r, k)] * self.eigenvalues[k] * v[(c, k)].conj())
                .sum()
        })
    }

    /// Sum of `|v><v|` over the eigenvectors selected by `keep(eigenvalue)`.
    pub fn spectral_projector(&self, mut keep: impl FnMut(f64) -> bool) -> ComplexMatrix {
        let n = self.dim();
        let cols: Vec<usize> = (0..n).filter(|&k| keep(self.eigenvalues[k])).collect();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, |r, c| {
            cols.iter().map(|&k| v[(r, k)] * v[(c, k)].conj()).sum()
        })
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Full spectral decomposition of a Hermitian operator.
pub fn hermitian_eig(op: &HermitianOperator) -> Result<SpectralResult> {
    let mut a = op.matrix().clone();
    let n = a.dim();
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm();
    let target = OFF_DIAGONAL_TOL * scale;

    // Pre-symmetrize the diagonal; tolerance-level asymmetry is averaged out.
    for r in 0..n {
        a[(r, r)] = Complex64::new(a[(r, r)].re, 0.0);
        for c in (r + 1)..n {
            let avg = (a[(r, c)] + a[(c, r)].conj()) * 0.5;
            a[(r, c)] = avg;
            a[(c, r)] = avg.conj();
        }
    }

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NonConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable sort: ties keep their original index order
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));

    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |r, k| v[(r, order[k])]);
    Ok(SpectralResult {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // skip elements already negligible against both diagonal entries
    if g < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }

    let phase = apq / g;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cos = 1.0 / (1.0 + t * t).sqrt();
    let sin = t * cos;

    // G restricted to (p, q): [[c, s], [-s conj(e), c conj(e)]]
    let gpp = Complex64::new(cos, 0.0);
    let gpq = Complex64::new(sin, 0.0);
    let gqp = -phase.conj() * sin;
    let gqq = phase.conj() * cos;

    let n = a.dim();
    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    // A <- G^H A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * g, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * g, 0.0);

    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}
