use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `max |A - A^H|` accepted when wrapping a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries. Fails on non-square input or
    /// non-finite entries.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    pub fn from_real_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(dim, |r, c| Complex64::new(f(r, c), 0.0))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest element-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff: dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest element of `|A - A^H|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "apply: dimension mismatch");
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// Kronecker product with the left factor as the major index:
    /// row `r = r1 * dim(B) + r2`.
    pub fn kron(&self, other: &Self) -> Self {
        let (na, nb) = (self.dim, other.dim);
        let n = na * nb;
        let mut out = Self::zeros(n);
        for r1 in 0..na {
            for c1 in 0..na {
                let a = self[(r1, c1)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for r2 in 0..nb {
                    let row = (r1 * nb + r2) * n + c1 * nb;
                    let src = &other.data[r2 * nb..(r2 + 1) * nb];
                    for (dst, b) in out.data[row..row + nb].iter_mut().zip(src) {
                        *dst = a * b;
                    }
                }
            }
        }
        out
    }
}

/// Free-function form of [`ComplexMatrix::kron`].
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add: dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub: dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "mul: dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let src = &rhs.data[k * n..(k + 1) * n];
                for (dst, b) in out.data[r * n..(r + 1) * n].iter_mut().zip(src) {
                    *dst += a * b;
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for row in self.data.chunks_exact(self.dim.max(1)) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>10.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A [`ComplexMatrix`] known to be Hermitian to within [`HERMITIAN_TOL`].
#[derive(Clone, PartialEq)]
pub struct HermitianOperator {
    inner: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(inner: ComplexMatrix) -> Result<Self> {
        if inner
            .as_slice()
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let deviation = inner.hermiticity_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { inner })
    }

    /// Wraps a matrix that is Hermitian by construction.
    pub(crate) fn new_unchecked(inner: ComplexMatrix) -> Self {
        debug_assert!(inner.hermiticity_deviation() <= HERMITIAN_TOL);
        Self { inner }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: ComplexMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.inner
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            inner: self.inner.kron(&other.inner),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            inner: self.inner.scale(factor),
        }
    }

    /// `<v|A|v>` for a normalized vector `v`.
    pub fn expectation(&self, v: &[Complex64]) -> Result<f64> {
        expectation(self, v)
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;

    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;

    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl Index<(usize, usize)> for HermitianOperator {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.inner[idx]
    }
}

impl fmt::Debug for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.inner)
    }
}

/// Tolerance on `| ||v|| - 1 |` for vectors passed to [`expectation`].
pub const NORM_TOL: f64 = 1e-10;

/// `<v|A|v>`. The vector must be normalized; the imaginary residue of the
/// result (zero for exact Hermitian input) is dropped.
pub fn expectation(a: &HermitianOperator, v: &[Complex64]) -> Result<f64> {
    if v.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: v.len(),
        });
    }
    let norm = vector_norm(v);
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let av = a.matrix().apply(v);
    let value: Complex64 = v.iter().zip(&av).map(|(x, y)| x.conj() * y).sum();
    debug_assert!(
        value.im.abs() <= 1e-10 * a.matrix().frobenius_norm().max(1.0),
        "expectation has imaginary residue {}",
        value.im
    );
    Ok(value.re)
}

pub fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real_fn(2, |r, c| if r != c { 1.0 } else { 0.0 })
    }

    #[test]
    fn identity_kron_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_index_convention() {
        let sx = sigma_x();
        let k = sx.kron(&sx);
        assert_eq!(k[(0, 3)], c(1.0, 0.0));
        assert_eq!(k[(3, 0)], c(1.0, 0.0));
        assert_eq!(k[(1, 2)], c(1.0, 0.0));
        assert_eq!(k[(0, 1)], c(0.0, 0.0));

        // molecule-1-major: diag(1,2) ⊗ I puts the 2s in the lower block
        let a = ComplexMatrix::from_real_fn(2, |r, c| if r == c { (r + 1) as f64 } else { 0.0 });
        let k = a.kron(&ComplexMatrix::identity(2));
        assert_eq!(k[(1, 1)], c(1.0, 0.0));
        assert_eq!(k[(2, 2)], c(2.0, 0.0));
    }

    #[test]
    fn hermitian_rejects_asymmetric() {
        let m = ComplexMatrix::from_row_major(2, vec![c(0., 0.), c(1., 1.), c(1., 1.), c(0., 0.)])
            .unwrap();
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn from_row_major_checks_shape_and_finiteness() {
        assert!(matches!(
            ComplexMatrix::from_row_major(2, vec![c(0., 0.); 3]),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 3
            })
        ));
        assert_eq!(
            ComplexMatrix::from_row_major(1, vec![c(f64::NAN, 0.)]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn expectation_examples() {
        let s = 1.0 / 3f64.sqrt();
        let cos = HermitianOperator::new(sigma_x().scale(s)).unwrap();
        assert_eq!(cos.expectation(&[c(1., 0.), c(0., 0.)]).unwrap(), 0.0);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [c(h, 0.), c(h, 0.)];
        assert!((cos.expectation(&plus).unwrap() - s).abs() < 1e-15);

        let id = HermitianOperator::identity(2);
        let v = [c(0.6, 0.0), c(0.0, 0.8)];
        assert!((id.expectation(&v).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_errors() {
        let id = HermitianOperator::identity(2);
        assert!(matches!(
            id.expectation(&[c(1., 0.)]),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        ));
        assert!(matches!(
            id.expectation(&[c(1., 0.), c(1., 0.)]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn mixed_product_property_small() {
        let a = ComplexMatrix::from_fn(2, |r, k| c((r + 2 * k) as f64, (r as f64) - 0.5));
        let b = ComplexMatrix::from_fn(2, |r, k| c(1.0 - k as f64, (r * k) as f64));
        let cc = ComplexMatrix::from_fn(2, |r, k| c(0.3 * r as f64, 0.1 + k as f64));
        let d = ComplexMatrix::from_fn(2, |r, k| c((r + k) as f64, -1.0));
        let lhs = &a.kron(&b) * &cc.kron(&d);
        let rhs = (&a * &cc).kron(&(&b * &d));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }
}
