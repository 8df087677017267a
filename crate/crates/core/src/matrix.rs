//! Dense complex matrices and the Hermitian eigendecomposition used by every
//! entropy evaluation.

use std::ops::Deref;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A dense complex matrix with finite entries.
///
/// Storage is delegated to [`nalgebra::DMatrix`]; constructors take entries in
/// row-major order and reject NaN or infinite values.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Builds a `rows x cols` matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape {
                rows,
                cols,
                found: entries.len(),
            });
        }
        Self::from_dmatrix(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite(i, j));
                }
            }
        }
        Ok(ComplexMatrix(m))
    }

    /// Wraps a matrix produced by arithmetic on already finite inputs.
    pub(crate) fn from_dmatrix_unchecked(m: DMatrix<Complex64>) -> Self {
        ComplexMatrix(m)
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(rows, cols))
    }

    /// Diagonal matrix with real entries.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        ComplexMatrix(m)
    }

    /// Outer product `|v><v|` of a (not necessarily normalized) vector.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        ComplexMatrix(DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()))
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let (r, c) = self.0.shape();
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn is_square(&self) -> bool {
        self.0.nrows() == self.0.ncols()
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }

    /// Largest entrywise modulus of `M - M^dagger`.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.0.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }
}

impl Deref for ComplexMatrix {
    type Target = DMatrix<Complex64>;

    fn deref(&self) -> &DMatrix<Complex64> {
        &self.0
    }
}

pub(crate) fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `(M + M^dagger) / 2`.
pub(crate) fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Kronecker product `a ⊗ b`; the first factor is the most significant index.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// `V diag(λ) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors.0;
        let n = self.eigenvalues.len();
        let mut scaled = v.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            for i in 0..n {
                scaled[(i, j)] *= lambda;
            }
        }
        ComplexMatrix(&scaled * v.adjoint())
    }
}

/// Decomposes a Hermitian matrix. The input is symmetrized as `(M + M^dagger)/2`
/// first, so rounding-level asymmetry is tolerated.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    let h = hermitian_part(&m.0);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors =
        DMatrix::from_fn(m.nrows(), m.nrows(), |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: ComplexMatrix(eigenvectors),
    })
}

/// Eigenvalues (unordered) of a Hermitian matrix. Small blocks use closed
/// forms; this is the hot path of the discord objective.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
            let mean = 0.5 * (a + d);
            let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean + half_gap, mean - half_gap]
        }
        _ => hermitian_part(m)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor_product(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn basis_index_ordering() {
        let a = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let b = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        let ab = tensor_product(&a, &b);
        assert_eq!(ab, ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn rejects_bad_shape_and_nan() {
        assert!(matches!(
            ComplexMatrix::from_row_major(2, 2, &[c(1.0, 0.0)]),
            Err(Error::Shape { .. })
        ));
        assert!(matches!(
            ComplexMatrix::from_row_major(1, 1, &[c(f64::NAN, 0.0)]),
            Err(Error::NonFinite(0, 0))
        ));
    }

    #[test]
    fn row_major_round_trip() {
        let entries: Vec<_> = (0..6).map(|k| c(k as f64, -(k as f64))).collect();
        let m = ComplexMatrix::from_row_major(2, 3, &entries).unwrap();
        assert_eq!(m[(0, 2)], c(2.0, -2.0));
        assert_eq!(m[(1, 0)], c(3.0, -3.0));
        assert_eq!(m.to_row_major(), entries);
    }

    #[test]
    fn diagonal_spectrum_sorted_descending() {
        let m = ComplexMatrix::from_real_diagonal(&[0.25, 0.75]);
        let s = hermitian_eig(&m).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(s.eigenvalues[1], 0.25, epsilon = 1e-15);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = ComplexMatrix::from_row_major(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let s = hermitian_eig(&x).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], -1.0, epsilon = 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // |+> up to phase: |<+|v0>| = 1
        let overlap = s.eigenvectors[(0, 0)] * h + s.eigenvectors[(1, 0)] * h;
        assert_abs_diff_eq!(overlap.norm(), 1.0, epsilon = 1e-12);
        let overlap = s.eigenvectors[(0, 1)] * h - s.eigenvectors[(1, 1)] * h;
        assert_abs_diff_eq!(overlap.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn non_square_rejected() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotSquare(2, 3))));
    }

    #[test]
    fn closed_form_two_by_two_matches_general_solver() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(0.3, 0.0), c(0.1, -0.2), c(0.1, 0.2), c(0.7, 0.0)]);
        let mut fast = hermitian_eigenvalues(&m);
        let mut slow: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        fast.sort_by(f64::total_cmp);
        slow.sort_by(f64::total_cmp);
        for (a, b) in fast.iter().zip(&slow) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }
}
