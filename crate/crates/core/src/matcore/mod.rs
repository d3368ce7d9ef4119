//! Small dense linear algebra over real square matrices and column vectors.
//!
//! Sizes are small (the field theory lives in four dimensions), so everything
//! is stored row-major in a flat `Vec<f64>` and the algorithms are the plain
//! textbook ones: LU with partial pivoting for `det`/`inverse`/`solve`, and a
//! characteristic-polynomial eigensolver for the pencil `(R, g)`.
//!
//! Internally indices are 0-based; documentation that refers to the physical
//! axes uses 1-based labels `x₁..x₄`.

mod eigen;
mod svd;

pub use eigen::{
    characteristic_polynomial, generalized_eigenvalues, generalized_eigenvalues_with,
    matrix_eigenvalues, polynomial_roots, EigenOptions, EigenSet,
};
pub use svd::{singular_decomposition, SingularDecomposition};

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

/// Relative factor for the singularity test `|det| < SINGULAR_DET_FACTOR·(max row norm)^n`.
pub const SINGULAR_DET_FACTOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,
    #[error("expected {expected} entries, got {got}")]
    WrongEntryCount { expected: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("singular matrix (det = {det:e})")]
    Singular { det: f64 },
    #[error("matrix not symmetric: max |a - aᵀ| = {violation:e}")]
    NotSymmetric { violation: f64 },
    #[error("non-real eigenvalues: imaginary part {imag:e} exceeds tolerance {tol:e}")]
    NonRealSpectrum { imag: f64, tol: f64 },
    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
}

/// Real `n × n` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

/// Real column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnVector {
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::EmptyMatrix);
        }
        if data.len() != n * n {
            return Err(MatrixError::WrongEntryCount { expected: n * n, got: data.len() });
        }
        if let Some(k) = data.iter().position(|v| !v.is_finite()) {
            return Err(MatrixError::NonFinite { row: k / n, col: k % n });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self { n: N, data }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    /// Outer product `a bᵀ`.
    pub fn outer(a: &ColumnVector, b: &ColumnVector) -> Self {
        assert_eq!(a.dim(), b.dim());
        Self::from_fn(a.dim(), |i, j| a[i] * b[j])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> ColumnVector {
        ColumnVector::from((0..self.n).map(|i| self[(i, j)]).collect::<Vec<_>>())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dim(other.n)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mat_vec(&self, v: &ColumnVector) -> Result<ColumnVector, MatrixError> {
        self.check_dim(v.dim())?;
        let n = self.n;
        Ok(ColumnVector::from(
            (0..n).map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum::<f64>()).collect::<Vec<_>>(),
        ))
    }

    /// Bilinear form `ãMb`.
    pub fn bilinear(&self, a: &ColumnVector, b: &ColumnVector) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += a[i] * self.data[i * n + j] * b[j];
            }
        }
        s
    }

    /// Induced ∞-norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.n).map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_row_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// Largest `|a_ij − a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                m = m.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        m
    }

    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.n, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    pub fn lu(&self) -> Lu {
        Lu::new(self)
    }

    /// Determinant via LU with partial pivoting.
    pub fn det(&self) -> f64 {
        self.lu().det()
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        let lu = self.lu();
        lu.check_regular(self)?;
        let n = self.n;
        let mut inv = Self::zeros(n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = lu.solve_raw(&e);
            for i in 0..n {
                inv.data[i * n + j] = col[i];
            }
        }
        Ok(inv)
    }

    pub fn linear_solve(&self, b: &ColumnVector) -> Result<ColumnVector, MatrixError> {
        self.check_dim(b.dim())?;
        let lu = self.lu();
        lu.check_regular(self)?;
        Ok(ColumnVector::from(lu.solve_raw(b.as_slice())))
    }

    /// Solves `self · X = B` column by column with one factorization.
    pub fn solve_matrix(&self, b: &Self) -> Result<Self, MatrixError> {
        self.check_dim(b.n)?;
        let lu = self.lu();
        lu.check_regular(self)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for j in 0..n {
            let col: Vec<f64> = (0..n).map(|i| b[(i, j)]).collect();
            let x = lu.solve_raw(&col);
            for i in 0..n {
                out.data[i * n + j] = x[i];
            }
        }
        Ok(out)
    }

    fn check_dim(&self, other: usize) -> Result<(), MatrixError> {
        if self.n != other {
            Err(MatrixError::DimensionMismatch { left: self.n, right: other })
        } else {
            Ok(())
        }
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

macro_rules! elementwise {
    ($tr:ident, $f:ident, $op:tt, $tra:ident, $fa:ident) => {
        impl $tr<&SquareMatrix> for &SquareMatrix {
            type Output = SquareMatrix;
            fn $f(self, rhs: &SquareMatrix) -> SquareMatrix {
                assert_eq!(self.n, rhs.n, "dimension mismatch");
                SquareMatrix {
                    n: self.n,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a $op b).collect(),
                }
            }
        }
        impl $tr for SquareMatrix {
            type Output = SquareMatrix;
            fn $f(self, rhs: SquareMatrix) -> SquareMatrix {
                &self $op &rhs
            }
        }
        impl $tra<&SquareMatrix> for SquareMatrix {
            fn $fa(&mut self, rhs: &SquareMatrix) {
                assert_eq!(self.n, rhs.n, "dimension mismatch");
                for (a, b) in self.data.iter_mut().zip(&rhs.data) {
                    *a = *a $op *b;
                }
            }
        }
    };
}
elementwise!(Add, add, +, AddAssign, add_assign);
elementwise!(Sub, sub, -, SubAssign, sub_assign);

/// Matrix product; panics on dimension mismatch (use [`SquareMatrix::mat_mul`] for the checked form).
impl Mul<&SquareMatrix> for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.mat_mul(rhs).expect("dimension mismatch")
    }
}

impl Mul<&ColumnVector> for &SquareMatrix {
    type Output = ColumnVector;
    fn mul(self, rhs: &ColumnVector) -> ColumnVector {
        self.mat_vec(rhs).expect("dimension mismatch")
    }
}

impl Mul<f64> for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, s: f64) -> SquareMatrix {
        self.scale(s)
    }
}

impl Neg for &SquareMatrix {
    type Output = SquareMatrix;
    fn neg(self) -> SquareMatrix {
        self.scale(-1.0)
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:>14.6e}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// LU factorization `PA = LU` with partial pivoting, packed in one matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    fn new(a: &SquareMatrix) -> Self {
        let n = a.n;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[i * n + k].abs().total_cmp(&lu[j * n + k].abs()))
                .unwrap_or(k);
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[k * n + k];
            if pivot == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                for j in k + 1..n {
                    lu[i * n + j] -= factor * lu[k * n + j];
                }
            }
        }
        Self { n, lu, perm, sign }
    }

    pub fn det(&self) -> f64 {
        (0..self.n).map(|i| self.lu[i * self.n + i]).product::<f64>() * self.sign
    }

    fn check_regular(&self, a: &SquareMatrix) -> Result<(), MatrixError> {
        let det = self.det();
        let scale = a.max_row_norm().powi(a.n as i32);
        if !det.is_finite() || det.abs() < SINGULAR_DET_FACTOR * scale || scale == 0.0 {
            return Err(MatrixError::Singular { det });
        }
        Ok(())
    }

    fn solve_raw(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}

impl ColumnVector {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "vector dimension must be at least 1");
        Self { data: vec![0.0; n] }
    }

    pub fn new(data: Vec<f64>) -> Result<Self, MatrixError> {
        if data.is_empty() {
            return Err(MatrixError::EmptyMatrix);
        }
        if let Some(k) = data.iter().position(|v| !v.is_finite()) {
            return Err(MatrixError::NonFinite { row: k, col: 0 });
        }
        Ok(Self { data })
    }

    /// Unit vector `i(k)`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.data[k] = 1.0;
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Copy with component `k` replaced.
    pub fn with(&self, k: usize, value: f64) -> Self {
        let mut v = self.clone();
        v.data[k] = value;
        v
    }
}

impl From<Vec<f64>> for ColumnVector {
    fn from(data: Vec<f64>) -> Self {
        assert!(!data.is_empty(), "vector dimension must be at least 1");
        Self { data }
    }
}

impl<const N: usize> From<[f64; N]> for ColumnVector {
    fn from(data: [f64; N]) -> Self {
        Self::from(data.to_vec())
    }
}

impl Index<usize> for ColumnVector {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for ColumnVector {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.data[i]
    }
}

impl Add<&ColumnVector> for &ColumnVector {
    type Output = ColumnVector;
    fn add(self, rhs: &ColumnVector) -> ColumnVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        ColumnVector { data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&ColumnVector> for &ColumnVector {
    type Output = ColumnVector;
    fn sub(self, rhs: &ColumnVector) -> ColumnVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        ColumnVector { data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul<f64> for &ColumnVector {
    type Output = ColumnVector;
    fn mul(self, s: f64) -> ColumnVector {
        self.scale(s)
    }
}

impl fmt::Display for ColumnVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v:.6e}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple_loop(a: &SquareMatrix, b: &SquareMatrix) -> SquareMatrix {
        let n = a.dim();
        let mut c = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += a[(i, k)] * b[(k, j)];
                }
                c[(i, j)] = s;
            }
        }
        c
    }

    fn sample(seed: u64) -> SquareMatrix {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        SquareMatrix::from_fn(4, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
    }

    #[test]
    fn identity_product() {
        let m = sample(3);
        assert_eq!(SquareMatrix::identity(4).mat_mul(&m).unwrap(), m);
    }

    #[test]
    fn diagonal_product() {
        let p = SquareMatrix::from_diag(&[2.0, 3.0]).mat_mul(&SquareMatrix::from_diag(&[5.0, 7.0])).unwrap();
        assert_eq!(p, SquareMatrix::from_diag(&[10.0, 21.0]));
    }

    #[test]
    fn product_matches_triple_loop() {
        for seed in 0..20 {
            let (a, b) = (sample(seed), sample(seed + 100));
            let d = &a.mat_mul(&b).unwrap() - &triple_loop(&a, &b);
            assert!(d.max_abs() < 1e-15);
        }
    }

    #[test]
    fn mismatch_rejected() {
        let e = SquareMatrix::identity(3).mat_mul(&SquareMatrix::identity(4)).unwrap_err();
        assert_eq!(e, MatrixError::DimensionMismatch { left: 3, right: 4 });
    }

    #[test]
    fn signature_matrix_is_involutive() {
        let g = SquareMatrix::from_diag(&[-1.0, -1.0, -1.0, 1.0]);
        assert_eq!(g.inverse().unwrap(), g);
        assert_eq!(SquareMatrix::identity(4).inverse().unwrap(), SquareMatrix::identity(4));
    }

    #[test]
    fn singular_reports_det() {
        let m = SquareMatrix::from_rows([[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(m.inverse(), Err(MatrixError::Singular { .. })));
        assert!(matches!(m.linear_solve(&ColumnVector::from([1.0, 1.0])), Err(MatrixError::Singular { .. })));
    }

    #[test]
    fn det_known_values() {
        assert_eq!(SquareMatrix::identity(4).det(), 1.0);
        let m = SquareMatrix::from_rows([[0.0, 2.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 3.0]]);
        assert!((m.det() + 6.0).abs() < 1e-15);
    }

    #[test]
    fn solve_round_trip() {
        for seed in 0..10 {
            let a = &sample(seed) + &SquareMatrix::identity(4).scale(2.0);
            let v = ColumnVector::from([0.3, -1.2, 2.5, 0.7]);
            let b = a.mat_vec(&v).unwrap();
            let x = a.linear_solve(&b).unwrap();
            assert!((&x - &v).max_abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            SquareMatrix::from_row_major(2, vec![1.0, f64::NAN, 0.0, 1.0]),
            Err(MatrixError::NonFinite { row: 0, col: 1 })
        ));
        assert!(matches!(SquareMatrix::from_row_major(0, vec![]), Err(MatrixError::EmptyMatrix)));
    }

    #[test]
    fn trace_and_transpose() {
        assert_eq!(SquareMatrix::identity(4).trace(), 4.0);
        let m = sample(9);
        assert_eq!(m.transpose().transpose(), m);
    }
}
