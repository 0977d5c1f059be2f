//! Complex matrices with interchangeable dense and sparse storage.
//!
//! [`ComplexMatrix`] hides the backend: every operation gives the same
//! logical result (entrywise within round-off) whichever storage its operands
//! use. Binary operations produce sparse output only when both operands are
//! sparse.

mod sparse;
mod spectral;

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use sparse::CsrMatrix;

pub use spectral::{hermitian_eig, psd_sqrt, HermitianEigen};

/// Backend used to store a [`ComplexMatrix`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Storage {
    #[default]
    Dense,
    Sparse,
}

impl Storage {
    pub fn from_sparse_flag(sparse: bool) -> Self {
        if sparse {
            Storage::Sparse
        } else {
            Storage::Dense
        }
    }
}

#[derive(Clone, PartialEq)]
enum Repr {
    Dense(DMatrix<Complex64>),
    Sparse(CsrMatrix),
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    repr: Repr,
}

pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize, storage: Storage) -> Self {
        match storage {
            Storage::Dense => DMatrix::zeros(rows, cols).into(),
            Storage::Sparse => CsrMatrix::zeros(rows, cols).into(),
        }
    }

    pub fn identity(n: usize, storage: Storage) -> Self {
        match storage {
            Storage::Dense => DMatrix::identity(n, n).into(),
            Storage::Sparse => CsrMatrix::identity(n).into(),
        }
    }

    /// Dense matrix from row-major entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[Complex64]) -> Self {
        DMatrix::from_row_slice(rows, cols, entries).into()
    }

    /// Real-valued dense matrix from row-major entries.
    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Self {
        let entries: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_row_slice(rows, cols, &entries)
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        storage: Storage,
        f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let dense = DMatrix::from_fn(rows, cols, f);
        ComplexMatrix::from(dense).into_storage(storage)
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, storage: Storage, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        match storage {
            Storage::Sparse => CsrMatrix::from_triplets(rows, cols, triplets).into(),
            Storage::Dense => {
                let mut m = DMatrix::zeros(rows, cols);
                for (i, j, v) in triplets {
                    m[(i, j)] += v;
                }
                m.into()
            }
        }
    }

    pub fn from_diagonal(diag: &[Complex64], storage: Storage) -> Self {
        let n = diag.len();
        Self::from_triplets(n, n, storage, diag.iter().enumerate().map(|(i, &v)| (i, i, v)))
    }

    /// Column vector.
    pub fn column(entries: &[Complex64]) -> Self {
        Self::from_row_slice(entries.len(), 1, entries)
    }

    pub fn rows(&self) -> usize {
        match &self.repr {
            Repr::Dense(m) => m.nrows(),
            Repr::Sparse(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match &self.repr {
            Repr::Dense(m) => m.ncols(),
            Repr::Sparse(m) => m.cols(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn storage(&self) -> Storage {
        match self.repr {
            Repr::Dense(_) => Storage::Dense,
            Repr::Sparse(_) => Storage::Sparse,
        }
    }

    /// Number of stored entries (all entries for dense storage).
    pub fn stored_entries(&self) -> usize {
        match &self.repr {
            Repr::Dense(m) => m.len(),
            Repr::Sparse(m) => m.nnz(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        assert!(i < self.rows() && j < self.cols(), "index ({i}, {j}) out of bounds");
        match &self.repr {
            Repr::Dense(m) => m[(i, j)],
            Repr::Sparse(m) => m.get(i, j),
        }
    }

    pub fn into_storage(self, storage: Storage) -> Self {
        match (self.repr, storage) {
            (Repr::Dense(m), Storage::Sparse) => CsrMatrix::from_dense(&m).into(),
            (Repr::Sparse(m), Storage::Dense) => m.to_dense().into(),
            (repr, _) => ComplexMatrix { repr },
        }
    }

    pub fn to_storage(&self, storage: Storage) -> Self {
        self.clone().into_storage(storage)
    }

    /// Dense copy of the entries.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match &self.repr {
            Repr::Dense(m) => m.clone(),
            Repr::Sparse(m) => m.to_dense(),
        }
    }

    /// Visits every nonzero entry. Dense matrices skip exact zeros so that both
    /// backends visit the same set of entries.
    pub fn for_each_nonzero(&self, mut f: impl FnMut(usize, usize, Complex64)) {
        match &self.repr {
            Repr::Dense(m) => {
                for j in 0..m.ncols() {
                    for i in 0..m.nrows() {
                        let v = m[(i, j)];
                        if v != ZERO {
                            f(i, j, v);
                        }
                    }
                }
            }
            Repr::Sparse(m) => m.iter().for_each(|(i, j, v)| f(i, j, v)),
        }
    }

    /// Rebuilds a matrix of the given shape by moving every nonzero entry to a
    /// new position. Used by index-permuting operations such as partial trace
    /// and partial transpose.
    pub(crate) fn remap_entries(
        &self,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Option<(usize, usize)>,
    ) -> Self {
        let mut triplets = Vec::new();
        self.for_each_nonzero(|i, j, v| {
            if let Some((a, b)) = f(i, j) {
                triplets.push((a, b, v));
            }
        });
        Self::from_triplets(rows, cols, self.storage(), triplets)
    }

    /// Kronecker (tensor) product `self ⊗ other`.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        match (&self.repr, &other.repr) {
            (Repr::Sparse(a), Repr::Sparse(b)) => a.kron(b).into(),
            (Repr::Dense(a), Repr::Dense(b)) => a.kronecker(b).into(),
            _ => self.to_dense().kronecker(&other.to_dense()).into(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        match &self.repr {
            Repr::Dense(m) => m.adjoint().into(),
            Repr::Sparse(m) => m.transpose_with(true).into(),
        }
    }

    pub fn transpose(&self) -> ComplexMatrix {
        match &self.repr {
            Repr::Dense(m) => m.transpose().into(),
            Repr::Sparse(m) => m.transpose_with(false).into(),
        }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> ComplexMatrix {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        self.map(|v| v * factor)
    }

    pub fn scale_real(&self, factor: f64) -> ComplexMatrix {
        self.map(|v| v * factor)
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> ComplexMatrix {
        match &self.repr {
            Repr::Dense(m) => m.map(f).into(),
            Repr::Sparse(m) => m.map_values(f).into(),
        }
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols() != other.rows() {
            return Err(Error::dims(
                format!("{} rows on right operand", self.cols()),
                other.rows(),
            ));
        }
        Ok(match (&self.repr, &other.repr) {
            (Repr::Dense(a), Repr::Dense(b)) => (a * b).into(),
            (Repr::Sparse(a), Repr::Sparse(b)) => a.matmul(b).into(),
            (Repr::Sparse(a), Repr::Dense(b)) => a.mul_dense(b).into(),
            (Repr::Dense(a), Repr::Sparse(b)) => CsrMatrix::dense_mul(a, b).into(),
        })
    }

    fn combine(&self, other: &ComplexMatrix, sign: f64) -> Result<ComplexMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::dims(
                format!("{:?}", self.shape()),
                format!("{:?}", other.shape()),
            ));
        }
        Ok(match (&self.repr, &other.repr) {
            (Repr::Sparse(a), Repr::Sparse(b)) => a.add_scaled(b, sign).into(),
            _ => {
                let a = self.to_dense();
                let b = other.to_dense();
                (a + b * Complex64::new(sign, 0.0)).into()
            }
        })
    }

    /// Entrywise sum.
    pub fn try_add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.combine(other, 1.0)
    }

    /// Entrywise difference.
    pub fn try_sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.combine(other, -1.0)
    }

    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        Ok(self.diagonal().into_iter().sum())
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        let n = self.rows().min(self.cols());
        match &self.repr {
            Repr::Dense(m) => (0..n).map(|i| m[(i, i)]).collect(),
            Repr::Sparse(m) => (0..n).map(|i| m.get(i, i)).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        match (&self.repr, &other.repr) {
            (Repr::Dense(a), Repr::Dense(b)) => a
                .iter()
                .zip(b.iter())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max),
            _ => {
                let a = self.to_dense();
                let b = other.to_dense();
                a.iter()
                    .zip(b.iter())
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max)
            }
        }
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        let mut best = 0.0f64;
        self.for_each_nonzero(|_, _, v| best = best.max(v.norm()));
        best
    }

    /// Max-abs distance between the matrix and its conjugate transpose.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.dagger())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        (self + &self.dagger()).scale_real(0.5)
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<ComplexMatrix> {
        u.matmul(self)?.matmul(&u.dagger())
    }

    #[cfg(test)]
    pub(crate) fn is_canonical(&self) -> bool {
        match &self.repr {
            Repr::Dense(_) => true,
            Repr::Sparse(m) => m.is_canonical(),
        }
    }
}

impl From<DMatrix<Complex64>> for ComplexMatrix {
    fn from(m: DMatrix<Complex64>) -> Self {
        ComplexMatrix {
            repr: Repr::Dense(m),
        }
    }
}

impl From<CsrMatrix> for ComplexMatrix {
    fn from(m: CsrMatrix) -> Self {
        ComplexMatrix {
            repr: Repr::Sparse(m),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, c) = self.shape();
        writeln!(f, "ComplexMatrix<{:?}> {r}x{c}", self.storage())?;
        if r * c > 256 {
            return write!(f, "  ({} stored entries)", self.stored_entries());
        }
        for i in 0..r {
            write!(f, " ")?;
            for j in 0..c {
                let v = self.get(i, j);
                write!(f, " {:+.4}{:+.4}i", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Panics on a shape mismatch; use [`ComplexMatrix::matmul`] for a checked product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

/// Free-function forms of the core operations.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn trace(a: &ComplexMatrix) -> Result<Complex64> {
    a.trace()
}

/// Tensor product of a sequence of matrices, left to right. The empty product
/// is the 1x1 identity.
pub fn kron_all<'a, I>(factors: I, storage: Storage) -> ComplexMatrix
where
    I: IntoIterator<Item = &'a ComplexMatrix>,
{
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1, storage), |acc, m| acc.kron(m))
}
