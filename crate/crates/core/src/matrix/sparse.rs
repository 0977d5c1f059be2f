//! Compressed sparse row storage.
//!
//! The representation is kept canonical at all times: column indices within a
//! row are strictly increasing and no exact zero is ever stored. Every
//! constructor and arithmetic routine in this file re-establishes that form
//! before returning.

use nalgebra::DMatrix;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[inline]
fn is_zero(v: Complex64) -> bool {
    v.re == 0.0 && v.im == 0.0
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct CsrMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl CsrMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CsrMatrix {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are
    /// summed and zeros dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut per_row: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); rows];
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "triplet ({i}, {j}) outside {rows}x{cols}");
            per_row[i].push((j, v));
        }
        let mut out = CsrMatrix::zeros(rows, cols);
        for (i, mut entries) in per_row.into_iter().enumerate() {
            entries.sort_by_key(|&(j, _)| j);
            let mut k = 0;
            while k < entries.len() {
                let j = entries[k].0;
                let mut acc = ZERO;
                while k < entries.len() && entries[k].0 == j {
                    acc += entries[k].1;
                    k += 1;
                }
                if !is_zero(acc) {
                    out.col_idx.push(j);
                    out.values.push(acc);
                }
            }
            out.row_ptr[i + 1] = out.col_idx.len();
        }
        out
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        let (rows, cols) = m.shape();
        let mut out = CsrMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = m[(i, j)];
                if !is_zero(v) {
                    out.col_idx.push(j);
                    out.values.push(v);
                }
            }
            out.row_ptr[i + 1] = out.col_idx.len();
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.iter() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    fn row(&self, i: usize) -> (&[usize], &[Complex64]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[a..b], &self.values[a..b])
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => ZERO,
        }
    }

    /// Iterates stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    /// Transpose, optionally conjugating every entry.
    pub fn transpose_with(&self, conjugate: bool) -> Self {
        let mut counts = vec![0usize; self.cols + 1];
        for &j in &self.col_idx {
            counts[j + 1] += 1;
        }
        for j in 0..self.cols {
            counts[j + 1] += counts[j];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![ZERO; self.nnz()];
        // Walking rows in order keeps each output row sorted.
        for (i, j, v) in self.iter() {
            let slot = next[j];
            col_idx[slot] = i;
            values[slot] = if conjugate { v.conj() } else { v };
            next[j] += 1;
        }
        CsrMatrix {
            rows: self.cols,
            cols: self.rows,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn map_values(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let mut out = CsrMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let w = f(v);
                if !is_zero(w) {
                    out.col_idx.push(j);
                    out.values.push(w);
                }
            }
            out.row_ptr[i + 1] = out.col_idx.len();
        }
        out
    }

    pub fn kron(&self, other: &CsrMatrix) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = CsrMatrix::zeros(rows, cols);
        out.col_idx.reserve(self.nnz() * other.nnz());
        out.values.reserve(self.nnz() * other.nnz());
        for ia in 0..self.rows {
            let (acols, avals) = self.row(ia);
            for ib in 0..other.rows {
                let (bcols, bvals) = other.row(ib);
                for (&ja, &va) in acols.iter().zip(avals) {
                    for (&jb, &vb) in bcols.iter().zip(bvals) {
                        let v = va * vb;
                        if !is_zero(v) {
                            out.col_idx.push(ja * other.cols + jb);
                            out.values.push(v);
                        }
                    }
                }
                out.row_ptr[ia * other.rows + ib + 1] = out.col_idx.len();
            }
        }
        out
    }

    /// Sparse-sparse product (Gustavson's row-by-row algorithm).
    pub fn matmul(&self, other: &CsrMatrix) -> Self {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = CsrMatrix::zeros(self.rows, other.cols);
        let mut acc = vec![ZERO; other.cols];
        let mut occupied = vec![false; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        for i in 0..self.rows {
            let (acols, avals) = self.row(i);
            for (&k, &va) in acols.iter().zip(avals) {
                let (bcols, bvals) = other.row(k);
                for (&j, &vb) in bcols.iter().zip(bvals) {
                    if !occupied[j] {
                        occupied[j] = true;
                        touched.push(j);
                    }
                    acc[j] += va * vb;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                let v = acc[j];
                if !is_zero(v) {
                    out.col_idx.push(j);
                    out.values.push(v);
                }
                acc[j] = ZERO;
                occupied[j] = false;
            }
            touched.clear();
            out.row_ptr[i + 1] = out.col_idx.len();
        }
        out
    }

    /// `self * dense`.
    pub fn mul_dense(&self, dense: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        debug_assert_eq!(self.cols, dense.nrows());
        let mut out = DMatrix::zeros(self.rows, dense.ncols());
        for (i, k, v) in self.iter() {
            for j in 0..dense.ncols() {
                out[(i, j)] += v * dense[(k, j)];
            }
        }
        out
    }

    /// `dense * self`.
    pub fn dense_mul(dense: &DMatrix<Complex64>, sparse: &CsrMatrix) -> DMatrix<Complex64> {
        debug_assert_eq!(dense.ncols(), sparse.rows);
        let mut out = DMatrix::zeros(dense.nrows(), sparse.cols);
        for (k, j, v) in sparse.iter() {
            for i in 0..dense.nrows() {
                out[(i, j)] += dense[(i, k)] * v;
            }
        }
        out
    }

    /// `self + sign * other`, merging rows.
    pub fn add_scaled(&self, other: &CsrMatrix, sign: f64) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = CsrMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            let (ac, av) = self.row(i);
            let (bc, bv) = other.row(i);
            let (mut p, mut q) = (0, 0);
            while p < ac.len() || q < bc.len() {
                let (j, v) = if q >= bc.len() || (p < ac.len() && ac[p] < bc[q]) {
                    p += 1;
                    (ac[p - 1], av[p - 1])
                } else if p >= ac.len() || bc[q] < ac[p] {
                    q += 1;
                    (bc[q - 1], bv[q - 1] * sign)
                } else {
                    p += 1;
                    q += 1;
                    (ac[p - 1], av[p - 1] + bv[q - 1] * sign)
                };
                if !is_zero(v) {
                    out.col_idx.push(j);
                    out.values.push(v);
                }
            }
            out.row_ptr[i + 1] = out.col_idx.len();
        }
        out
    }

    #[cfg(test)]
    pub fn is_canonical(&self) -> bool {
        self.row_ptr.len() == self.rows + 1
            && (0..self.rows).all(|i| {
                let (cols, vals) = self.row(i);
                cols.windows(2).all(|w| w[0] < w[1])
                    && cols.iter().all(|&j| j < self.cols)
                    && vals.iter().all(|&v| !is_zero(v))
            })
    }
}
