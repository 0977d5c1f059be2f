//! Spectral routines for Hermitian matrices.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{ComplexMatrix, Storage};
use crate::error::{Error, Result};
use crate::{EIGEN_CLAMP_TOL, HERMITIAN_TOL};

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Real eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, column `k` belonging to `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V · diag(f(λ)) · V†`, returned in `storage`.
    pub fn reconstruct_with(&self, storage: Storage, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let diag: Vec<Complex64> = self
            .eigenvalues
            .iter()
            .map(|&l| Complex64::new(f(l), 0.0))
            .collect();
        let v = self.eigenvectors.to_dense();
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
        let m: ComplexMatrix = (&v * d * v.adjoint()).into();
        m.hermitian_part().into_storage(storage)
    }
}

fn require_hermitian(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let deviation = a.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
///
/// The input is symmetrised as `(A + A†)/2` before decomposition; inputs that
/// deviate from Hermitian by more than the tolerance are rejected.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    require_hermitian(a)?;
    let n = a.rows();
    let h = a.hermitian_part().to_dense();
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors: vectors.into(),
    })
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
///
/// Eigenvalues in `[-1e-10, 0)` are treated as zero; anything more negative is
/// an error.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a)?;
    if let Some(&lowest) = eig.eigenvalues.first() {
        if lowest < -EIGEN_CLAMP_TOL {
            return Err(Error::NegativeEigenvalue { value: lowest });
        }
    }
    Ok(eig.reconstruct_with(a.storage(), |l| l.max(0.0).sqrt()))
}
