//! Entanglement and distance measures on density matrices.

use crate::error::{Error, Result};
use crate::gates::{sy, Gate};
use crate::matrix::{hermitian_eig, psd_sqrt, ComplexMatrix, Storage, ZERO};
use crate::register::QuantumRegister;
use crate::states::{DensityMatrix, Ket};

/// Transposes the subsystem formed by the `target` qubits.
pub fn partialtranspose(rho: &DensityMatrix, target: &QuantumRegister) -> Result<ComplexMatrix> {
    let n = rho.qubits();
    target.check_within(n)?;
    let mask = target.qubits().iter().fold(0usize, |m, &q| m | (1 << (n - q)));
    let dim = rho.dim();
    Ok(rho.matrix().remap_entries(dim, dim, |i, j| {
        let swapped = (i ^ j) & mask;
        Some((i ^ swapped, j ^ swapped))
    }))
}

/// Sum of the magnitudes of the negative eigenvalues of the partial
/// transpose; equals `(‖ρ^{T_B}‖₁ − 1)/2`. A Bell state gives 0.5.
pub fn negativity(rho: &DensityMatrix, qubits: &QuantumRegister) -> Result<f64> {
    let pt = partialtranspose(rho, qubits)?;
    let eig = hermitian_eig(&pt)?;
    Ok(eig.eigenvalues.iter().filter(|&&l| l < 0.0).map(|l| -l).sum())
}

/// Von Neumann entropy in bits.
pub fn entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = hermitian_eig(rho.matrix())?;
    Ok(eig
        .eigenvalues
        .iter()
        .map(|&l| l.clamp(0.0, 1.0))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum())
}

/// Wootters concurrence of a two-qubit state.
///
/// Uses the Hermitian form: the square roots of the eigenvalues of
/// `√ρ ρ̃ √ρ`, where `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`, are the same as those of the
/// non-Hermitian product `ρ ρ̃`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::dims("4x4 two-qubit state", format!("{0}x{0}", rho.dim())));
    }
    let yy = spin_flip();
    let flipped = &(yy.matrix() * &rho.matrix().conj()) * yy.matrix();
    let root = psd_sqrt(rho.matrix())?;
    let m = &(&root * &flipped) * &root;
    let eig = hermitian_eig(&m.hermitian_part())?;
    let mut lambdas: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

fn spin_flip() -> Gate {
    let y = sy();
    Gate::from_matrix_unchecked(y.matrix().kron(y.matrix()))
}

/// Eigenvalues below this are treated as numerically zero when restricting a
/// state to its support.
const RANK_TOL: f64 = 1e-13;

/// `B = V_r Λ_r^{1/2}` over the numerical support of `rho`, so `ρ ≈ B B†`.
fn support_factor(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(rho.matrix())?;
    let kept: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i] > RANK_TOL)
        .collect();
    let dim = rho.dim();
    Ok(ComplexMatrix::from_fn(dim, kept.len().max(1), Storage::Dense, |i, c| {
        match kept.get(c) {
            Some(&k) => eig.eigenvectors.get(i, k) * eig.eigenvalues[k].sqrt(),
            None => ZERO,
        }
    }))
}

/// Uhlmann fidelity `Tr √(√ρ σ √ρ)`, clamped to `[0, 1]`.
///
/// Evaluated as `Tr √(B† σ B)` with `ρ = B B†` restricted to the support of
/// the lower-rank argument. Square roots of round-off eigenvalues would
/// otherwise add errors of order 1e-8 for pure or rank-deficient states.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dims(rho.dim(), sigma.dim()));
    }
    let (fa, fb) = (support_factor(rho)?, support_factor(sigma)?);
    let (b, other) = if fa.cols() <= fb.cols() { (fa, sigma) } else { (fb, rho) };
    let inner = (&(&b.dagger() * other.matrix()) * &b).hermitian_part();
    let eig = hermitian_eig(&inner)?;
    let f: f64 = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum();
    Ok(f.clamp(0.0, 1.0))
}

/// `√⟨ψ|ρ|ψ⟩`.
pub fn fidelitypuremixed(psi: &Ket, rho: &DensityMatrix) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(Error::dims(psi.dim(), rho.dim()));
    }
    let col = psi.to_matrix(rho.storage());
    let overlap = &(&col.dagger() * rho.matrix()) * &col;
    Ok(overlap.get(0, 0).re.max(0.0).sqrt().min(1.0))
}

/// Sum of singular values.
pub fn tracenorm(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.is_hermitian(crate::HERMITIAN_TOL) {
        let eig = hermitian_eig(a)?;
        return Ok(eig.eigenvalues.iter().map(|l| l.abs()).sum());
    }
    Ok(a.to_dense().singular_values().iter().sum())
}
