//! Kets, bras, density matrices and the catalogue of well-known states.

use std::f64::consts::FRAC_1_SQRT_2;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eig, ComplexMatrix, Storage, ONE, ZERO};
use crate::register::qubits_for_dim;
use crate::{EIGEN_CLAMP_TOL, HERMITIAN_TOL, KET_NORM_TOL};

/// Pure state as a column of `2ⁿ` amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex64>,
}

/// Dual of a [`Ket`]: a row of conjugated amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct Bra {
    amplitudes: Vec<Complex64>,
}

impl Ket {
    /// Wraps raw amplitudes. The length must be a power of two; the norm is
    /// not checked here (see [`state`]).
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        qubits_for_dim(amplitudes.len())?;
        Ok(Ket { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn bra(&self) -> Bra {
        Bra {
            amplitudes: self.amplitudes.iter().map(|a| a.conj()).collect(),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::dims(self.dim(), other.dim()));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn kron(&self, other: &Ket) -> Ket {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ket { amplitudes }
    }

    /// Column-vector matrix.
    pub fn to_matrix(&self, storage: Storage) -> ComplexMatrix {
        ComplexMatrix::column(&self.amplitudes).into_storage(storage)
    }

    /// `|self⟩⟨bra|`.
    pub fn outer(&self, bra: &Bra) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), bra.dim(), Storage::Dense, |i, j| {
            self.amplitudes[i] * bra.amplitudes[j]
        })
    }
}

impl Bra {
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn ket(&self) -> Ket {
        Ket {
            amplitudes: self.amplitudes.iter().map(|a| a.conj()).collect(),
        }
    }

    /// Row-vector matrix.
    pub fn to_matrix(&self, storage: Storage) -> ComplexMatrix {
        ComplexMatrix::from_row_slice(1, self.dim(), &self.amplitudes).into_storage(storage)
    }
}

/// Trace-one, Hermitian, positive-semidefinite matrix on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates every density-matrix invariant, including the spectrum.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let rho = DensityMatrix { matrix };
        rho.validate()?;
        Ok(rho)
    }

    /// Skips validation; for results of operations that preserve the invariants.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        DensityMatrix { matrix }
    }

    /// The 1x1 state of a system with no qubits.
    pub fn empty(storage: Storage) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::identity(1, storage),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        qubits_for_dim(m.rows())?;
        let deviation = m.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = m.trace()?;
        if (tr - ONE).norm() > HERMITIAN_TOL {
            return Err(Error::invalid(format!("density matrix trace is {tr}, not 1")));
        }
        let eig = hermitian_eig(m)?;
        if let Some(&lowest) = eig.eigenvalues.first() {
            if lowest < -EIGEN_CLAMP_TOL {
                return Err(Error::NegativeEigenvalue { value: lowest });
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn storage(&self) -> Storage {
        self.matrix.storage()
    }

    pub fn into_storage(self, storage: Storage) -> Self {
        DensityMatrix {
            matrix: self.matrix.into_storage(storage),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix.get(i, j)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|d| d.re).sum()
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix)
            .trace()
            .map(|t| t.re)
            .unwrap_or(f64::NAN)
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(self.matrix.kron(&other.matrix))
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Computational basis ket for a bit string, most significant bit first.
pub fn ket(bits: &[u8]) -> Result<Ket> {
    if bits.is_empty() {
        return Err(Error::invalid("ket needs at least one bit"));
    }
    let mut index = 0usize;
    for &b in bits {
        if b > 1 {
            return Err(Error::invalid(format!("non-binary entry {b} in bit string")));
        }
        index = (index << 1) | b as usize;
    }
    basis_ket(index, bits.len())
}

fn basis_ket(index: usize, size: usize) -> Result<Ket> {
    let mut amplitudes = vec![ZERO; 1 << size];
    amplitudes[index] = ONE;
    Ok(Ket { amplitudes })
}

/// Basis ket `|int⟩` on `size` qubits.
pub fn ketn(int: usize, size: usize) -> Result<Ket> {
    if size == 0 {
        return Err(Error::invalid("ketn needs a positive size"));
    }
    if size >= usize::BITS as usize || int >= 1 << size {
        return Err(Error::invalid(format!("{int} does not fit in {size} qubits")));
    }
    basis_ket(int, size)
}

/// Basis bra `⟨int|` on `size` qubits.
pub fn bran(int: usize, size: usize) -> Result<Bra> {
    ketn(int, size).map(|k| k.bra())
}

/// `|ψ⟩⟨ψ|` for a normalised ket.
pub fn state(pure: &Ket) -> Result<DensityMatrix> {
    let norm = pure.norm();
    if (norm - 1.0).abs() > KET_NORM_TOL {
        return Err(Error::invalid(format!("ket has norm {norm}, expected 1")));
    }
    Ok(DensityMatrix::from_matrix_unchecked(pure.outer(&pure.bra())))
}

/// Convex combination `Σ aᵢ ρᵢ`.
pub fn mixstates(pairs: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
    let (_, first) = pairs
        .first()
        .ok_or_else(|| Error::invalid("mixstates needs at least one state"))?;
    let dim = first.dim();
    let mut total = 0.0;
    let mut acc = ComplexMatrix::zeros(dim, dim, first.storage());
    for &(w, rho) in pairs {
        if w < 0.0 || !w.is_finite() {
            return Err(Error::invalid(format!("negative mixing weight {w}")));
        }
        if rho.dim() != dim {
            return Err(Error::dims(dim, rho.dim()));
        }
        total += w;
        acc = &acc + &rho.matrix.scale_real(w);
    }
    if (total - 1.0).abs() > HERMITIAN_TOL {
        return Err(Error::invalid(format!("mixing weights sum to {total}, expected 1")));
    }
    Ok(DensityMatrix::from_matrix_unchecked(acc))
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
pub fn ghz(n: usize) -> Result<Ket> {
    if n == 0 || n >= usize::BITS as usize {
        return Err(Error::invalid(format!("ghz needs 1..{} qubits, got {n}", usize::BITS)));
    }
    let mut amplitudes = vec![ZERO; 1 << n];
    amplitudes[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amplitudes[(1 << n) - 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    Ok(Ket { amplitudes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellState {
    /// `(|00⟩ + |11⟩)/√2`
    PhiPlus,
    /// `(|00⟩ − |11⟩)/√2`
    PhiMinus,
    /// `(|01⟩ + |10⟩)/√2`
    PsiPlus,
    /// `(|01⟩ − |10⟩)/√2`
    PsiMinus,
}

impl FromStr for BellState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phip" => Ok(BellState::PhiPlus),
            "phim" => Ok(BellState::PhiMinus),
            "psip" => Ok(BellState::PsiPlus),
            "psim" => Ok(BellState::PsiMinus),
            _ => Err(Error::invalid(format!("unknown Bell state `{s}`"))),
        }
    }
}

pub fn bell(which: BellState) -> Ket {
    let s = FRAC_1_SQRT_2;
    let amps = match which {
        BellState::PhiPlus => [s, 0.0, 0.0, s],
        BellState::PhiMinus => [s, 0.0, 0.0, -s],
        BellState::PsiPlus => [0.0, s, s, 0.0],
        BellState::PsiMinus => [0.0, s, -s, 0.0],
    };
    Ket {
        amplitudes: amps.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
    }
}

/// `I/dim`. The argument is the matrix dimension, not a qubit count.
pub fn maximallymixed(dim: usize) -> Result<DensityMatrix> {
    qubits_for_dim(dim)?;
    Ok(DensityMatrix::from_matrix_unchecked(
        ComplexMatrix::identity(dim, Storage::Dense).scale_real(1.0 / dim as f64),
    ))
}

/// Two-qubit Werner state `a·|Φ⁻⟩⟨Φ⁻| + (1 − a)·I/4`.
pub fn wernersinglet(a: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::invalid(format!("Werner parameter {a} outside [0, 1]")));
    }
    let phim = state(&bell(BellState::PhiMinus))?;
    let mixed = maximallymixed(4)?;
    mixstates(&[(a, &phim), (1.0 - a, &mixed)])
}
