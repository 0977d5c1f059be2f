//! Unitary gates: elementary one-qubit gates, permutations, the QFT matrix,
//! and the register-based product and controlled-gate constructors.
//!
//! Every constructor returns a full-system gate whose size is the number of
//! qubits in the system it acts on, so gates compose by plain matrix product.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{kron_all, ComplexMatrix, Storage, ONE, ZERO};
use crate::register::{qubit_bit, qubits_for_dim, QuantumRegister};
use crate::states::Ket;
use crate::HERMITIAN_TOL;

/// A `2ˢ × 2ˢ` unitary acting on `s` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    matrix: ComplexMatrix,
    qubits: usize,
}

impl Gate {
    /// Checks squareness, power-of-two dimension and unitarity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !isunitary(&matrix)? {
            return Err(Error::NotUnitary {
                deviation: unitarity_deviation(&matrix),
            });
        }
        let qubits = qubits_for_dim(matrix.rows())?;
        Ok(Gate { matrix, qubits })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        let qubits = matrix.rows().trailing_zeros() as usize;
        Gate { matrix, qubits }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Number of qubits the gate acts on.
    pub fn size(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn into_storage(self, storage: Storage) -> Self {
        Gate {
            matrix: self.matrix.into_storage(storage),
            qubits: self.qubits,
        }
    }

    pub fn dagger(&self) -> Gate {
        Gate::from_matrix_unchecked(self.matrix.dagger())
    }

    /// `U|ψ⟩`.
    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        let out = self.matrix.matmul(&ket.to_matrix(Storage::Dense))?;
        Ket::new((0..out.rows()).map(|i| out.get(i, 0)).collect())
    }

    pub fn approx_eq(&self, other: &Gate, tol: f64) -> bool {
        self.matrix.approx_eq(&other.matrix, tol)
    }

    fn require_one_qubit(&self) -> Result<()> {
        if self.qubits != 1 {
            return Err(Error::invalid(format!(
                "expected a one-qubit gate, got a {}-qubit gate",
                self.qubits
            )));
        }
        Ok(())
    }
}

fn unitarity_deviation(m: &ComplexMatrix) -> f64 {
    let prod = m * &m.dagger();
    prod.max_abs_diff(&ComplexMatrix::identity(m.rows(), Storage::Dense))
}

/// True iff `‖U·U† − I‖_max ≤ 1e-10`.
pub fn isunitary(m: &ComplexMatrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(unitarity_deviation(m) <= HERMITIAN_TOL)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Pauli::X),
            "y" | "Y" => Ok(Pauli::Y),
            "z" | "Z" => Ok(Pauli::Z),
            _ => Err(Error::invalid(format!("unknown Pauli axis `{s}`"))),
        }
    }
}

fn one_qubit(entries: [Complex64; 4]) -> Gate {
    Gate::from_matrix_unchecked(ComplexMatrix::from_row_slice(2, 2, &entries))
}

pub fn pauli(which: Pauli) -> Gate {
    let i = Complex64::i();
    match which {
        Pauli::X => one_qubit([ZERO, ONE, ONE, ZERO]),
        Pauli::Y => one_qubit([ZERO, -i, i, ZERO]),
        Pauli::Z => one_qubit([ONE, ZERO, ZERO, -ONE]),
    }
}

pub fn sx() -> Gate {
    pauli(Pauli::X)
}

pub fn sy() -> Gate {
    pauli(Pauli::Y)
}

pub fn sz() -> Gate {
    pauli(Pauli::Z)
}

/// Identity on `n` qubits.
pub fn identity(n: usize) -> Gate {
    Gate {
        matrix: ComplexMatrix::identity(1 << n, Storage::Dense),
        qubits: n,
    }
}

pub fn hadamard() -> Gate {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    one_qubit([s, s, s, -s])
}

/// `exp(−i·a·σ/2)`.
pub fn rot(axis: Pauli, a: f64) -> Gate {
    let c = Complex64::new((a / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(a / 2.0).sin());
    let id = identity(1).matrix;
    let m = &id.scale(c) + &pauli(axis).matrix.scale(s);
    Gate::from_matrix_unchecked(m)
}

/// `diag(e^{i·p0}, e^{i·p1})`.
pub fn phase2(p0: f64, p1: f64) -> Gate {
    one_qubit([Complex64::from_polar(1.0, p0), ZERO, ZERO, Complex64::from_polar(1.0, p1)])
}

/// Discrete Fourier transform on `n` qubits: `F[j,k] = ω^{jk}/√2ⁿ`,
/// `ω = e^{2πi/2ⁿ}`.
pub fn qft(n: usize) -> Result<Gate> {
    if n == 0 {
        return Err(Error::invalid("qft needs at least one qubit"));
    }
    let dim = 1usize << n;
    let norm = 1.0 / (dim as f64).sqrt();
    // Reduce jk mod 2ⁿ before taking the angle to keep phases exact-ish.
    let m = ComplexMatrix::from_fn(dim, dim, Storage::Dense, |j, k| {
        let e = (j * k) % dim;
        Complex64::from_polar(norm, 2.0 * PI * e as f64 / dim as f64)
    });
    Ok(Gate::from_matrix_unchecked(m))
}

/// Permutation gate: qubit `i` of the input lands at position `perm[i-1]`,
/// so `|b₁…bₙ⟩ ↦ |b_{π⁻¹(1)}…b_{π⁻¹(n)}⟩`.
pub fn qubitpermutation(perm: &[usize]) -> Result<Gate> {
    let n = perm.len();
    if n == 0 {
        return Err(Error::invalid("empty permutation"));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p == 0 || p > n || seen[p - 1] {
            return Err(Error::invalid(format!("{perm:?} is not a permutation of 1..={n}")));
        }
        seen[p - 1] = true;
    }
    let dim = 1usize << n;
    let triplets = (0..dim).map(|input| {
        let output = (1..=n).fold(0usize, |acc, q| {
            acc | (qubit_bit(input, q, n) << (n - perm[q - 1]))
        });
        (output, input, ONE)
    });
    Ok(Gate::from_matrix_unchecked(ComplexMatrix::from_triplets(
        dim,
        dim,
        Storage::Dense,
        triplets,
    )))
}

/// Exchanges two qubits of a `size`-qubit system.
pub fn swap(size: usize, qubits: &QuantumRegister) -> Result<Gate> {
    if qubits.len() != 2 {
        return Err(Error::invalid("swap needs exactly two qubits"));
    }
    qubits.check_within(size)?;
    let (a, b) = (qubits.qubits()[0], qubits.qubits()[1]);
    let perm: Vec<usize> = (1..=size)
        .map(|q| if q == a { b } else if q == b { a } else { q })
        .collect();
    qubitpermutation(&perm)
}

/// Reverses the order of all `n` qubits.
pub fn flip(n: usize) -> Result<Gate> {
    let perm: Vec<usize> = (1..=n).map(|q| n + 1 - q).collect();
    qubitpermutation(&perm)
}

fn check_size(size: usize) -> Result<()> {
    if size == 0 {
        return Err(Error::invalid("gate size must be positive"));
    }
    Ok(())
}

/// `X₁ ⊗ … ⊗ X_size` with `Xᵢ = g` on the target qubits and `I` elsewhere.
pub fn productgate(g: &Gate, target: &QuantumRegister, size: usize) -> Result<Gate> {
    g.require_one_qubit()?;
    check_size(size)?;
    target.check_within(size)?;
    let id = ComplexMatrix::identity(2, Storage::Dense);
    let factors: Vec<&ComplexMatrix> = (1..=size)
        .map(|q| if target.contains(q) { &g.matrix } else { &id })
        .collect();
    Ok(Gate::from_matrix_unchecked(kron_all(factors, Storage::Dense)))
}

/// Projector onto the subspace where every control qubit is `|1⟩`.
pub(crate) fn all_ones_projector(control: &QuantumRegister, size: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2, Storage::Dense);
    let one = ComplexMatrix::from_real_rows(2, 2, &[0.0, 0.0, 0.0, 1.0]);
    let factors: Vec<&ComplexMatrix> = (1..=size)
        .map(|q| if control.contains(q) { &one } else { &id })
        .collect();
    kron_all(factors, Storage::Dense)
}

/// Multi-controlled gate: `g` acts on every target qubit when all control
/// qubits are `|1⟩`, identity otherwise.
///
/// Built as `(I − P) + P·G_t`, where `P` projects onto the all-ones control
/// subspace and `G_t` is the product gate of `g` on the targets.
pub fn controlledgate(
    g: &Gate,
    control: &QuantumRegister,
    target: &QuantumRegister,
    size: usize,
) -> Result<Gate> {
    g.require_one_qubit()?;
    check_size(size)?;
    control.check_within(size)?;
    target.check_within(size)?;
    control.check_disjoint(target)?;
    let dim = 1usize << size;
    let p = all_ones_projector(control, size);
    let gt = productgate(g, target, size)?;
    let off = &ComplexMatrix::identity(dim, Storage::Dense) - &p;
    let on = &p * &gt.matrix;
    Ok(Gate::from_matrix_unchecked(&off + &on))
}

/// Controlled phase `R(φ) = diag(1, e^{iφ})` on `target`, controlled by `control`.
pub fn cphase(phi: f64, control: usize, target: usize, size: usize) -> Result<Gate> {
    controlledgate(
        &phase2(0.0, phi),
        &QuantumRegister::single(control)?,
        &QuantumRegister::single(target)?,
        size,
    )
}

/// Composes gates so that the first listed acts first: the result is
/// `gₖ ⋯ g₂ · g₁`.
pub fn circuit(gates: &[Gate]) -> Result<Gate> {
    let (first, rest) = gates
        .split_first()
        .ok_or_else(|| Error::invalid("circuit needs at least one gate"))?;
    let mut total = first.matrix.clone();
    for g in rest {
        if g.qubits != first.qubits {
            return Err(Error::dims(format!("{}-qubit gate", first.qubits), format!("{}-qubit gate", g.qubits)));
        }
        total = g.matrix.matmul(&total)?;
    }
    Ok(Gate::from_matrix_unchecked(total))
}
