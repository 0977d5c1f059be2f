//! Kraus-operator quantum channels.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{pauli, Pauli};
use crate::matrix::{kron_all, ComplexMatrix, Storage};
use crate::register::QuantumRegister;
use crate::states::DensityMatrix;
use crate::HERMITIAN_TOL;

/// A list of equal-dimension Kraus operators `Kᵢ`; the map is
/// `ρ ↦ Σ Kᵢ ρ Kᵢ†`. Completeness is not enforced at construction, see
/// [`ischannel`].
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    ops: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::invalid("a Kraus set needs at least one operator"))?;
        let dim = first.rows();
        for op in &ops {
            if !op.is_square() {
                return Err(Error::NotSquare {
                    rows: op.rows(),
                    cols: op.cols(),
                });
            }
            if op.rows() != dim {
                return Err(Error::dims(format!("{dim}x{dim}"), format!("{}x{}", op.rows(), op.cols())));
            }
        }
        Ok(KrausSet { ops })
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ops[0].rows()
    }

    pub fn into_storage(self, storage: Storage) -> Self {
        KrausSet {
            ops: self.ops.into_iter().map(|k| k.into_storage(storage)).collect(),
        }
    }

    /// `‖Σ Kᵢ†Kᵢ − I‖_max`.
    pub fn completeness_deviation(&self) -> f64 {
        let dim = self.dim();
        let sum = self.ops.iter().fold(ComplexMatrix::zeros(dim, dim, Storage::Dense), |acc, k| {
            &acc + &(&k.dagger() * k)
        });
        sum.max_abs_diff(&ComplexMatrix::identity(dim, Storage::Dense))
    }
}

/// True iff the operators satisfy `Σ Kᵢ†Kᵢ = I` within 1e-10.
pub fn ischannel(k: &KrausSet) -> bool {
    k.completeness_deviation() <= HERMITIAN_TOL
}

/// The named one-qubit channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Depolarizing,
    AmplitudeDamping,
    PhaseDamping,
    BitFlip,
    PhaseFlip,
    BitPhaseFlip,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 6] = [
        ChannelKind::Depolarizing,
        ChannelKind::AmplitudeDamping,
        ChannelKind::PhaseDamping,
        ChannelKind::BitFlip,
        ChannelKind::PhaseFlip,
        ChannelKind::BitPhaseFlip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::AmplitudeDamping => "amplitudedamping",
            ChannelKind::PhaseDamping => "phasedamping",
            ChannelKind::BitFlip => "bitflip",
            ChannelKind::PhaseFlip => "phaseflip",
            ChannelKind::BitPhaseFlip => "bitphaseflip",
        }
    }

    /// Channels for which `I` is a fixed point.
    pub fn is_unital(self) -> bool {
        !matches!(self, ChannelKind::AmplitudeDamping)
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChannelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownChannel(s.to_string()))
    }
}

/// One-qubit Kraus set of a named channel with parameter `p ∈ [0, 1]`.
///
/// * depolarizing: `√(1−3p/4)·I, √(p/4)·σx, √(p/4)·σy, √(p/4)·σz`, i.e.
///   `ρ ↦ (1−p)ρ + p·I/2`
/// * bit/phase/bit-phase flip: `√(1−p)·I, √p·σ` with `σ = σx, σz, σy`
/// * amplitude damping: `[[1,0],[0,√(1−p)]], [[0,√p],[0,0]]`
/// * phase damping: `[[1,0],[0,√(1−p)]], [[0,0],[0,√p]]`
///
/// Operators that vanish for the given `p` are omitted.
pub fn channel(kind: ChannelKind, p: f64) -> Result<KrausSet> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("channel parameter {p} outside [0, 1]")));
    }
    let id = ComplexMatrix::identity(2, Storage::Dense);
    let scaled = |m: &ComplexMatrix, w: f64| m.scale(Complex64::new(w.sqrt(), 0.0));
    let x = pauli(Pauli::X).into_matrix();
    let y = pauli(Pauli::Y).into_matrix();
    let z = pauli(Pauli::Z).into_matrix();
    let ops = match kind {
        ChannelKind::Depolarizing => vec![
            scaled(&id, 1.0 - 0.75 * p),
            scaled(&x, p / 4.0),
            scaled(&y, p / 4.0),
            scaled(&z, p / 4.0),
        ],
        ChannelKind::BitFlip => vec![scaled(&id, 1.0 - p), scaled(&x, p)],
        ChannelKind::PhaseFlip => vec![scaled(&id, 1.0 - p), scaled(&z, p)],
        ChannelKind::BitPhaseFlip => vec![scaled(&id, 1.0 - p), scaled(&y, p)],
        ChannelKind::AmplitudeDamping => vec![
            ComplexMatrix::from_real_rows(2, 2, &[1.0, 0.0, 0.0, (1.0 - p).sqrt()]),
            ComplexMatrix::from_real_rows(2, 2, &[0.0, p.sqrt(), 0.0, 0.0]),
        ],
        ChannelKind::PhaseDamping => vec![
            ComplexMatrix::from_real_rows(2, 2, &[1.0, 0.0, 0.0, (1.0 - p).sqrt()]),
            ComplexMatrix::from_real_rows(2, 2, &[0.0, 0.0, 0.0, p.sqrt()]),
        ],
    };
    KrausSet::new(ops.into_iter().filter(|k| k.max_abs() > 0.0).collect())
}

fn require_one_qubit(k: &KrausSet) -> Result<()> {
    if k.dim() != 2 {
        return Err(Error::invalid(format!(
            "expected a one-qubit channel, got dimension {}",
            k.dim()
        )));
    }
    Ok(())
}

/// Embeds a one-qubit Kraus operator on `qubit` of a `size`-qubit system.
fn embed(op: &ComplexMatrix, qubit: usize, size: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2, Storage::Sparse);
    let op = op.to_storage(Storage::Sparse);
    let factors: Vec<&ComplexMatrix> = (1..=size).map(|q| if q == qubit { &op } else { &id }).collect();
    kron_all(factors, Storage::Sparse)
}

/// Extends a one-qubit channel to act independently on every qubit of
/// `target` in a `size`-qubit system.
///
/// The result is the product set: one operator per choice of Kraus operator on
/// each target qubit, so it has `|k|^|target|` elements. Operators are stored
/// sparsely since each is a Kronecker product with identities.
pub fn localchannel(k: &KrausSet, target: &QuantumRegister, size: usize) -> Result<KrausSet> {
    require_one_qubit(k)?;
    if size == 0 {
        return Err(Error::invalid("channel size must be positive"));
    }
    target.check_within(size)?;
    let id = ComplexMatrix::identity(2, Storage::Sparse);
    let sparse_ops: Vec<ComplexMatrix> = k.ops.iter().map(|o| o.to_storage(Storage::Sparse)).collect();
    let mut choices: Vec<Vec<&ComplexMatrix>> = vec![Vec::with_capacity(size)];
    for q in 1..=size {
        if target.contains(q) {
            choices = choices
                .into_iter()
                .flat_map(|prefix| {
                    sparse_ops.iter().map(move |op| {
                        let mut next = prefix.clone();
                        next.push(op);
                        next
                    })
                })
                .collect();
        } else {
            for c in &mut choices {
                c.push(&id);
            }
        }
    }
    KrausSet::new(
        choices
            .into_iter()
            .map(|factors| kron_all(factors, Storage::Sparse))
            .collect(),
    )
}

fn apply_unchecked(k: &KrausSet, rho: &ComplexMatrix) -> ComplexMatrix {
    let dim = rho.rows();
    let storage = rho.storage();
    let mut acc = ComplexMatrix::zeros(dim, dim, storage);
    for op in &k.ops {
        let term = op.matmul(rho).and_then(|m| m.matmul(&op.dagger())).expect("dimensions checked");
        acc = &acc + &term.into_storage(storage);
    }
    acc
}

/// `ρ ↦ Σ Kᵢ ρ Kᵢ†`. The result keeps the storage of `rho`.
pub fn applychannel(k: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if k.dim() != rho.dim() {
        return Err(Error::dims(format!("{}-dimensional state", k.dim()), rho.dim()));
    }
    let deviation = k.completeness_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::InvalidChannel { deviation });
    }
    Ok(DensityMatrix::from_matrix_unchecked(apply_unchecked(k, rho.matrix())))
}

/// Applies a one-qubit channel independently to every qubit of `target`.
///
/// Equivalent to `applychannel(localchannel(k, target, n), rho)` but applies
/// the channel one qubit at a time, so the cost grows linearly with the
/// register size instead of as `|k|^|target|`.
pub fn apply_local(k: &KrausSet, target: &QuantumRegister, rho: &DensityMatrix) -> Result<DensityMatrix> {
    require_one_qubit(k)?;
    let deviation = k.completeness_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::InvalidChannel { deviation });
    }
    let n = rho.qubits();
    target.check_within(n)?;
    let mut m = rho.matrix().clone();
    for &q in target.qubits() {
        let embedded = KrausSet {
            ops: k.ops.iter().map(|op| embed(op, q, n)).collect(),
        };
        m = apply_unchecked(&embedded, &m);
    }
    Ok(DensityMatrix::from_matrix_unchecked(m))
}
