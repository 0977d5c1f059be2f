//! Quantum registers: ordered sets of distinct 1-based qubit indices.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QuantumRegister {
    qubits: Vec<usize>,
}

impl QuantumRegister {
    pub fn new(qubits: Vec<usize>) -> Result<Self> {
        for (k, &q) in qubits.iter().enumerate() {
            if q == 0 {
                return Err(Error::invalid("qubit indices start at 1"));
            }
            if qubits[..k].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(QuantumRegister { qubits })
    }

    pub fn empty() -> Self {
        QuantumRegister::default()
    }

    pub fn single(qubit: usize) -> Result<Self> {
        Self::new(vec![qubit])
    }

    /// `len` consecutive qubits starting at `first`.
    pub fn span(first: usize, len: usize) -> Result<Self> {
        Self::new((first..first + len).collect())
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn contains(&self, qubit: usize) -> bool {
        self.qubits.contains(&qubit)
    }

    /// Qubits in ascending order.
    pub fn sorted(&self) -> Vec<usize> {
        let mut q = self.qubits.clone();
        q.sort_unstable();
        q
    }

    pub fn check_within(&self, size: usize) -> Result<()> {
        match self.qubits.iter().find(|&&q| q > size) {
            Some(&index) => Err(Error::QubitOutOfRange { index, size }),
            None => Ok(()),
        }
    }

    pub fn check_disjoint(&self, other: &QuantumRegister) -> Result<()> {
        match self.qubits.iter().find(|q| other.contains(**q)) {
            Some(&q) => Err(Error::OverlappingRegisters(q)),
            None => Ok(()),
        }
    }

    /// Ascending union of two disjoint registers.
    pub fn union(&self, other: &QuantumRegister) -> Result<QuantumRegister> {
        self.check_disjoint(other)?;
        let mut q: Vec<usize> = self.qubits.iter().chain(&other.qubits).copied().collect();
        q.sort_unstable();
        Ok(QuantumRegister { qubits: q })
    }

    /// Register with every qubit relabelled through `map` (1-based in, 1-based out).
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Result<QuantumRegister> {
        QuantumRegister::new(self.qubits.iter().map(|&q| map(q)).collect())
    }
}

impl fmt::Display for QuantumRegister {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, q) in self.qubits.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}

impl TryFrom<&[usize]> for QuantumRegister {
    type Error = Error;

    fn try_from(qubits: &[usize]) -> Result<Self> {
        QuantumRegister::new(qubits.to_vec())
    }
}

impl<const N: usize> TryFrom<[usize; N]> for QuantumRegister {
    type Error = Error;

    fn try_from(qubits: [usize; N]) -> Result<Self> {
        QuantumRegister::new(qubits.to_vec())
    }
}

/// Value (0 or 1) of `qubit` in the basis state `index` of an `n`-qubit system.
#[inline]
pub fn qubit_bit(index: usize, qubit: usize, n: usize) -> usize {
    (index >> (n - qubit)) & 1
}

/// Bit mask selecting `qubit` in basis-state indices of an `n`-qubit system.
#[inline]
pub fn qubit_mask(qubit: usize, n: usize) -> usize {
    1 << (n - qubit)
}

/// `log2(dim)` when `dim` is a power of two.
pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim.is_power_of_two() {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(Error::NotPowerOfTwo(dim))
    }
}
