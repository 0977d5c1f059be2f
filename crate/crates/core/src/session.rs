//! The quantum heap: a global density matrix plus a table of registers.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{self, KrausSet};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::matrix::{ComplexMatrix, Storage};
use crate::register::{qubit_bit, QuantumRegister};
use crate::states::DensityMatrix;

/// Largest number of simultaneously allocated qubits.
pub const MAX_QUBITS: usize = 24;

/// Handle into a session's register table. Ids are never reused within a
/// session and stay valid when other registers are cleared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegisterId(usize);

impl RegisterId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for RegisterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

/// Outcome probabilities of a computational-basis measurement, indexed by
/// basis state (qubit 1 most significant).
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityDistribution {
    probabilities: Vec<f64>,
}

impl ProbabilityDistribution {
    /// Entries down to `-1e-12` are clamped to zero; the sum must be 1 within 1e-9.
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        let mut probabilities = probabilities;
        for p in &mut probabilities {
            if !p.is_finite() || *p < -1e-12 {
                return Err(Error::InvalidDistribution(format!("probability {p}")));
            }
            *p = p.max(0.0);
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(ProbabilityDistribution { probabilities })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.probabilities[index]
    }

    /// Number of qubits the outcomes range over.
    pub fn qubits(&self) -> usize {
        self.len().next_power_of_two().trailing_zeros() as usize
    }

    pub fn max_abs_diff(&self, other: &ProbabilityDistribution) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Draws a basis index with probability `P(i)`.
pub fn collapse<R: Rng + ?Sized>(dist: &ProbabilityDistribution, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_possible = 0;
    for (i, &p) in dist.probabilities.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last_possible = i;
            if u < acc {
                return i;
            }
        }
    }
    // u landed in the round-off gap above the cumulative sum.
    last_possible
}

/// Reduced density matrix with the `target` qubits traced out.
pub fn ptrace(rho: &DensityMatrix, target: &QuantumRegister) -> Result<DensityMatrix> {
    let n = rho.qubits();
    target.check_within(n)?;
    let kept: Vec<usize> = (1..=n).filter(|q| !target.contains(*q)).collect();
    let traced: Vec<usize> = target.sorted();
    let compress = |index: usize, qubits: &[usize]| -> usize {
        qubits
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | qubit_bit(index, q, n))
    };
    let dim = 1usize << kept.len();
    let m = rho.matrix().remap_entries(dim, dim, |i, j| {
        (compress(i, &traced) == compress(j, &traced)).then(|| (compress(i, &kept), compress(j, &kept)))
    });
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// Owns the simulated state and register table.
pub struct Session {
    state: DensityMatrix,
    registers: BTreeMap<RegisterId, QuantumRegister>,
    next_id: usize,
    qubit_count: usize,
    storage: Storage,
    seed: Option<u64>,
    rng: ChaCha8Rng,
}

impl fmt::Debug for Session {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Session")
            .field("qubit_count", &self.qubit_count)
            .field("registers", &self.registers)
            .field("storage", &self.storage)
            .field("seed", &self.seed)
            .finish()
    }
}

impl Session {
    /// Empty session: no qubits, no registers, state `[1]`.
    ///
    /// With a seed, every [`Session::collapse`] sequence is reproducible.
    pub fn init(sparse: bool, seed: Option<u64>) -> Session {
        let storage = Storage::from_sparse_flag(sparse);
        let rng = match seed {
            Some(s) => ChaCha8Rng::seed_from_u64(s),
            None => ChaCha8Rng::from_os_rng(),
        };
        Session {
            state: DensityMatrix::empty(storage),
            registers: BTreeMap::new(),
            next_id: 0,
            qubit_count: 0,
            storage,
            seed,
            rng,
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn storage(&self) -> Storage {
        self.storage
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn registers(&self) -> impl Iterator<Item = (RegisterId, &QuantumRegister)> {
        self.registers.iter().map(|(&id, r)| (id, r))
    }

    /// Appends `size` qubits in `|0…0⟩` at the highest indices.
    pub fn newregister(&mut self, size: usize) -> Result<RegisterId> {
        if size == 0 {
            return Err(Error::invalid("register size must be positive"));
        }
        if self.qubit_count + size > MAX_QUBITS {
            return Err(Error::invalid(format!(
                "allocating {size} qubits would exceed {MAX_QUBITS}"
            )));
        }
        let dim = 1usize << size;
        let fresh = ComplexMatrix::from_triplets(dim, dim, self.storage, [(0, 0, crate::matrix::ONE)]);
        let next = self.state.matrix().kron(&fresh);
        self.state = DensityMatrix::from_matrix_unchecked(next);
        let reg = QuantumRegister::span(self.qubit_count + 1, size)?;
        self.qubit_count += size;
        let id = RegisterId(self.next_id);
        self.next_id += 1;
        self.registers.insert(id, reg);
        Ok(id)
    }

    /// Traces the register out and renumbers the remaining qubits
    /// contiguously, preserving their order.
    pub fn clearregister(&mut self, id: RegisterId) -> Result<()> {
        let reg = self.registers.remove(&id).ok_or(Error::UnknownRegister(id.0))?;
        self.state = ptrace(&self.state, &reg)?;
        self.qubit_count -= reg.len();
        let removed = reg.sorted();
        let shift = |q: usize| q - removed.iter().filter(|&&r| r < q).count();
        for r in self.registers.values_mut() {
            *r = r.relabel(shift)?;
        }
        Ok(())
    }

    /// `ρ ↦ UρU†` for a gate on the whole system.
    pub fn evolve(&mut self, u: &Gate) -> Result<()> {
        if u.size() != self.qubit_count {
            return Err(Error::dims(
                format!("{}-qubit gate", self.qubit_count),
                format!("{}-qubit gate", u.size()),
            ));
        }
        let u = u.matrix().to_storage(self.storage);
        let next = self.state.matrix().conjugate_by(&u)?;
        self.state = DensityMatrix::from_matrix_unchecked(next.into_storage(self.storage));
        Ok(())
    }

    /// `ρ ↦ Σ KᵢρKᵢ†` for a channel on the whole system.
    pub fn applychannel(&mut self, k: &KrausSet) -> Result<()> {
        let next = channels::applychannel(k, &self.state)?;
        self.state = next.into_storage(self.storage);
        Ok(())
    }

    /// Applies a one-qubit channel to every qubit of `target`.
    pub fn apply_local_channel(&mut self, k: &KrausSet, target: &QuantumRegister) -> Result<()> {
        let next = channels::apply_local(k, target, &self.state)?;
        self.state = next.into_storage(self.storage);
        Ok(())
    }

    /// Computational-basis measurement. Returns `P(i) = ρᵢᵢ` and replaces the
    /// state by its dephased form `Σ |i⟩⟨i|ρ|i⟩⟨i|`.
    pub fn measurecompbasis(&mut self) -> Result<ProbabilityDistribution> {
        if self.qubit_count == 0 {
            return Err(Error::EmptySession);
        }
        let diag = self.state.matrix().diagonal();
        let dist = ProbabilityDistribution::new(diag.iter().map(|d| d.re).collect())?;
        let dephased: Vec<_> = dist
            .probabilities()
            .iter()
            .map(|&p| num_complex::Complex64::new(p, 0.0))
            .collect();
        self.state = DensityMatrix::from_matrix_unchecked(ComplexMatrix::from_diagonal(&dephased, self.storage));
        Ok(dist)
    }

    /// Draws a basis index from `dist` with the session's generator.
    pub fn collapse(&mut self, dist: &ProbabilityDistribution) -> usize {
        collapse(dist, &mut self.rng)
    }

    /// Copy of the current state.
    pub fn getstate(&self) -> DensityMatrix {
        self.state.clone()
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn qureg(&self, id: RegisterId) -> Result<QuantumRegister> {
        self.registers.get(&id).cloned().ok_or(Error::UnknownRegister(id.0))
    }

    /// Switches the storage backend; the state is converted in place.
    pub fn set_sparse(&mut self, on: bool) {
        self.storage = Storage::from_sparse_flag(on);
        let state = std::mem::replace(&mut self.state, DensityMatrix::empty(self.storage));
        self.state = state.into_storage(self.storage);
    }

    /// Checks every session invariant.
    pub fn validate(&self) -> Result<()> {
        if self.state.dim() != 1 << self.qubit_count {
            return Err(Error::dims(1usize << self.qubit_count, self.state.dim()));
        }
        if self.state.storage() != self.storage {
            return Err(Error::invalid("state storage differs from session backend"));
        }
        let mut seen = QuantumRegister::empty();
        for reg in self.registers.values() {
            reg.check_within(self.qubit_count)?;
            seen = seen.union(reg)?;
        }
        self.state.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{channel, localchannel, ChannelKind};
    use crate::gates::{hadamard, identity, productgate, rot, Pauli};
    use crate::states::{bell, ket, maximallymixed, state, BellState};

    fn reg(q: &[usize]) -> QuantumRegister {
        QuantumRegister::new(q.to_vec()).unwrap()
    }

    fn dist(p: &[f64]) -> ProbabilityDistribution {
        ProbabilityDistribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn init_examples() {
        for sparse in [false, true] {
            let s = Session::init(sparse, Some(1));
            assert_eq!(s.getstate().dim(), 1);
            assert_eq!(s.getstate().get(0, 0), crate::matrix::ONE);
            assert_eq!(s.qubit_count(), 0);
            s.validate().unwrap();
        }
        let d = dist(&[0.1, 0.2, 0.3, 0.4]);
        let mut a = Session::init(false, Some(42));
        let mut b = Session::init(true, Some(42));
        let xs: Vec<usize> = (0..50).map(|_| a.collapse(&d)).collect();
        let ys: Vec<usize> = (0..50).map(|_| b.collapse(&d)).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn newregister_examples() {
        let mut s = Session::init(false, None);
        let r = s.newregister(2).unwrap();
        assert!(s.getstate().matrix().approx_eq(state(&ket(&[0, 0]).unwrap()).unwrap().matrix(), 0.0));
        assert_eq!(s.qureg(r).unwrap(), reg(&[1, 2]));

        let mut s = Session::init(true, None);
        let a = s.newregister(1).unwrap();
        let b = s.newregister(1).unwrap();
        assert!(s.getstate().matrix().approx_eq(state(&ket(&[0, 0]).unwrap()).unwrap().matrix(), 0.0));
        assert_eq!(s.qureg(a).unwrap(), reg(&[1]));
        assert_eq!(s.qureg(b).unwrap(), reg(&[2]));
        assert!((s.getstate().trace() - 1.0).abs() < 1e-15);
        s.validate().unwrap();
        assert!(s.newregister(0).is_err());
    }

    #[test]
    fn clearregister_examples() {
        // Bell pair, drop qubit 2.
        let mut s = Session::init(false, None);
        let a = s.newregister(1).unwrap();
        let b = s.newregister(1).unwrap();
        let cnot = crate::gates::controlledgate(&crate::gates::sx(), &reg(&[1]), &reg(&[2]), 2).unwrap();
        s.evolve(&productgate(&hadamard(), &reg(&[1]), 2).unwrap()).unwrap();
        s.evolve(&cnot).unwrap();
        assert!(s.getstate().matrix().approx_eq(state(&bell(BellState::PhiPlus)).unwrap().matrix(), 1e-15));
        s.clearregister(b).unwrap();
        assert!(s.getstate().matrix().approx_eq(maximallymixed(2).unwrap().matrix(), 1e-15));
        s.clearregister(a).unwrap();
        assert_eq!(s.getstate().dim(), 1);
        assert!((s.getstate().get(0, 0).re - 1.0).abs() < 1e-15);
        assert_eq!(s.qubit_count(), 0);
        assert_eq!(s.clearregister(a), Err(Error::UnknownRegister(a.index())));
    }

    #[test]
    fn clearing_renumbers_remaining_registers() {
        let mut s = Session::init(false, None);
        let a = s.newregister(1).unwrap();
        let b = s.newregister(2).unwrap();
        let c = s.newregister(1).unwrap();
        // put A into |1⟩ and C into |+⟩ so the marginals are distinguishable
        s.evolve(&productgate(&crate::gates::sx(), &reg(&[1]), 4).unwrap()).unwrap();
        s.evolve(&productgate(&hadamard(), &reg(&[4]), 4).unwrap()).unwrap();
        let before_a = ptrace(&s.getstate(), &reg(&[2, 3, 4])).unwrap();
        s.clearregister(b).unwrap();
        assert_eq!(s.qureg(a).unwrap(), reg(&[1]));
        assert_eq!(s.qureg(c).unwrap(), reg(&[2]));
        let after_a = ptrace(&s.getstate(), &reg(&[2])).unwrap();
        assert!(before_a.matrix().approx_eq(after_a.matrix(), 1e-15));
        s.validate().unwrap();
    }

    #[test]
    fn evolve_examples() {
        let mut s = Session::init(false, None);
        let r = s.newregister(1).unwrap();
        let before = s.getstate();
        s.evolve(&identity(1)).unwrap();
        assert_eq!(s.getstate(), before);
        s.evolve(&productgate(&hadamard(), &s.qureg(r).unwrap(), 1).unwrap()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((s.getstate().get(i, j).re - 0.5).abs() < 1e-15);
            }
        }
        let mut mixed = Session::init(false, None);
        mixed.newregister(2).unwrap();
        mixed.applychannel(&localchannel(&channel(ChannelKind::Depolarizing, 0.4).unwrap(), &reg(&[1]), 2).unwrap()).unwrap();
        let purity = mixed.getstate().purity();
        mixed.evolve(&productgate(&rot(Pauli::Y, 0.9), &reg(&[1, 2]), 2).unwrap()).unwrap();
        assert!((mixed.getstate().purity() - purity).abs() < 1e-12);
        assert!(s.evolve(&identity(2)).is_err());
    }

    #[test]
    fn ptrace_examples() {
        let phip = state(&bell(BellState::PhiPlus)).unwrap();
        assert!(ptrace(&phip, &reg(&[2])).unwrap().matrix().approx_eq(maximallymixed(2).unwrap().matrix(), 1e-15));

        let a = state(&Ket::from_real(&[0.6, 0.8]).unwrap()).unwrap();
        let b = crate::states::wernersinglet(0.4).unwrap();
        let ab = a.kron(&b);
        assert!(ptrace(&ab, &reg(&[2, 3])).unwrap().matrix().approx_eq(a.matrix(), 1e-15));
        assert!(ptrace(&ab, &reg(&[1])).unwrap().matrix().approx_eq(b.matrix(), 1e-15));
        assert!((ptrace(&ab, &reg(&[3])).unwrap().trace() - 1.0).abs() < 1e-15);

        let sparse = ab.clone().into_storage(Storage::Sparse);
        let r = ptrace(&sparse, &reg(&[2])).unwrap();
        assert_eq!(r.storage(), Storage::Sparse);
        assert!(r.matrix().approx_eq(ptrace(&ab, &reg(&[2])).unwrap().matrix(), 1e-15));
        assert!(ptrace(&ab, &reg(&[4])).is_err());
    }

    use crate::states::Ket;

    #[test]
    fn measure_examples() {
        let mut s = Session::init(false, None);
        s.newregister(2).unwrap();
        assert_eq!(s.measurecompbasis().unwrap(), dist(&[1.0, 0.0, 0.0, 0.0]));

        let mut s = Session::init(true, None);
        s.newregister(1).unwrap();
        s.newregister(1).unwrap();
        s.evolve(&productgate(&hadamard(), &reg(&[1]), 2).unwrap()).unwrap();
        s.evolve(&crate::gates::controlledgate(&crate::gates::sx(), &reg(&[1]), &reg(&[2]), 2).unwrap())
            .unwrap();
        let p = s.measurecompbasis().unwrap();
        assert!(p.max_abs_diff(&dist(&[0.5, 0.0, 0.0, 0.5])) < 1e-12);
        assert!((p.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let dephased = s.getstate();
        assert_eq!(dephased.get(0, 3).norm(), 0.0);
        assert_eq!(s.measurecompbasis().unwrap(), p);
        assert_eq!(s.getstate(), dephased);

        assert_eq!(Session::init(false, None).measurecompbasis(), Err(Error::EmptySession));
    }

    #[test]
    fn collapse_examples() {
        let mut s = Session::init(false, Some(9));
        let sure = dist(&[1.0, 0.0, 0.0, 0.0]);
        assert!((0..100).all(|_| s.collapse(&sure) == 0));
        let one = dist(&[0.0, 1.0]);
        assert!((0..100).all(|_| s.collapse(&one) == 1));

        let bell = dist(&[0.5, 0.0, 0.0, 0.5]);
        let draws = 100_000;
        let zeros = (0..draws).filter(|_| s.collapse(&bell) == 0).count();
        let freq = zeros as f64 / draws as f64;
        assert!((freq - 0.5).abs() < 0.01, "{freq}");
    }

    #[test]
    fn distribution_validation() {
        assert!(ProbabilityDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityDistribution::new(vec![1.1, -0.1]).is_err());
        assert_eq!(dist(&[1.0, -1e-13]).get(1), 0.0);
        assert!(ProbabilityDistribution::new(vec![]).is_err());
    }

    #[test]
    fn alloc_then_free_is_a_no_op() {
        let mut s = Session::init(false, None);
        s.newregister(2).unwrap();
        s.evolve(&productgate(&rot(Pauli::X, 0.7), &reg(&[1, 2]), 2).unwrap()).unwrap();
        let before = s.getstate();
        let tmp = s.newregister(3).unwrap();
        s.clearregister(tmp).unwrap();
        assert!(s.getstate().matrix().approx_eq(before.matrix(), 1e-12));
    }

    #[test]
    fn set_sparse_converts_state() {
        let mut s = Session::init(false, None);
        s.newregister(2).unwrap();
        s.evolve(&productgate(&hadamard(), &reg(&[1]), 2).unwrap()).unwrap();
        let dense = s.getstate();
        s.set_sparse(true);
        assert_eq!(s.getstate().storage(), Storage::Sparse);
        assert!(s.getstate().matrix().approx_eq(dense.matrix(), 0.0));
        s.validate().unwrap();
    }
}
