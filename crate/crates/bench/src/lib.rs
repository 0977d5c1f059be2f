//! Fixtures shared by the criterion benchmarks.

use qheap::gates::{hadamard, productgate, rot, Pauli};
use qheap::{DensityMatrix, Gate, QuantumRegister, Session, Storage};

/// A mixed `n`-qubit state: Hadamards and Y rotations on `|0…0⟩`, followed by
/// partial depolarizing so the matrix is dense.
pub fn mixed_state(n: usize, storage: Storage) -> DensityMatrix {
    let mut s = Session::init(storage == Storage::Sparse, Some(0));
    s.newregister(n).expect("register");
    s.evolve(&layer(n)).expect("evolve");
    let k = qheap::channels::channel(qheap::ChannelKind::Depolarizing, 0.1).expect("channel");
    s.apply_local_channel(&k, &QuantumRegister::span(1, n).expect("span")).expect("noise");
    s.getstate()
}

/// One layer of single-qubit gates over all `n` qubits.
pub fn layer(n: usize) -> Gate {
    let all = QuantumRegister::span(1, n).expect("span");
    let h = productgate(&hadamard(), &all, n).expect("h");
    let ry = productgate(&rot(Pauli::Y, 0.3), &all, n).expect("ry");
    qheap::gates::circuit(&[h, ry]).expect("circuit")
}
