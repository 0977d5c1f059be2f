//! Density-matrix quantum simulation built around a quantum heap.
//!
//! A [`Session`] owns the global density matrix and a table of quantum
//! registers. Registers are allocated by tensoring fresh `|0…0⟩` qubits onto the
//! state and released by tracing them out. Gates are full-system unitaries
//! built from one-qubit gates and registers (product gates, multi-controlled
//! gates, quantum conditionals and pointers); noise is described by Kraus
//! channels.
//!
//! Conventions:
//!
//! * Qubits are numbered from 1. Qubit 1 is the leftmost tensor factor and the
//!   most significant bit of a basis-state index, so `|b₁b₂…bₙ⟩` has index
//!   `b₁·2ⁿ⁻¹ + … + bₙ`.
//! * Values of control registers used by quantum conditions weigh qubits the
//!   other way round: the lowest qubit index of a register is its least
//!   significant bit (see [`qcond::qvalueof`]).
//! * Every matrix can be stored densely or sparsely ([`Storage`]); both
//!   backends give the same results.
//!
//! ```
//! use qheap::{gates, Session};
//!
//! let mut s = Session::init(false, Some(7));
//! let r = s.newregister(2).unwrap();
//! let reg = s.qureg(r).unwrap();
//! s.evolve(&gates::productgate(&gates::hadamard(), &reg, 2).unwrap()).unwrap();
//! let p = s.measurecompbasis().unwrap();
//! assert!(p.probabilities().iter().all(|&x| (x - 0.25).abs() < 1e-12));
//! ```

pub mod algorithms;
pub mod analysis;
pub mod channels;
pub mod error;
pub mod gates;
pub mod matrix;
pub mod qcond;
pub mod register;
pub mod session;
pub mod states;

pub use channels::{ChannelKind, KrausSet};
pub use error::{Error, Result};
pub use gates::Gate;
pub use matrix::{ComplexMatrix, Storage};
pub use num_complex::Complex64;
pub use qcond::QExpr;
pub use register::QuantumRegister;
pub use session::{ProbabilityDistribution, RegisterId, Session};
pub use states::{Bra, DensityMatrix, Ket};

/// Entrywise tolerance for construction identities.
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Tolerance for Hermiticity, unitarity, trace and channel completeness.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-EIGEN_CLAMP_TOL, 0)` count as zero in PSD routines.
pub const EIGEN_CLAMP_TOL: f64 = 1e-10;
/// Allowed norm defect for a ket handed to [`states::state`].
pub const KET_NORM_TOL: f64 = 1e-8;
