//! Quantum conditions: predicates over control registers, the if-then-else
//! gate constructor, and quantum pointers.
//!
//! A predicate ([`QExpr`]) is stored extensionally as the set of control
//! register values that satisfy it. The value of a control register in a basis
//! state weighs its qubits in ascending index order, lowest index first (least
//! significant), as [`qvalueof`] defines. This differs from the MSB-first
//! global basis indexing; [`QExpr::control_value`] is the only place the two
//! are reconciled.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{productgate, Gate};
use crate::matrix::{ComplexMatrix, Storage, ONE, ZERO};
use crate::register::{qubit_bit, QuantumRegister};

/// Integer value of the qubit subset `x` relative to register `r`: the sum of
/// `2^pos(q)` over `q ∈ x`, where `pos(q)` is the 0-based position of `q` in
/// ascending-sorted `r`.
///
/// ```
/// use qheap::{qcond::qvalueof, QuantumRegister};
/// let r = QuantumRegister::new(vec![2, 4, 7, 9]).unwrap();
/// assert_eq!(qvalueof(&[4, 9], &r).unwrap(), 10);
/// ```
pub fn qvalueof(x: &[usize], r: &QuantumRegister) -> Result<usize> {
    let sorted = r.sorted();
    x.iter().try_fold(0usize, |acc, q| {
        let pos = sorted
            .iter()
            .position(|s| s == q)
            .ok_or_else(|| Error::invalid(format!("qubit {q} is not in register {r}")))?;
        Ok(acc | (1 << pos))
    })
}

/// Predicate over the basis values of a control register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpr {
    control: QuantumRegister,
    satisfying: BTreeSet<usize>,
}

impl QExpr {
    /// `control` is stored in ascending order; every satisfying value must be
    /// below `2^|control|`.
    pub fn new(control: &QuantumRegister, satisfying: BTreeSet<usize>) -> Result<Self> {
        let control = QuantumRegister::new(control.sorted())?;
        let limit = 1usize << control.len();
        if let Some(&v) = satisfying.iter().find(|&&v| v >= limit) {
            return Err(Error::invalid(format!(
                "value {v} does not fit in a {}-qubit register",
                control.len()
            )));
        }
        Ok(QExpr {
            control,
            satisfying,
        })
    }

    pub fn control(&self) -> &QuantumRegister {
        &self.control
    }

    /// The satisfying-value set `T`.
    pub fn satisfying(&self) -> &BTreeSet<usize> {
        &self.satisfying
    }

    /// The complement set `F`.
    pub fn falsifying(&self) -> BTreeSet<usize> {
        (0..self.value_count())
            .filter(|v| !self.satisfying.contains(v))
            .collect()
    }

    fn value_count(&self) -> usize {
        1 << self.control.len()
    }

    pub fn is_always_true(&self) -> bool {
        self.satisfying.len() == self.value_count()
    }

    pub fn holds(&self, value: usize) -> bool {
        self.satisfying.contains(&value)
    }

    /// Logical negation: same control register, complementary value set.
    pub fn not(&self) -> QExpr {
        QExpr {
            control: self.control.clone(),
            satisfying: self.falsifying(),
        }
    }

    /// Value of the control register in global basis state `index` of an
    /// `n`-qubit system.
    pub fn control_value(&self, index: usize, n: usize) -> usize {
        self.control
            .qubits()
            .iter()
            .enumerate()
            .fold(0, |acc, (pos, &q)| acc | (qubit_bit(index, q, n) << pos))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Ne,
    Ge,
    Gt,
    Le,
    Lt,
}

impl Relation {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Ne => lhs != rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
        }
    }

    pub const ALL: [Relation; 6] = [
        Relation::Eq,
        Relation::Ne,
        Relation::Ge,
        Relation::Gt,
        Relation::Le,
        Relation::Lt,
    ];
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "eq" | "==" | "=" => Relation::Eq,
            "ne" | "!=" => Relation::Ne,
            "ge" | ">=" => Relation::Ge,
            "gt" | ">" => Relation::Gt,
            "le" | "<=" => Relation::Le,
            "lt" | "<" => Relation::Lt,
            _ => return Err(Error::invalid(format!("unknown relation `{s}`"))),
        })
    }
}

/// `[r] op n`.
pub fn qrel(op: Relation, r: &QuantumRegister, n: i64) -> QExpr {
    let satisfying = (0..1usize << r.len())
        .filter(|&v| op.holds(v as i64, n))
        .collect();
    QExpr::new(r, satisfying).expect("values enumerated within register range")
}

pub fn qreq(r: &QuantumRegister, n: i64) -> QExpr {
    qrel(Relation::Eq, r, n)
}

pub fn qrne(r: &QuantumRegister, n: i64) -> QExpr {
    qrel(Relation::Ne, r, n)
}

pub fn qrlt(r: &QuantumRegister, n: i64) -> QExpr {
    qrel(Relation::Lt, r, n)
}

pub fn qrle(r: &QuantumRegister, n: i64) -> QExpr {
    qrel(Relation::Le, r, n)
}

pub fn qrgt(r: &QuantumRegister, n: i64) -> QExpr {
    qrel(Relation::Gt, r, n)
}

pub fn qrge(r: &QuantumRegister, n: i64) -> QExpr {
    qrel(Relation::Ge, r, n)
}

/// Truth of a single qubit: holds when `qubit` is `|1⟩`.
pub fn qbit(qubit: usize) -> Result<QExpr> {
    Ok(qreq(&QuantumRegister::single(qubit)?, 1))
}

/// `[r] ∈ set`; values that do not fit in the register are ignored.
pub fn qrin(r: &QuantumRegister, set: impl IntoIterator<Item = usize>) -> QExpr {
    let limit = 1usize << r.len();
    let satisfying = set.into_iter().filter(|&v| v < limit).collect();
    QExpr::new(r, satisfying).expect("values filtered to register range")
}

fn combine(e1: &QExpr, e2: &QExpr, op: impl Fn(bool, bool) -> bool) -> Result<QExpr> {
    let joint = e1.control.union(&e2.control)?;
    // Position of each operand's qubits inside the joint ascending register.
    let positions = |e: &QExpr| -> Vec<usize> {
        e.control
            .qubits()
            .iter()
            .map(|q| joint.qubits().iter().position(|j| j == q).expect("qubit in union"))
            .collect()
    };
    let (p1, p2) = (positions(e1), positions(e2));
    let restrict = |value: usize, pos: &[usize]| -> usize {
        pos.iter()
            .enumerate()
            .fold(0, |acc, (k, &p)| acc | (((value >> p) & 1) << k))
    };
    let satisfying = (0..1usize << joint.len())
        .filter(|&v| op(e1.holds(restrict(v, &p1)), e2.holds(restrict(v, &p2))))
        .collect();
    QExpr::new(&joint, satisfying)
}

/// Conjunction over the union of two disjoint control registers.
pub fn qrand(e1: &QExpr, e2: &QExpr) -> Result<QExpr> {
    combine(e1, e2, |a, b| a && b)
}

/// Disjunction over the union of two disjoint control registers.
pub fn qror(e1: &QExpr, e2: &QExpr) -> Result<QExpr> {
    combine(e1, e2, |a, b| a || b)
}

/// Diagonal projector onto the basis states whose control value satisfies `keep`.
fn control_projector(
    control_value: impl Fn(usize) -> usize,
    keep: impl Fn(usize) -> bool,
    size: usize,
) -> ComplexMatrix {
    let diag: Vec<Complex64> = (0..1usize << size)
        .map(|x| if keep(control_value(x)) { ONE } else { ZERO })
        .collect();
    ComplexMatrix::from_diagonal(&diag, Storage::Dense)
}

/// Quantum if-then-else: in every control basis state whose value satisfies
/// `e`, the `ifpart` gate is applied to each qubit of its register; otherwise
/// the `elsepart` gate is applied to each qubit of its register.
///
/// The two branches may target different registers, but neither may overlap
/// the control register.
pub fn qif(
    e: &QExpr,
    ifpart: (&Gate, &QuantumRegister),
    elsepart: (&Gate, &QuantumRegister),
    size: usize,
) -> Result<Gate> {
    e.control.check_within(size)?;
    for (_, target) in [ifpart, elsepart] {
        target.check_within(size)?;
        e.control.check_disjoint(target)?;
    }
    let then_gate = productgate(ifpart.0, ifpart.1, size)?;
    let else_gate = productgate(elsepart.0, elsepart.1, size)?;
    let p_true = control_projector(|x| e.control_value(x, size), |v| e.holds(v), size);
    let p_false = &ComplexMatrix::identity(1 << size, Storage::Dense) - &p_true;
    let u = &(&p_true * then_gate.matrix()) + &(&p_false * else_gate.matrix());
    Ok(Gate::from_matrix_unchecked(u))
}

/// Quantum pointer: for control value `v`, `g` is applied to the target qubit
/// at ascending position `v`. Requires `|target| = 2^|control|`.
pub fn qpointer(
    g: &Gate,
    control: &QuantumRegister,
    target: &QuantumRegister,
    size: usize,
) -> Result<Gate> {
    control.check_within(size)?;
    target.check_within(size)?;
    control.check_disjoint(target)?;
    if target.len() != 1 << control.len() {
        return Err(Error::invalid(format!(
            "pointer with {} control qubits needs {} targets, got {}",
            control.len(),
            1usize << control.len(),
            target.len()
        )));
    }
    let addr = QExpr::new(control, BTreeSet::new())?;
    let targets = target.sorted();
    let dim = 1usize << size;
    let mut u = ComplexMatrix::zeros(dim, dim, Storage::Dense);
    for (v, &t) in targets.iter().enumerate() {
        let g_at = productgate(g, &QuantumRegister::single(t)?, size)?;
        let p = control_projector(|x| addr.control_value(x, size), |w| w == v, size);
        u = &u + &(&p * g_at.matrix());
    }
    Ok(Gate::from_matrix_unchecked(u))
}
