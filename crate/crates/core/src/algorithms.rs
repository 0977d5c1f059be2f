//! Reference algorithms: the Fourier circuit, Deutsch, and (noisy) Grover.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::channels::{channel, ChannelKind};
use crate::error::{Error, Result};
use crate::gates::{circuit, cphase, flip, hadamard, identity, productgate, sx, Gate};
use crate::matrix::{ComplexMatrix, Storage, ONE};
use crate::qcond::{qif, qreq};
use crate::register::QuantumRegister;
use crate::session::{ProbabilityDistribution, Session};

/// Fourier transform as a circuit: for each qubit `i`, controlled phases
/// `π/2^{i−j}` from every earlier qubit `j`, then a Hadamard on `i`, and a
/// final qubit reversal.
pub fn dft(n: usize) -> Result<Gate> {
    dft_with_storage(n, Storage::Dense)
}

/// [`dft`] with every factor and partial product held in `storage`.
pub fn dft_with_storage(n: usize, storage: Storage) -> Result<Gate> {
    if n == 0 {
        return Err(Error::invalid("dft needs at least one qubit"));
    }
    let h = hadamard();
    let mut cir = identity(n).into_storage(storage);
    for i in 1..=n {
        for j in 1..i {
            let r = cphase(PI / f64::powi(2.0, (i - j) as i32), j, i, n)?;
            cir = circuit(&[cir, r.into_storage(storage)])?;
        }
        let hi = productgate(&h, &QuantumRegister::single(i)?, n)?;
        cir = circuit(&[cir, hi.into_storage(storage)])?;
    }
    circuit(&[cir, flip(n)?.into_storage(storage)])
}

/// The four two-qubit oracles used with Deutsch's algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeutschOracle {
    /// `f(x) = 0`, realised as the identity.
    Identity,
    /// `f(x) = 1`, an unconditional X on the second qubit.
    BitFlip,
    /// `f(x) = x`, X on the second qubit when the first is 1.
    Controlled,
    /// `f(x) = ¬x`, X on the second qubit when the first is 0.
    AntiControlled,
}

impl DeutschOracle {
    pub const ALL: [DeutschOracle; 4] = [
        DeutschOracle::Identity,
        DeutschOracle::BitFlip,
        DeutschOracle::Controlled,
        DeutschOracle::AntiControlled,
    ];

    pub fn id(self) -> u8 {
        match self {
            DeutschOracle::Identity => 1,
            DeutschOracle::BitFlip => 2,
            DeutschOracle::Controlled => 3,
            DeutschOracle::AntiControlled => 4,
        }
    }

    pub fn is_constant(self) -> bool {
        matches!(self, DeutschOracle::Identity | DeutschOracle::BitFlip)
    }

    /// The oracle gate on `r1 = {1}`, `r2 = {2}`.
    pub fn gate(self) -> Result<Gate> {
        let r1 = QuantumRegister::single(1)?;
        let r2 = QuantumRegister::single(2)?;
        let x = sx();
        let id1 = identity(1);
        match self {
            DeutschOracle::Identity => Ok(identity(2)),
            DeutschOracle::BitFlip => productgate(&x, &r2, 2),
            DeutschOracle::Controlled => qif(&qreq(&r1, 1), (&x, &r2), (&id1, &r2), 2),
            DeutschOracle::AntiControlled => qif(&qreq(&r1, 0), (&x, &r2), (&id1, &r2), 2),
        }
    }
}

impl TryFrom<u8> for DeutschOracle {
    type Error = Error;

    fn try_from(id: u8) -> Result<Self> {
        DeutschOracle::ALL
            .into_iter()
            .find(|o| o.id() == id)
            .ok_or_else(|| Error::invalid(format!("oracle id must be 1-4, got {id}")))
    }
}

impl FromStr for DeutschOracle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id: u8 = s
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("oracle id must be 1-4, got {s:?}")))?;
        DeutschOracle::try_from(id)
    }
}

impl fmt::Display for DeutschOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// Deutsch's algorithm. Returns the distribution of the first qubit after the
/// second has been traced out: `|0⟩` for a constant oracle, `|1⟩` otherwise.
pub fn deutsch(oracle: DeutschOracle, storage: Storage) -> Result<ProbabilityDistribution> {
    let mut s = Session::init(storage == Storage::Sparse, Some(0));
    let r1 = s.newregister(1)?;
    let r2 = s.newregister(1)?;
    let q1 = s.qureg(r1)?;
    let q2 = s.qureg(r2)?;
    let f = oracle.gate()?;
    let h = hadamard();
    s.evolve(&productgate(&sx(), &q2, 2)?)?;
    s.evolve(&productgate(&h, &q1.union(&q2)?, 2)?)?;
    s.evolve(&f)?;
    s.evolve(&productgate(&h, &q1, 2)?)?;
    s.clearregister(r2)?;
    s.measurecompbasis()
}

/// A single marked element `x₀` among `2ⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleSpec {
    marked: usize,
    n_qubits: usize,
}

impl OracleSpec {
    pub fn new(marked: usize, n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::invalid("oracle needs at least one qubit"));
        }
        if n_qubits >= usize::BITS as usize || marked >= 1 << n_qubits {
            return Err(Error::invalid(format!(
                "marked element {marked} out of range for {n_qubits} qubits"
            )));
        }
        Ok(OracleSpec { marked, n_qubits })
    }

    pub fn marked(&self) -> usize {
        self.marked
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }
}

/// Phase oracle `O|x⟩ = (−1)^{[x = x₀]}|x⟩`.
pub fn grover_oracle(spec: &OracleSpec) -> Gate {
    let diag: Vec<Complex64> = (0..spec.dim())
        .map(|x| if x == spec.marked { -ONE } else { ONE })
        .collect();
    Gate::from_matrix_unchecked(ComplexMatrix::from_diagonal(&diag, Storage::Dense))
}

/// Oracle in ancilla form, `|x⟩|q⟩ ↦ |x⟩|q ⊕ f(x)⟩`, with the ancilla as the
/// last qubit. With the ancilla in `|−⟩` it acts as [`grover_oracle`].
pub fn grover_ancilla_oracle(spec: &OracleSpec) -> Result<Gate> {
    let n = spec.n_qubits;
    let data = QuantumRegister::span(1, n)?;
    let anc = QuantumRegister::single(n + 1)?;
    // register values weight qubit 1 lowest, global indices weight it highest
    let value = (0..n).fold(0usize, |v, b| v | (((spec.marked >> b) & 1) << (n - 1 - b)));
    qif(
        &qreq(&data, value as i64),
        (&sx(), &anc),
        (&identity(1), &anc),
        n + 1,
    )
}

/// Inversion about the mean, `2|ψ⟩⟨ψ| − I`, built as `H^⊗n (2|0⟩⟨0| − I) H^⊗n`.
pub fn grover_diffusion(n: usize) -> Result<Gate> {
    let hn = productgate(&hadamard(), &QuantumRegister::span(1, n)?, n)?;
    let dim = 1usize << n;
    let diag: Vec<Complex64> = (0..dim).map(|x| if x == 0 { ONE } else { -ONE }).collect();
    let reflect = Gate::from_matrix_unchecked(ComplexMatrix::from_diagonal(&diag, Storage::Dense));
    circuit(&[hn.clone(), reflect, hn])
}

/// `⌊(π/4)√N⌋` with `N = 2ⁿ`.
pub fn iterations(n: usize) -> usize {
    let big_n = (1u64 << n) as f64;
    (PI / 4.0 * big_n.sqrt()).floor() as usize
}

/// Noise applied to every working qubit after each Grover iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Noise {
    pub kind: ChannelKind,
    pub p: f64,
}

impl Noise {
    pub fn new(kind: ChannelKind, p: f64) -> Self {
        Noise { kind, p }
    }
}

/// Grover search on a fresh register of `spec.n_qubits()` qubits in `session`,
/// which must be empty. Returns the final computational-basis distribution;
/// the success probability is its entry at the marked element.
pub fn grover(
    spec: &OracleSpec,
    noise: Option<Noise>,
    session: &mut Session,
) -> Result<ProbabilityDistribution> {
    if session.qubit_count() != 0 {
        return Err(Error::invalid("grover needs an empty session"));
    }
    let n = spec.n_qubits;
    let kraus = noise.map(|nz| channel(nz.kind, nz.p)).transpose()?;
    let id = session.newregister(n)?;
    let reg = session.qureg(id)?;
    session.evolve(&productgate(&hadamard(), &reg, n)?)?;
    let step = circuit(&[grover_oracle(spec), grover_diffusion(n)?])?
        .into_storage(session.storage());
    for _ in 0..iterations(n) {
        session.evolve(&step)?;
        if let Some(k) = &kraus {
            session.apply_local_channel(k, &reg)?;
        }
    }
    session.measurecompbasis()
}

/// Convenience: run [`grover`] in a fresh deterministic session and return
/// `P(x₀)`.
pub fn grover_success(spec: &OracleSpec, noise: Option<Noise>, storage: Storage) -> Result<f64> {
    let mut s = Session::init(storage == Storage::Sparse, Some(0));
    Ok(grover(spec, noise, &mut s)?.get(spec.marked))
}

/// Closed-form amplitudes after `k` iterations: `β_k = sin((2k+1)θ)` on the
/// marked element and `α_k = cos((2k+1)θ)/√(N−1)` elsewhere, `sin θ = 1/√N`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[allow(non_snake_case)]
pub struct GroverPrediction {
    pub n_qubits: usize,
    pub N: usize,
    pub theta: f64,
    pub k: usize,
    pub alpha_k: f64,
    pub beta_k: f64,
}

impl GroverPrediction {
    pub fn success_probability(&self) -> f64 {
        self.beta_k * self.beta_k
    }

    pub fn other_probability(&self) -> f64 {
        self.alpha_k * self.alpha_k
    }
}

#[allow(non_snake_case)]
pub fn grover_prediction(n: usize) -> Result<GroverPrediction> {
    if n == 0 || n >= 63 {
        return Err(Error::invalid(format!("qubit count {n} out of range")));
    }
    let N = 1usize << n;
    let theta = (1.0 / (N as f64).sqrt()).asin();
    let k = iterations(n);
    let angle = (2 * k + 1) as f64 * theta;
    Ok(GroverPrediction {
        n_qubits: n,
        N,
        theta,
        k,
        alpha_k: angle.cos() / ((N - 1) as f64).sqrt(),
        beta_k: angle.sin(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{isunitary, qft};
    use crate::session::ptrace;
    use crate::states::{ket, ketn, state, Ket};

    /// Plain state-vector Grover with the same iteration count.
    fn statevector_grover(n: usize, x0: usize) -> Vec<f64> {
        let dim = 1usize << n;
        let mut amp = vec![1.0 / (dim as f64).sqrt(); dim];
        for _ in 0..iterations(n) {
            amp[x0] = -amp[x0];
            let mean = amp.iter().sum::<f64>() / dim as f64;
            for a in amp.iter_mut() {
                *a = 2.0 * mean - *a;
            }
        }
        amp.iter().map(|a| a * a).collect()
    }

    #[test]
    fn dft_examples() {
        assert!(dft(1).unwrap().approx_eq(&hadamard(), 1e-12));
        for n in 1..=6 {
            let d = dft(n).unwrap();
            assert!(d.approx_eq(&qft(n).unwrap(), 1e-9), "n={n}");
            assert!(isunitary(d.matrix()).unwrap());
        }
        assert!(dft(0).is_err());
        let sparse = dft_with_storage(5, Storage::Sparse).unwrap();
        assert_eq!(sparse.matrix().storage(), Storage::Sparse);
        assert!(sparse.matrix().max_abs_diff(dft(5).unwrap().matrix()) < 1e-12);
    }

    #[test]
    fn deutsch_classifies_oracles() {
        for storage in [Storage::Dense, Storage::Sparse] {
            for o in DeutschOracle::ALL {
                let d = deutsch(o, storage).unwrap();
                let want = if o.is_constant() { [1.0, 0.0] } else { [0.0, 1.0] };
                assert_eq!(d.len(), 2);
                for (got, w) in d.probabilities().iter().zip(want) {
                    assert!((got - w).abs() < 1e-10, "{o} {storage:?}");
                }
            }
        }
        assert!(DeutschOracle::try_from(0).is_err());
        assert!("9".parse::<DeutschOracle>().is_err());
        assert_eq!("3".parse::<DeutschOracle>().unwrap(), DeutschOracle::Controlled);
    }

    #[test]
    fn deutsch_oracles_match_truth_tables() {
        // U_f |x, y⟩ = |x, y ⊕ f(x)⟩
        let tables: [(DeutschOracle, [u8; 2]); 4] = [
            (DeutschOracle::Identity, [0, 0]),
            (DeutschOracle::BitFlip, [1, 1]),
            (DeutschOracle::Controlled, [0, 1]),
            (DeutschOracle::AntiControlled, [1, 0]),
        ];
        for (o, f) in tables {
            let g = o.gate().unwrap();
            for x in 0..2u8 {
                for y in 0..2u8 {
                    let out = g.apply(&ket(&[x, y]).unwrap()).unwrap();
                    let want = ket(&[x, y ^ f[x as usize]]).unwrap();
                    assert!((out.inner(&want).unwrap().norm() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let o = grover_oracle(&OracleSpec::new(0, 1).unwrap());
        let want = ComplexMatrix::from_real_rows(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        assert!(o.matrix().approx_eq(&want, 0.0));
        let spec = OracleSpec::new(5, 3).unwrap();
        let o = grover_oracle(&spec);
        assert!(circuit(&[o.clone(), o.clone()]).unwrap().approx_eq(&identity(3), 0.0));
        for x in 0..8 {
            let out = o.apply(&ketn(x, 3).unwrap()).unwrap();
            let sign = if x == 5 { -1.0 } else { 1.0 };
            assert!((out.amplitudes()[x].re - sign).abs() < 1e-15);
        }
        assert!(OracleSpec::new(8, 3).is_err());
        assert!(OracleSpec::new(0, 0).is_err());
    }

    #[test]
    fn diffusion_examples() {
        for n in 1..=6 {
            let d = grover_diffusion(n).unwrap();
            assert!(isunitary(d.matrix()).unwrap());
            let dim = 1usize << n;
            let flat = Ket::from_real(&vec![1.0 / (dim as f64).sqrt(); dim]).unwrap();
            let out = d.apply(&flat).unwrap();
            // 2|ψ⟩⟨ψ| − I fixes |ψ⟩ with sign +1 for every n
            for (a, b) in out.amplitudes().iter().zip(flat.amplitudes()) {
                assert!((a - b).norm() < 1e-10, "n={n}");
            }
            let psi = flat.to_matrix(Storage::Dense);
            let direct = &(&psi * &psi.dagger()).scale_real(2.0) - &ComplexMatrix::identity(dim, Storage::Dense);
            assert!(d.matrix().approx_eq(&direct, 1e-10));
        }
    }

    #[test]
    fn diffusion_inverts_about_the_mean() {
        let input = [0.3, -0.1, 0.7, 0.2, -0.5, 0.05, 0.9, -0.25];
        let out = grover_diffusion(3)
            .unwrap()
            .apply(&Ket::from_real(&input).unwrap())
            .unwrap();
        let s = input.iter().sum::<f64>() / 8.0;
        for (o, a) in out.amplitudes().iter().zip(input) {
            assert!((o.re - (2.0 * s - a)).abs() < 1e-12);
            assert!(o.im.abs() < 1e-12);
        }
    }

    #[test]
    fn ancilla_oracle_matches_phase_oracle() {
        let n = 2;
        let minus = Ket::from_real(&[std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2]).unwrap();
        let data = Ket::new(vec![
            Complex64::new(0.5, 0.1),
            Complex64::new(-0.3, 0.4),
            Complex64::new(0.2, -0.6),
            Complex64::new(0.1, 0.0),
        ])
        .unwrap();
        let data = Ket::new(data.amplitudes().iter().map(|a| a / data.norm()).collect()).unwrap();
        for x0 in 0..4 {
            let spec = OracleSpec::new(x0, n).unwrap();
            let u = grover_ancilla_oracle(&spec).unwrap();
            assert!(isunitary(u.matrix()).unwrap());
            let out = u.apply(&data.kron(&minus)).unwrap();
            let reduced = ptrace(&state(&out).unwrap(), &QuantumRegister::single(n + 1).unwrap()).unwrap();
            let want = state(&grover_oracle(&spec).apply(&data).unwrap()).unwrap();
            assert!(reduced.matrix().approx_eq(want.matrix(), 1e-12), "x0={x0}");
        }
    }

    #[test]
    fn prediction_examples() {
        let p = grover_prediction(3).unwrap();
        assert_eq!(p.k, 2);
        assert_eq!(p.N, 8);
        assert!((p.success_probability() - 0.9453).abs() < 1e-4);
        for n in 1..=12 {
            let p = grover_prediction(n).unwrap();
            assert!((p.theta.sin() - 1.0 / (p.N as f64).sqrt()).abs() < 1e-12);
            let total = (p.N - 1) as f64 * p.other_probability() + p.success_probability();
            assert!((total - 1.0).abs() < 1e-9);
            assert_eq!(p.k, (PI / 4.0 * (p.N as f64).sqrt()).floor() as usize);
        }
        assert_eq!(
            (1..=6).map(iterations).collect::<Vec<_>>(),
            vec![1, 1, 2, 3, 4, 6]
        );
    }

    #[test]
    fn noiseless_grover_matches_formula_and_statevector() {
        for n in 1..=6 {
            let pred = grover_prediction(n).unwrap();
            let x0 = (1usize << n) - 1 - n % 2;
            let spec = OracleSpec::new(x0, n).unwrap();
            let mut s = Session::init(false, Some(1));
            let dist = grover(&spec, None, &mut s).unwrap();
            let sv = statevector_grover(n, x0);
            for (x, &p) in dist.probabilities().iter().enumerate() {
                assert!((p - sv[x]).abs() < 1e-9, "n={n} x={x}");
                let want = if x == x0 { pred.success_probability() } else { pred.other_probability() };
                assert!((p - want).abs() < 1e-9, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn single_qubit_grover_follows_brute_force() {
        for x0 in 0..2 {
            let p = grover_success(&OracleSpec::new(x0, 1).unwrap(), None, Storage::Dense).unwrap();
            assert!((p - statevector_grover(1, x0)[x0]).abs() < 1e-12);
            assert!((p - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn success_is_symmetric_in_marked_element() {
        let reference = grover_success(&OracleSpec::new(0, 3).unwrap(), None, Storage::Dense).unwrap();
        for x0 in 1..8 {
            let p = grover_success(&OracleSpec::new(x0, 3).unwrap(), None, Storage::Dense).unwrap();
            assert!((p - reference).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_noise_equals_noiseless() {
        let spec = OracleSpec::new(3, 3).unwrap();
        let mut s = Session::init(false, Some(0));
        let clean = grover(&spec, None, &mut s).unwrap();
        for kind in ChannelKind::ALL {
            let mut s = Session::init(false, Some(0));
            let noisy = grover(&spec, Some(Noise::new(kind, 0.0)), &mut s).unwrap();
            assert!(noisy.max_abs_diff(&clean) <= 1e-12, "{kind}");
        }
    }

    #[test]
    fn full_depolarizing_gives_uniform() {
        for n in 1..=4 {
            let spec = OracleSpec::new(1, n).unwrap();
            let p = grover_success(&spec, Some(Noise::new(ChannelKind::Depolarizing, 1.0)), Storage::Dense).unwrap();
            assert!((p - 1.0 / (1u64 << n) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn depolarizing_sweep_is_monotone() {
        for n in 3..=5 {
            let spec = OracleSpec::new(0, n).unwrap();
            let ps: Vec<f64> = (0..=20)
                .map(|i| {
                    let noise = Noise::new(ChannelKind::Depolarizing, i as f64 / 20.0);
                    grover_success(&spec, Some(noise), Storage::Dense).unwrap()
                })
                .collect();
            assert!(ps.windows(2).all(|w| w[1] <= w[0] + 1e-9), "n={n} {ps:?}");
        }
    }

    #[test]
    fn grover_requires_empty_session() {
        let mut s = Session::init(false, Some(0));
        s.newregister(1).unwrap();
        assert!(grover(&OracleSpec::new(0, 2).unwrap(), None, &mut s).is_err());
    }

    #[test]
    fn sparse_grover_matches_dense() {
        let spec = OracleSpec::new(6, 4).unwrap();
        let noise = Some(Noise::new(ChannelKind::AmplitudeDamping, 0.1));
        let dense = grover_success(&spec, noise, Storage::Dense).unwrap();
        let sparse = grover_success(&spec, noise, Storage::Sparse).unwrap();
        assert!((dense - sparse).abs() < 1e-10);
    }
}
