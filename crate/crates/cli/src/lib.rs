//! Command implementations behind the `qheap` binary.
//!
//! Everything writes to a caller-supplied sink so the commands can be driven
//! from tests without spawning a process.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use qheap::algorithms::{deutsch, grover, DeutschOracle, Noise, OracleSpec};
use qheap::{ChannelKind, ProbabilityDistribution, Session, Storage};

pub const MAX_SWEEP_QUBITS: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "qheap", version, about = "Density-matrix simulation of Deutsch and noisy Grover runs")]
pub struct Cli {
    /// Use the sparse matrix backend.
    #[arg(long, global = true)]
    pub sparse: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run Deutsch's algorithm with one of the four oracles.
    Deutsch {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        oracle: u8,
    },
    /// Run Grover search and print the output distribution.
    Grover(GroverArgs),
    /// Sweep noise strength and write success probabilities as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct GroverArgs {
    #[arg(long)]
    pub qubits: usize,
    #[arg(long)]
    pub target: usize,
    #[arg(long, requires = "p")]
    pub channel: Option<ChannelKind>,
    #[arg(long, requires = "channel")]
    pub p: Option<f64>,
    /// Also draw this many measurement outcomes.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub qubits: Vec<usize>,
    #[arg(long)]
    pub channel: ChannelKind,
    #[arg(long)]
    pub p_start: f64,
    #[arg(long)]
    pub p_end: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Failure classes, mapped to exit codes by the binary.
#[derive(Debug)]
pub enum CliError {
    /// Invalid arguments (exit 2).
    Usage(String),
    /// Simulation or I/O failure (exit 1).
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qheap::Error> for CliError {
    fn from(e: qheap::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Rounds to 12 significant digits, then prints the shortest representation
/// that reads back to the rounded value.
pub fn format_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0.0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("scientific literal");
    format!("{rounded:?}")
}

fn bitstring(index: usize, width: usize) -> String {
    format!("{index:0width$b}")
}

fn write_distribution(out: &mut dyn Write, dist: &ProbabilityDistribution, sep: &str) -> io::Result<()> {
    let width = dist.qubits();
    for (i, &p) in dist.probabilities().iter().enumerate() {
        writeln!(out, "{i}{sep}{}{sep}{}", bitstring(i, width), format_sig12(p))?;
    }
    Ok(())
}

pub fn cmd_deutsch(oracle: u8, storage: Storage, out: &mut dyn Write) -> CliResult<()> {
    let oracle = DeutschOracle::try_from(oracle).map_err(|e| CliError::Usage(e.to_string()))?;
    let dist = deutsch(oracle, storage)?;
    write_distribution(out, &dist, ", ")?;
    Ok(())
}

fn check_p(p: f64) -> CliResult<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::Usage(format!("p must lie in [0, 1], got {p}")));
    }
    Ok(())
}

pub fn cmd_grover(args: &GroverArgs, storage: Storage, out: &mut dyn Write) -> CliResult<()> {
    if args.qubits == 0 || args.qubits > qheap::session::MAX_QUBITS {
        return Err(CliError::Usage(format!(
            "--qubits must lie in 1..={}",
            qheap::session::MAX_QUBITS
        )));
    }
    let spec = OracleSpec::new(args.target, args.qubits).map_err(|e| CliError::Usage(e.to_string()))?;
    let noise = match (args.channel, args.p) {
        (Some(kind), Some(p)) => {
            check_p(p)?;
            Some(Noise::new(kind, p))
        }
        _ => None,
    };
    let mut session = Session::init(storage == Storage::Sparse, args.seed);
    let dist = grover(&spec, noise, &mut session)?;
    writeln!(out, "index,bitstring,probability")?;
    write_distribution(out, &dist, ",")?;
    writeln!(out, "success_prob={:.6}", dist.get(spec.marked()))?;
    if let Some(k) = args.samples {
        let mut counts = vec![0usize; dist.len()];
        for _ in 0..k {
            counts[session.collapse(&dist)] += 1;
        }
        writeln!(out, "index,count")?;
        for (i, c) in counts.iter().enumerate() {
            writeln!(out, "{i},{c}")?;
        }
    }
    Ok(())
}

/// A validated sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub qubit_sizes: Vec<usize>,
    pub channel: ChannelKind,
    pub p_start: f64,
    pub p_end: f64,
    pub steps: usize,
    pub storage: Storage,
    pub seed: Option<u64>,
}

impl SweepConfig {
    /// A single step needs `start == end`; more steps need `start < end`.
    pub fn validate(&self) -> CliResult<()> {
        if self.qubit_sizes.is_empty() {
            return Err(CliError::Usage("--qubits needs at least one size".into()));
        }
        if let Some(&n) = self
            .qubit_sizes
            .iter()
            .find(|&&n| n == 0 || n > MAX_SWEEP_QUBITS)
        {
            return Err(CliError::Usage(format!(
                "qubit size {n} outside 1..={MAX_SWEEP_QUBITS}"
            )));
        }
        check_p(self.p_start)?;
        check_p(self.p_end)?;
        match self.steps {
            0 => Err(CliError::Usage("--steps must be positive".into())),
            1 if self.p_start != self.p_end => Err(CliError::Usage(
                "a single step needs --p-start equal to --p-end".into(),
            )),
            s if s >= 2 && self.p_start >= self.p_end => Err(CliError::Usage(
                "--p-start must be below --p-end when --steps is at least 2".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Evenly spaced grid including both endpoints.
    pub fn grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.p_start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.p_end
                } else {
                    self.p_start + (self.p_end - self.p_start) * i as f64 / last
                }
            })
            .collect()
    }

    /// Rows ordered by qubit count in the given order, then by `p`.
    pub fn points(&self) -> Vec<(usize, f64)> {
        let grid = self.grid();
        self.qubit_sizes
            .iter()
            .flat_map(|&n| grid.iter().map(move |&p| (n, p)))
            .collect()
    }
}

/// One success probability per point, marked element 0. Points run in
/// parallel with independent sessions.
pub fn run_sweep(config: &SweepConfig) -> CliResult<Vec<(usize, f64, f64)>> {
    config.validate()?;
    let mut sizes = config.qubit_sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let ordered = SweepConfig {
        qubit_sizes: sizes,
        ..config.clone()
    };
    ordered
        .points()
        .into_par_iter()
        .map(|(n, p)| {
            let spec = OracleSpec::new(0, n)?;
            let mut session = Session::init(config.storage == Storage::Sparse, config.seed);
            let dist = grover(&spec, Some(Noise::new(config.channel, p)), &mut session)?;
            Ok((n, p, dist.get(0)))
        })
        .collect::<Result<Vec<_>, qheap::Error>>()
        .map_err(CliError::from)
}

pub fn sweep_csv(rows: &[(usize, f64, f64)]) -> String {
    let mut csv = String::from("qubits,p,success_prob\n");
    for &(n, p, s) in rows {
        csv.push_str(&format!("{n},{},{}\n", format_sig12(p), format_sig12(s)));
    }
    csv
}

pub fn cmd_sweep(args: &SweepArgs, storage: Storage, out: &mut dyn Write) -> CliResult<()> {
    let config = SweepConfig {
        qubit_sizes: args.qubits.clone(),
        channel: args.channel,
        p_start: args.p_start,
        p_end: args.p_end,
        steps: args.steps,
        storage,
        seed: args.seed,
    };
    let rows = run_sweep(&config)?;
    fs::write(&args.out, sweep_csv(&rows))
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", args.out.display())))?;
    writeln!(out, "wrote {} rows to {}", rows.len(), args.out.display())?;
    Ok(())
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let storage = Storage::from_sparse_flag(cli.sparse);
    match &cli.command {
        Command::Deutsch { oracle } => cmd_deutsch(*oracle, storage, out),
        Command::Grover(args) => cmd_grover(args, storage, out),
        Command::Sweep(args) => cmd_sweep(args, storage, out),
    }
}
