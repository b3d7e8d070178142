//! Command-line front end. Every report is JSON unless `--text` is given.
//!
//! Exit codes: 0 success, 1 user error, 2 internal invariant violation,
//! 3 a checked property fails (e.g. not universal, golden mismatch).

mod commands;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cqca::CqcaError;
use crate::mbqc::MbqcError;
use crate::pauli::PauliError;
use crate::polyring::PolyError;
use crate::stabilizer::StabilizerError;
use crate::symmetry::{CellKind, SymmetryError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USER: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_PROPERTY: i32 = 3;

/// Environment variable overriding the bundled fixture directory.
pub const FIXTURES_ENV: &str = "CQCA_FIXTURES";

const PRESET_HELP: &str = "\
Presets (rows of the 2x2 matrix over F2[u, u^-1]):
  Tg  [[u^-1+u, 1], [1, 0]]      cluster-state automaton, glider
  Tf  [[u^-1+1+u, 1], [1, 0]]    fractal
  Tp  [[0, 1], [1, 0]]           Hadamard on every site, periodic
  Te  [[1, 0], [u^-1+u, 1]]      two-qubit cell, period 2
A spec may also be `trace=<poly>`, inline JSON {\"trace\": ...} or
{\"matrix\": [[..],[..]]}, or a path to such a JSON file.";

#[derive(Debug, Parser)]
#[command(name = "cqca", version, about = "Clifford quantum cellular automata toolkit", after_help = PRESET_HELP)]
pub struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SpecArg {
    /// Preset name, `trace=<poly>`, inline JSON or a JSON file.
    #[arg(long)]
    pub cqca: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Class, trace and entangling/simple flags.
    Classify {
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Period L for even ring sizes up to Nmax.
    Period {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long = "Nmax", alias = "nmax")]
        nmax: usize,
        /// Compare against the bundled period table.
        #[arg(long)]
        golden: bool,
        /// Fixture directory (default: bundled; also `CQCA_FIXTURES`).
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Draw the symmetry pattern generated by a seed.
    Render {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(short = 'N')]
        n: usize,
        /// Seed Pauli, e.g. `Z0` or `X1 Z2`.
        #[arg(long, default_value = "Z0")]
        seed: String,
        #[arg(long, default_value = "one")]
        cell: CellKind,
        /// ascii, pbm or json.
        #[arg(long, default_value = "ascii")]
        format: String,
    },
    /// Stabilizer generators of the fixed-point state on an N x M torus.
    Stabilizers {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(short = 'N')]
        n: usize,
        #[arg(short = 'M')]
        m: usize,
        #[arg(long, default_value = "one")]
        cell: CellKind,
        /// Check commutation, independence and locality instead.
        #[arg(long)]
        verify: bool,
        /// text, json or hamiltonian.
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// All gate generators T^{L-l+1}(P_i).
    Gates {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(short = 'N')]
        n: usize,
        #[arg(long, default_value = "one")]
        cell: CellKind,
    },
    /// Whether the generators close to the full logical algebra.
    Universality {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(short = 'N')]
        n: usize,
        #[arg(long, default_value = "one")]
        cell: CellKind,
    },
    /// Emit a measurement pattern for one rotation.
    Compile(CompileArgs),
    /// Contract a pattern on a state and check it to first order.
    Simulate {
        #[arg(long)]
        pattern: PathBuf,
        /// fixed, perturbed:<eps>:<seed> or zero-overlap.
        #[arg(long, default_value = "fixed")]
        state: String,
        /// Full report: nu, frames and buffer decay.
        #[arg(long)]
        report: bool,
        /// Rescale the tilt by the state's nu before contracting.
        #[arg(long)]
        rescale: bool,
        /// Draw outcomes with this RNG seed instead of reading the pattern.
        #[arg(long)]
        sample: Option<u64>,
    },
    /// Evolve a Pauli string by the automaton.
    Apply {
        #[command(flatten)]
        spec: SpecArg,
        /// Pauli string, e.g. `Z0 @N=8`.
        #[arg(long)]
        pauli: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Lie closure of Pauli generators under commutators.
    Closure {
        /// Generators, e.g. `--pauli "X0 @N=2" --pauli "Z0 Z1 @N=2"`.
        #[arg(long, required = true)]
        pauli: Vec<String>,
    },
    /// Measurements per gate of two automata on the same ring.
    Speedup {
        #[arg(long, default_value = "Te")]
        fast: String,
        #[arg(long, default_value = "two")]
        fast_cell: CellKind,
        #[arg(long, default_value = "Tg")]
        slow: String,
        #[arg(long, default_value = "one")]
        slow_cell: CellKind,
        #[arg(short = 'N')]
        n: usize,
        #[arg(long, default_value_t = 0)]
        buffers: usize,
    },
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    #[arg(short = 'N')]
    pub n: usize,
    #[arg(long, default_value = "one")]
    pub cell: CellKind,
    /// Tilted site (with --row).
    #[arg(long, requires = "row")]
    pub site: Option<usize>,
    /// Block row l in 1..=L.
    #[arg(long, requires = "site")]
    pub row: Option<usize>,
    /// Seed letter at the tilted site: Z (qubit a) or X (qubit b).
    #[arg(long, default_value = "Z")]
    pub letter: char,
    /// Target generator on the full ring, e.g. `X0 Z1 X2 @N=4`.
    #[arg(long, conflicts_with_all = ["site", "logical"])]
    pub pauli: Option<String>,
    /// Target on the logical qubits of the entangling layout.
    #[arg(long, conflicts_with = "site")]
    pub logical: Option<String>,
    #[arg(long)]
    pub angle: f64,
    #[arg(long, default_value_t = 0)]
    pub buffers: usize,
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
}

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    PropertyFails,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => EXIT_OK,
            Status::PropertyFails => EXIT_PROPERTY,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn user(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USER,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<CqcaError> for CliError {
    fn from(e: CqcaError) -> Self {
        CliError::user(e.to_string())
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::user(e.to_string())
    }
}

impl From<PauliError> for CliError {
    fn from(e: PauliError) -> Self {
        match e {
            PauliError::Internal(_) => CliError::internal(e.to_string()),
            _ => CliError::user(e.to_string()),
        }
    }
}

impl From<SymmetryError> for CliError {
    fn from(e: SymmetryError) -> Self {
        match e {
            SymmetryError::Pauli(p) => p.into(),
            other => CliError::user(other.to_string()),
        }
    }
}

impl From<StabilizerError> for CliError {
    fn from(e: StabilizerError) -> Self {
        CliError::user(e.to_string())
    }
}

impl From<MbqcError> for CliError {
    fn from(e: MbqcError) -> Self {
        match e {
            MbqcError::Pauli(p) => p.into(),
            other => CliError::user(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::user(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing the report to `out` unless `--out` names a file.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<Status, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    write!(out, "{e}")?;
                    Ok(Status::Ok)
                }
                _ => Err(CliError::user(e.to_string())),
            };
        }
    };
    let mut buf = Vec::new();
    let status = commands::dispatch(&cli, &mut buf)?;
    match &cli.out {
        Some(path) => std::fs::write(path, &buf)
            .map_err(|e| CliError::user(format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(&buf)?,
    }
    Ok(status)
}

/// Entry point for the binary: returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(args, &mut lock) {
        Ok(s) => s.code(),
        Err(e) => {
            eprintln!("error: {}", e.message.trim_end());
            e.code
        }
    }
}
