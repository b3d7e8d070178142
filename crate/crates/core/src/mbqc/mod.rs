//! Measurement-based computation on the fixed-point states: gate
//! generators, logical layouts, universality, measurement patterns and
//! exact contraction of the virtual space.

pub mod accounting;
pub mod gates;
pub mod layout;
pub mod linalg;
pub mod pattern;
pub mod simulate;
pub mod state;

use thiserror::Error;

use crate::cqca::CqcaError;
use crate::pauli::PauliError;

pub use accounting::{measurements_per_gate, period_for_computation, speedup, ComputationPeriod, SpeedupReport};
pub use gates::{all_generators, gate_generator, GateGenerator};
pub use layout::{entangling_layout, universality_check, LogicalLayout, UniversalityReport};
pub use pattern::{compile_rotation, GateRequest, MeasurementPattern, TiltSite};
pub use simulate::{
    predict_byproduct, sample_outcomes, simulate_pattern, verify_first_order, FirstOrderReport,
    VirtualOperator,
};
pub use state::{estimate_nu, gap_ratio, oblivious_wire, Junk, NuReport, PhaseState, Sub, WireReport};

#[derive(Debug, Error)]
pub enum MbqcError {
    #[error("row l = {l} out of range 1..={period}")]
    RowOutOfRange { l: usize, period: usize },
    #[error("automaton is not entangling; no two-qubit gate can be built")]
    NotEntangling,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("generator {target} is not reachable; nearest: {nearest}")]
    Unreachable { target: String, nearest: String },
    #[error("dimension {0} exceeds the simulation budget of {1}")]
    DimensionBudget(usize, usize),
    #[error("measured branch has zero weight")]
    ZeroWeight,
    #[error("state is not injective (transfer gap ratio {0})")]
    NonInjective(f64),
    #[error(transparent)]
    Cqca(#[from] CqcaError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Largest virtual-space dimension `D_B * 2^N` the contraction accepts.
pub const DIMENSION_BUDGET: usize = 1 << 12;
