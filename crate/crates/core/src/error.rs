//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by matrix construction, mesh compilation, circuit
/// synthesis, and sweep validation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    InvalidDimension,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix entry count {len} does not match dim {dim}")]
    BadShape { len: usize, dim: usize },

    #[error("matrix is not unitary: Frobenius defect {defect:.3e} exceeds {tolerance:.1e}")]
    NotUnitary { defect: f64, tolerance: f64 },

    #[error("crossing top mode {top_mode} out of range for dimension {dim}")]
    ModeOutOfRange { top_mode: usize, dim: usize },

    #[error("mesh program invalid: {0}")]
    BadMeshProgram(String),

    #[error("model parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("qubit count {n} must be at least {min}")]
    QubitCountTooSmall { n: usize, min: usize },

    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCountOutOfRange { n: usize, min: usize, max: usize },

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitIndexOutOfRange { index: usize, n: usize },

    #[error("CNOT control and target must differ (both {0})")]
    DegenerateCnot(usize),

    #[error("CNOT over distance {distance} needs no long-range decomposition")]
    NotLongRange { distance: usize },

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("dimension {dim} is not a power of two")]
    NotPowerOfTwo { dim: usize },

    #[error("sweep axis must be nonempty and strictly increasing")]
    BadSweepAxis,

    #[error("sweep point {x} invalid for encoding: {reason}")]
    BadSweepPoint { x: usize, reason: String },

    #[error("SQO slot {slot} has no parameters assigned")]
    UnassignedSlot { slot: usize },

    #[error("{n} qubits exceeds the {max}-qubit simulation limit")]
    TooManyQubits { n: usize, max: usize },

    #[error("state vector length {len} is not 2^{n}")]
    BadStateLength { len: usize, n: usize },

    #[error("state vector is not normalized: |norm - 1| = {defect:.3e}")]
    NotNormalized { defect: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
