//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mode index {index} out of range for a {mode_count}-mode system")]
    ModeOutOfRange { index: usize, mode_count: usize },

    #[error("mode count mismatch: {left} vs {right}")]
    ModeCountMismatch { left: usize, right: usize },

    #[error("cannot normalize a zero-norm state")]
    ZeroNorm,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("uniform arrival is infeasible: first reflectivity {eta_first} exceeds 1/{stages}")]
    InfeasibleUniformity { eta_first: f64, stages: u32 },

    #[error("{photons} photons exceed the {outputs} cascade outputs")]
    PhotonsExceedOutputs { photons: u32, outputs: u32 },

    #[error("output count {0} is not a power of two of at least 2")]
    NotPowerOfTwo(u32),

    #[error("exact enumeration refused: {photons} photons exceed the bound of {bound}")]
    EnumerationBound { photons: u32, bound: u32 },

    #[error("circuit recombines occupied modes; the classical arrival model does not apply")]
    RecombiningCircuit,

    #[error("heralding probability is zero; fidelity is undefined")]
    UndefinedFidelity,

    #[error("gate calibration failed: {0}")]
    Calibration(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}
