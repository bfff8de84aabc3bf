use thiserror::Error;

/// Errors raised by the physics modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate spectrum: gap {gap:e} below tolerance")]
    DegenerateSpectrum { gap: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("gap closes on the k-loop (min |d| = {min_norm:e}); winding number undefined")]
    GapClosedOnLoop { min_norm: f64 },

    #[error("instantaneous gap {gap:e} at measurement of cycle {cycle} is degenerate; shift measure_offset")]
    DegenerateMeasurementBasis { cycle: usize, gap: f64 },

    #[error("evolution defect {defect:e} exceeds unitarity budget {budget:e}")]
    NonUnitaryEvolution { defect: f64, budget: f64 },

    #[error("probability {value} at cycle {cycle} is outside [0, 1] beyond tolerance")]
    ProbabilityOutOfRange { cycle: usize, value: f64 },

    #[error("cycle unitary is the identity up to phase; orbit axis undefined")]
    IdentityCycle,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
