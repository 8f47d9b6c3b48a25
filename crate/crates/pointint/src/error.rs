use thiserror::Error;

/// Incidence side / boundary side marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => write!(f, "left"),
            Side::Right => write!(f, "right"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("constraint violated on `{field}`: residual {residual:e}")]
    ConstraintViolation { field: &'static str, residual: f64 },

    #[error("no unitary preimage: inversion residual {residual:e}")]
    NoPreimage { residual: f64 },

    #[error("matching system is numerically singular")]
    SingularSystem,

    #[error("boundary state side mismatch: expected {expected}, got {got}")]
    SideMismatch { expected: Side, got: Side },

    #[error("energy {energy} lies inside the mass gap; use the bound-state solver")]
    BelowGap { energy: f64 },

    #[error("wrong parameter variant for this operation")]
    WrongVariant,

    #[error("degenerate spectral condition: every decay rate matches (no discrete spectrum)")]
    NoDiscreteSpectrum,

    #[error("integration step too coarse: estimated local error {err:e}")]
    StepTooCoarse { err: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
