use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RemezError {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("result overflows f64; use the log-domain variant")]
    Overflow,

    #[error("polynomial is not even (coefficient asymmetry {asymmetry:e})")]
    NotEven { asymmetry: f64 },

    #[error("|Q|^2 is identically equal to the level; sublevel set is degenerate")]
    ConstantOnLevel,

    #[error("numerical iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("polynomial is numerically zero")]
    DegenerateDraw,

    #[error("extremal witness failed: {0}")]
    WitnessFailure(String),

    #[error("deficiency {deficiency} exceeds s = {s} beyond tolerance")]
    ConstraintViolated { deficiency: f64, s: f64 },

    #[error("no restart produced a feasible starting polynomial")]
    NoFeasibleStart,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed polynomial: {0}")]
    Parse(String),
}

impl RemezError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        RemezError::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, RemezError>;
