use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactAlgError {
    #[error("invalid variable name {0:?}")]
    InvalidVariableName(String),
    #[error("half-integer exponent on {0:?}; only the residue variable q may carry one")]
    HalfExponentNotAllowed(String),
    #[error("cannot expand in {var}: {reason}")]
    NotExpandable { var: String, reason: String },
    #[error("unbound variable {0:?}")]
    UnboundVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative value bound to {0:?} under a half-integer exponent")]
    NegativeUnderHalfExponent(String),
    #[error("value bound to {0:?} is not a rational square")]
    IrrationalSquareRoot(String),
    #[error("series variables differ: {left} vs {right}")]
    VariableMismatch { left: String, right: String },
    #[error("division is not exact")]
    InexactDivision,
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("series coefficient mentions the series variable {0}")]
    SeriesVariableInCoefficient(String),
    #[error("exponent of {var} is not a non-negative integer: {exp}")]
    BadSeriesExponent { var: String, exp: String },
    #[error("{0} is not a unit of the Laurent ring")]
    NotAUnit(String),
    #[error("matrix dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}
