use thiserror::Error;

/// Library-wide error type.
///
/// Every failure mode carries a stable upper-snake name (see [`Error::name`])
/// so batch tooling can match on errors without parsing messages.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("residue is only defined at valuation 0 (got {0})")]
    ValNonzero(String),
    #[error("value {0} is outside the backend value group")]
    ValueGroup(String),
    #[error("empty input")]
    EmptyInput,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("module is not a semi-lattice")]
    NotSemilattice,
    #[error("thresholds do not define a group")]
    NotAGroup,
    #[error("matrix is not (upper) triangular or not invertible")]
    NotTriangular,
    #[error("weight map is not generically injective: {0}")]
    NotInjective(String),
    #[error("mixed field backends: {0}")]
    BackendMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation requires the standard valuation rule")]
    ValuationRule,
    #[error("residue vector must be nonzero")]
    ZeroResidueVector,
    #[error("coset coding requires finite thresholds")]
    NonFiniteThreshold,
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// Stable machine-readable error name.
    pub fn name(&self) -> &'static str {
        match self {
            Error::PrecisionExhausted(_) => "PRECISION_EXHAUSTED",
            Error::ValNonzero(_) => "VAL_NONZERO",
            Error::ValueGroup(_) => "VALUE_GROUP",
            Error::EmptyInput => "EMPTY_INPUT",
            Error::SingularMatrix => "SINGULAR_MATRIX",
            Error::NotSemilattice => "NOT_SEMILATTICE",
            Error::NotAGroup => "NOT_A_GROUP",
            Error::NotTriangular => "NOT_TRIANGULAR",
            Error::NotInjective(_) => "NOT_INJECTIVE",
            Error::BackendMismatch(_) => "BACKEND_MISMATCH",
            Error::DivisionByZero => "DIVISION_BY_ZERO",
            Error::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            Error::ValuationRule => "VALUATION_RULE",
            Error::ZeroResidueVector => "ZERO_RESIDUE_VECTOR",
            Error::NonFiniteThreshold => "NON_FINITE_THRESHOLD",
            Error::Malformed(_) => "MALFORMED",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
