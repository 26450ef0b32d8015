use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("singular matrix: zero pivot at elimination step {step}")]
    SingularMatrix { step: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-positive index I = {index} (weights sum {weight_sum}, degree {degree})")]
    NonPositiveIndex {
        index: i64,
        weight_sum: u64,
        degree: u64,
    },

    #[error("not well-formed: {0}")]
    NotWellFormed(String),

    #[error("weights must be positive and sorted ascending, got {0:?}")]
    UnsortedWeights([u64; 4]),

    #[error("weight {weight} is not coprime to the order {order}")]
    NotCoprime { weight: u64, order: u64 },

    #[error("inconsistent Gram data: {0}")]
    InconsistentGram(String),

    #[error("weights ({0}, {1}) are not admissible at {2}")]
    InadmissibleWeights(u64, u64, String),

    #[error("weights ({0}, {1}) are not primitive at {2}: ({3}, {4}) is admissible")]
    NonPrimitiveWeights(u64, u64, String, u64, u64),

    #[error("curve or component `{curve}` passes through {point} but has no monomial germ there")]
    MissingGerm { curve: String, point: String },

    #[error("divisor is not pseudoeffective on the supplied basis: {0}")]
    NotPseudoeffective(String),

    #[error("degenerate configuration: {0}")]
    DegenerateConfig(String),

    #[error("the threshold is irrational: {0}")]
    IrrationalThreshold(String),

    #[error("first weight must be 1 for the hyperplane reduction, got {0}")]
    NonUnitFirstWeight(u64),

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("{0}")]
    Scenario(String),
}
