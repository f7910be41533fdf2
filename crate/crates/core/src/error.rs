use thiserror::Error;

/// Errors raised by the counting, interval and estimation routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PopcornError {
    #[error("gcd(0, 0) is undefined")]
    UndefinedGcd,

    #[error("{what} out of range: {detail}")]
    Range { what: &'static str, detail: String },

    #[error("fraction {num}/{den} has a zero denominator")]
    ZeroDenominator { num: u64, den: u64 },

    #[error("strip k={k} is empty at mesh {delta}")]
    EmptyStrip { k: u64, delta: String },

    #[error("malformed interval [{lo}, {hi}]")]
    MalformedInterval { lo: String, hi: String },

    #[error("Chung-Erdos bound needs positive events; event {index} has measure zero")]
    NonPositiveEvent { index: usize },

    #[error("Chung-Erdos bound needs at least one event")]
    NoEvents,

    #[error("mesh {delta} is too coarse (must be at most 1/2)")]
    MeshTooCoarse { delta: String },

    #[error("mesh {delta} is below the supported floor 2^-30")]
    MeshTooFine { delta: String },

    #[error("cell size r={r} must be smaller than window size R={big_r}")]
    ScaleOrder { r: String, big_r: String },

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("brute-force oracle refused: {points} points exceed the guard {guard}")]
    OracleTooLarge { points: u64, guard: u64 },

    #[error("cost guard exceeded at {parameter}: estimated {cost} work units > ceiling {ceiling}")]
    CostGuard { parameter: String, cost: u64, ceiling: u64 },

    #[error("insufficient data: {needed} samples needed, {got} given")]
    InsufficientData { needed: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cannot parse rational '{0}' (expected p/q with non-negative integers)")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, PopcornError>;
