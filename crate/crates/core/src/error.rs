use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coset cap of {cap} exceeded")]
    CosetCapExceeded { cap: usize },

    #[error("orbit cap of {cap} exceeded")]
    OrbitCapExceeded { cap: usize },

    #[error("commensuration index on the {side} side exceeds the orbit cap of {cap}")]
    IndexCapExceeded { side: &'static str, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("cannot parse word `{text}`: {reason}")]
    WordSyntax { text: String, reason: String },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("depth insufficient: level {level} not determined by recorded data")]
    DepthInsufficient { level: usize },

    #[error("chains are over different filters")]
    FilterMismatch,

    #[error("inclusion is not decidable for {0}")]
    UndecidableInclusion(String),

    #[error("HNN reduction stuck: {0}")]
    ReductionStuck(String),

    #[error("missing decomposition witness for {0}")]
    MissingWitness(String),

    #[error("rule `{rule}` is missing hypothesis `{hypothesis}`")]
    HypothesisMissing { rule: String, hypothesis: String },

    #[error("point {0} is not reachable")]
    Unreachable(String),

    #[error("filter syntax error at line {line}: {reason}")]
    FilterSyntax { line: usize, reason: String },

    #[error("ordinal syntax error: {0}")]
    OrdinalSyntax(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
