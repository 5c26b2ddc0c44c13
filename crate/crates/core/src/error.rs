use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge {{{0}, {1}}} is not present")]
    EdgeAbsent(usize, usize),
    #[error("expected a tree class, got {0}")]
    NotATree(String),
    #[error("class {class} has depth {depth}, which exceeds {limit}")]
    DepthExceeded {
        class: String,
        depth: usize,
        limit: usize,
    },
    #[error("empty vertex set")]
    EmptyGraph,
    #[error("invalid law: {0}")]
    InvalidLaw(String),
    #[error("law is not admissible: {0}")]
    NotAdmissible(String),
    #[error("depth mismatch: {0} vs {1}")]
    DepthMismatch(usize, usize),
    #[error("mean degree is zero")]
    ZeroMean,
    #[error("e_P({0}, {1}) = 0")]
    ZeroEdgeType(String, String),
    #[error("support size {size} exceeds the cap {cap}")]
    SupportExplosion { size: usize, cap: usize },
    #[error("invalid degree sequence: {0}")]
    InvalidDegreeSequence(String),
    #[error("graph degrees do not match the degree sequence")]
    DegreeMismatch,
    #[error("rejection sampling gave up after {attempts} attempts (estimated acceptance {acceptance:.3e})")]
    RejectionExhausted { attempts: u64, acceptance: f64 },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("graph is not {0}-tree-like")]
    NotTreeLike(usize),
    #[error("invalid support: {0}")]
    InvalidSupport(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
