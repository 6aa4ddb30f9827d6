use thiserror::Error;

/// Errors produced by the analysis library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("duplicate state id `{0}`")]
    DuplicateState(String),
    #[error("duplicate edge {0}")]
    DuplicateEdge(String),
    #[error("the presentation describes the empty shift")]
    EmptyShift,
    #[error("resource cap exceeded: {what} (limit {limit})")]
    ResourceCap { what: String, limit: u64 },
    #[error("word is not in the language: {0}")]
    NotInLanguage(String),
    #[error("presentation is not a non-wandering TMC: {0}")]
    NotNonWanderingTmc(String),
    #[error("not a topological Markov chain")]
    NotTmc,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("stationary distribution is not unique: {0}")]
    Reducible(String),
    #[error("conditioning on a null event")]
    NullConditioning,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn cap(what: impl Into<String>, limit: u64) -> Self {
        Error::ResourceCap { what: what.into(), limit }
    }
}
