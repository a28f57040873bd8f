use thiserror::Error;

/// Errors surfaced by every layer of the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: expected {expected}")]
    Syntax { position: usize, expected: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("bad prime {0}: expected a prime p with 2 <= p <= 31")]
    BadPrime(u64),

    #[error("operands belong to different sessions")]
    SessionMismatch,

    #[error("degree cap {cap} exceeded (instance too large)")]
    DegreeBlowup { cap: u32 },

    #[error("input is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("base ring is not a domain")]
    NotDomain,

    #[error("map is not an isomorphism: {0}")]
    NotIso(String),

    #[error("singular locus is not isolated")]
    NotIsolated,

    #[error("isolation test indeterminate: {0}")]
    Indeterminate(String),

    #[error(
        "Ω^{0} is not reflexive; variants along resolutions or for eh-sheaves are out of scope"
    )]
    NotReflexive(usize),

    #[error("Cartier operator not surjective at level {level}: cokernel {cokernel}")]
    CartierNotSurjective { level: u32, cokernel: String },

    #[error("support of Δ is not contained in E")]
    BadSupport,

    #[error("denominator of p^n·Δ is not integral or exceeds the session scale")]
    DenominatorOverflow,

    #[error("map is not well defined: {0}")]
    IllDefined(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
