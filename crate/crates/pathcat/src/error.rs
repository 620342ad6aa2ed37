use thiserror::Error;

/// Errors raised by the combinatorial layers. Axiom failures are not errors;
/// they are reported by `ValidationReport`.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error("unknown path {0}")]
    UnknownPath(String),
    #[error("vertex mismatch: expected {expected}, got {got}")]
    VertexMismatch { expected: String, got: String },
    #[error("empty family has no minimal common extensions")]
    EmptyFamily,
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("zigzag is ill-formed: {0}")]
    BadZigzag(String),
    #[error("set expression mixes base vertices")]
    MixedBase,
    #[error("ring carrier too large: {0} paths (limit 64)")]
    CarrierTooLarge(usize),
    #[error("assignment is not total: missing value for {0}")]
    PartialAssignment(String),
    #[error("target is not a ring of sets: {0}")]
    NotARing(String),
    #[error("not a hereditary directed set: {0}")]
    NotHereditaryDirected(String),
    #[error("{0} is not a boundary point")]
    NotBoundary(String),
    #[error("degree functor is not functorial: {0}")]
    NotFunctorial(String),
    #[error("degree functor must vanish on vertices: {0}")]
    NonzeroOnVertex(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("ill-typed word: {0}")]
    BadWord(String),
    #[error("presentation error: {0}")]
    Presentation(String),
    #[error("amalgamation is not finite within bound {0}; pass a bound")]
    NotFinite(u32),
}
