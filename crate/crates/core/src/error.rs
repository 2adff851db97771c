use thiserror::Error;

/// Domain errors raised by the library. Parse failures are reported
/// separately as positioned diagnostics (see [`crate::dsl`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("weighted set has no entries")]
    EmptySet,
    #[error("every weight in the set is zero")]
    AllZeroWeights,
    #[error("update undefined: upper likelihood of `{0}` is 0")]
    UndefinedUpdate(String),
    #[error("direction has a negative component at state `{0}`")]
    NegativeDirection(String),
    #[error("state spaces differ")]
    DimensionMismatch,
    #[error("no sampled direction is informative for measure `{0}`")]
    NoInformativeDirection(String),
    #[error("lottery references unknown prize `{0}`")]
    UnknownPrize(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("act `{0}` is not in the menu")]
    ActNotInMenu(String),
    #[error("rule {rule} expects a belief of kind {expected}")]
    BeliefKindMismatch { rule: String, expected: String },
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error("event `{0}` is null")]
    NullEvent(String),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("information set at node `{0}` is null")]
    NullEventAtNode(String),
    #[error("threshold update eliminated every measure")]
    AllEliminated,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid lottery: {0}")]
    InvalidLottery(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
