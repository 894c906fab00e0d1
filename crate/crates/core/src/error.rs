use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid edge subset: index {index} out of range for ground set of size {size}")]
    InvalidSubset { index: usize, size: usize },
    #[error("{what} exceeds the size guard ({actual} > {limit})")]
    TooLarge { what: &'static str, actual: usize, limit: usize },
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("not a building set: {0}")]
    NotABuildingSet(String),
    #[error("fan is not pure-dimensional")]
    NotPure,
    #[error("fan has a non-simplicial cone ({0})")]
    NotSimplicial(String),
    #[error("cone is not a face of the fan")]
    ConeNotInFan,
    #[error("point lies outside the fan")]
    PointOutside,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("weight vector has no heavy entry")]
    NoHeavyVertex,
    #[error("weight vector has fewer than two heavy entries")]
    FewerThanTwoHeavy,
    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
