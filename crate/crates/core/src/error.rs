//! Errors shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("edge `{id}` has non-positive length")]
    NonPositiveLength { id: String },

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph is empty")]
    EmptyGraph,

    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("offset {offset} is outside the interior of edge `{edge}` (length {length})")]
    OffsetOutOfRange {
        edge: String,
        offset: String,
        length: String,
    },

    #[error("source currents do not sum to zero")]
    UnbalancedSources,

    #[error("measure has total mass {0}, expected 1")]
    MassNotOne(String),

    #[error("graph genus is {actual}, operation requires genus >= {required}")]
    GenusTooSmall { required: u64, actual: u64 },

    #[error("function is missing data for edge `{0}`")]
    MissingEdgeData(String),

    #[error("function is missing a value at vertex `{0}`")]
    MissingVertexValue(String),

    #[error("pairing of arity {arity} does not match ambient relative dimension")]
    ArityMismatch { arity: usize },

    #[error("cannot combine expressions living over different spaces")]
    SpaceMismatch,

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("place `{place}`: {reason}")]
    InvalidPlace { place: String, reason: String },

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
