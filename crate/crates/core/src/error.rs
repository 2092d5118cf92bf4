use thiserror::Error;

use crate::morphism::MapDefect;
use crate::poset::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure classes, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input was malformed or violated an operation's precondition.
    Input,
    /// A certificate or claimed structure failed to verify.
    Verification,
    /// An internal invariant failed; this is a bug.
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation contains a directed cycle through {}", join(.nodes))]
    CycleDetected { nodes: Vec<NodeId> },
    #[error("relation references unknown node `{0}`")]
    DanglingNode(NodeId),
    #[error("unknown node `{0}`")]
    UnknownNode(NodeId),
    #[error("operation requires a nonempty poset")]
    EmptyPoset,
    #[error("map does not cover every source node: `{0}` is unassigned")]
    PartialMap(NodeId),
    #[error("maps do not compose: {0}")]
    MapMismatch(String),
    #[error("not a poset map: {0}")]
    NotPosetMap(MapDefect),
    #[error("not an embedding: {0}")]
    NotEmbedding(MapDefect),
    #[error("{{{}}} is not complete: `{between}` lies between two of its members", join(.set))]
    NotComplete { set: Vec<NodeId>, between: NodeId },
    #[error("cannot glue along an empty set")]
    EmptySet,
    #[error("map is not compatible with the gluing: `{a}` and `{b}` are glued but sent to different nodes")]
    NotCompatible { a: NodeId, b: NodeId },
    #[error("collection members overlap at `{0}`")]
    OverlappingCollection(NodeId),
    #[error("collection member is not an antichain: `{lower}` < `{upper}`")]
    NotAntichainCollection { lower: NodeId, upper: NodeId },
    #[error("`{upper}` does not cover `{lower}`")]
    NotACover { lower: NodeId, upper: NodeId },
    #[error("gluing is not height zero: a glued set contains non-minimal `{0}`")]
    NotHeightZero(NodeId),
    #[error("{{{}}} is not a fiber of the chain decomposition", join(.0))]
    NotASubcollection(Vec<NodeId>),
    #[error("`{0}` is not minimal")]
    NotMinimal(NodeId),
    #[error("`{0}` does not have height one")]
    NotHeightOne(NodeId),
    #[error("`{pivot}` is not the only cover of `{node}`")]
    NotUniqueCover { node: NodeId, pivot: NodeId },
    #[error("elevation count must be positive")]
    InvalidCount,
    #[error("node id `{0}` is already in use")]
    DuplicateId(NodeId),
    #[error("poset has dimension zero")]
    ZeroDimensional,
    #[error("step {step}: {detail}")]
    StepMismatch { step: usize, detail: String },
    #[error("step {step} is invalid: {reason}")]
    InvalidStep { step: usize, reason: String },
    #[error("tracked embedding is broken: {0}")]
    BrokenEmbedding(MapDefect),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid document field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::StepMismatch { .. } | Error::InvalidStep { .. } | Error::BrokenEmbedding(_) => {
                ErrorClass::Verification
            }
            Error::Invariant(_) => ErrorClass::Internal,
            _ => ErrorClass::Input,
        }
    }
}

fn join(ids: &[NodeId]) -> String {
    ids.iter().map(NodeId::as_str).collect::<Vec<_>>().join(", ")
}
