use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed group spec `{spec}`: {reason}")]
    MalformedSpec { spec: String, reason: String },
    #[error("group order {order} exceeds the limit of {limit}")]
    SizeOverflow { order: usize, limit: usize },
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("malformed element list: {0}")]
    MalformedElements(String),
    #[error("element {element} out of range for a group of order {order}")]
    ElementOutOfRange { element: usize, order: usize },
    #[error("set is not a subgroup")]
    NotASubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("size guard exceeded: {what} is {size}, limit {limit}")]
    SizeGuardExceeded { what: &'static str, size: usize, limit: usize },
    #[error("connection set contains the identity")]
    IdentityInConnectionSet,
    #[error("connection set is not inverse-closed: missing inverse of {element}")]
    NotInverseClosed { element: usize },
    #[error("connection set is not closed under conjugation")]
    ConnectionSetNotConjugationClosed,
    #[error("code is not closed under conjugation")]
    CodeNotConjugationClosed,
    #[error("set is not a total perfect code")]
    NotACode,
    #[error("element {0} lies in the subgroup")]
    ElementInSubgroup(usize),
    #[error("element {0} is not in the connection set")]
    ElementNotInS(usize),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("parts do not partition the vertex set: {0}")]
    NotAPartition(String),
    #[error("graph has no edges")]
    EmptyEdgeSet,
    #[error("partition is not equitable: vertices {u} and {v} of part {part} have different neighbour counts in part {other}")]
    NotEquitable { part: usize, u: usize, v: usize, other: usize },
    #[error("degree {degree} is not a power of two dividing 2^{dimension}; no total perfect code exists")]
    DegreeNotPowerOfTwo { degree: usize, dimension: usize },
    #[error("connection set does not span V({0}, 2)")]
    NotSpanning(usize),
    #[error("invalid connection vectors: {0}")]
    InvalidVectors(String),
    #[error("no check matrix found for a valid cubelike instance")]
    ConstructionExhausted,
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
