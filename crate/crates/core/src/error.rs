use thiserror::Error;

/// Validation failures raised while building a [`Digraph`](crate::graph::Digraph).
///
/// Every variant names the offending identifier so that callers reading
/// from a file can map it back to a source location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: IdKind, id: String },
    #[error("vertex id `{0}` is reserved for the root")]
    ReservedId(String),
    #[error("edge `{edge}` is a self-loop on `{vertex}`")]
    SelfLoop { edge: String, vertex: String },
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    UnknownEndpoint { edge: String, vertex: String },
    #[error("vertex `{0}` has no weight")]
    MissingWeight(String),
    #[error("vertex `{vertex}` has non-positive weight {weight}")]
    NonpositiveWeight { vertex: String, weight: i64 },
    #[error("edge `{0}` has no rank")]
    MissingRank(String),
    #[error("edge `{edge}` has non-positive rank {rank}")]
    NonpositiveRank { edge: String, rank: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdKind {
    Vertex,
    Edge,
}

impl std::fmt::Display for IdKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IdKind::Vertex => f.write_str("vertex"),
            IdKind::Edge => f.write_str("edge"),
        }
    }
}

/// Preference comparisons are only defined between edges sharing a head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("edges {first} and {second} enter different vertices")]
pub struct HeadMismatch {
    pub first: usize,
    pub second: usize,
}

/// An edge list that is not an r-arborescence of the augmented digraph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArborescenceError {
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    #[error("vertex {0} has more than one in-edge")]
    DuplicateHead(usize),
    #[error("vertex {0} has no in-edge")]
    MissingHead(usize),
    #[error("edge {edge} is listed for vertex {vertex} but enters another vertex")]
    WrongHead { vertex: usize, edge: usize },
    #[error("in-edges form a cycle through vertex {0}")]
    Cycle(usize),
}

/// Enumeration stopped after producing more arborescences than allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("enumeration exceeded the cap of {cap} arborescences")]
pub struct CapExceeded {
    pub cap: usize,
}

/// Errors from [`solve`](crate::solver::solve). These indicate broken
/// internal invariants, not properties of the instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("reach sets are not laminar: {0}")]
    LaminarityViolation(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("constructed certificate failed verification: {0}")]
    CertificateRejected(String),
}
