use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed group {0:?}")]
    MalformedGroup(String),
    #[error("cyclic factor modulus {0} is below 2")]
    ModulusTooSmall(u32),
    #[error("element does not belong to the group")]
    GroupMismatch,
    #[error("malformed group element {0:?}")]
    MalformedElement(String),
    #[error("residue {residue} out of range for modulus {modulus}")]
    ResidueOutOfRange { residue: u32, modulus: u32 },
    #[error("group of order {order} exceeds the automorphism enumeration bound {bound}")]
    AutomorphismBound { order: u64, bound: u64 },
    #[error("malformed vector {0:?}")]
    MalformedVector(String),
    #[error("periodic part of a tail must be non-empty")]
    EmptyPeriod,
    #[error("vector entries do not generate the group")]
    NotGenerating,
    #[error("malformed word {0:?}")]
    MalformedWord(String),
    #[error("operation requires a group of order {expected}, got {actual}")]
    WrongGroupOrder { expected: u64, actual: u64 },
    #[error("weakly periodic bits must not all be zero")]
    ZeroBits,
    #[error("n = {n} exceeds the enumeration bound {bound}")]
    EnumerationBound { n: usize, bound: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Schreier graph is incomplete")]
    IncompleteGraph,
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
