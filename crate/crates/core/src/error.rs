use thiserror::Error;

use crate::nodeset::NodeId;

pub type Result<T, E = FbasError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FbasError {
    #[error("universe must contain at least one node")]
    EmptyUniverse,
    #[error("universe of {0} nodes exceeds the supported maximum of {max}", max = crate::MAX_NODES)]
    UniverseTooLarge(usize),
    #[error("node {node} has a quorum slice that does not contain it")]
    MembershipViolation { node: NodeId },
    #[error("node {node} has no quorum slices")]
    EmptySliceSet { node: NodeId },
    #[error("node {node} lists the same quorum slice twice")]
    DuplicateSlice { node: NodeId },
    #[error("node index {0} is outside the universe")]
    UnknownNode(usize),
    #[error("node {node} has threshold {threshold} outside 1..={max}")]
    ThresholdOutOfRange {
        node: NodeId,
        threshold: usize,
        max: usize,
    },
    #[error("expansion would generate {needed} slices, cap is {cap}")]
    ExpansionTooLarge { needed: u128, cap: usize },
    #[error("k = {k} exceeds set size {len}")]
    KTooLarge { k: usize, len: usize },
    #[error("invalid quorum slice definition: {0}")]
    InvalidDefinition(String),
    #[error("set is not a trust cluster")]
    NotATrustCluster,
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("set must be non-empty")]
    EmptySet,
    #[error("the FBAS does not have quorum intersection")]
    NoQuorumIntersection,
    #[error("instance of {size} nodes exceeds the guard of {limit}")]
    InstanceTooLarge { size: usize, limit: usize },
    #[error("more than {cap} quorums")]
    TooManyQuorums { cap: usize },
    #[error("more than {cap} maximal DSets avoid the node")]
    TooManyMaximalDsets { cap: usize },
    #[error("organizations do not partition the node set: {0}")]
    PartitionInvalid(String),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("malformed formula: {0}")]
    MalformedFormula(String),
    #[error("duplicate node name {0:?}")]
    DuplicateName(String),
    #[error("unknown node name {0:?}")]
    UnknownName(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl FbasError {
    /// True for errors raised by a configurable resource guard.
    pub fn is_resource_guard(&self) -> bool {
        matches!(
            self,
            FbasError::ExpansionTooLarge { .. }
                | FbasError::InstanceTooLarge { .. }
                | FbasError::TooManyQuorums { .. }
                | FbasError::TooManyMaximalDsets { .. }
                | FbasError::UniverseTooLarge(_)
        )
    }
}
