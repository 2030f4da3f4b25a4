//! Analysis of federated Byzantine agreement systems.
//!
//! An FBAS is a set of nodes `V` together with, for every node, a family of
//! *quorum slices*: sets of nodes it is willing to trust. This crate decides
//! and enumerates the structural properties that matter for safety:
//!
//! * quorums, minimal quorums and quorum intersection ([`quorums`]),
//! * the trust graph and its strongly connected components ([`trust`]),
//! * dispensable sets and which nodes stay intact when a given set of nodes
//!   misbehaves ([`intact`]),
//! * the probability that a node stays intact under random failures
//!   ([`probability`]).
//!
//! Nodes are dense indices ([`NodeId`]) and node sets are fixed-width
//! bitsets ([`NodeSet`]), which caps the universe at [`MAX_NODES`]. Every
//! search algorithm takes an optional deletion set `D` and works on the FBAS
//! with `D` removed without materializing it.
//!
//! ```
//! use fbas_core::{catalog, quorums};
//!
//! let f = catalog::hub_and_two_triads();
//! assert_eq!(quorums::enumerate_quorums(&f).count(), 4);
//! assert!(quorums::quorum_intersection(&f).intersects);
//! ```

pub mod bench;
pub mod catalog;
pub mod combin;
pub mod error;
pub mod fbas;
pub mod intact;
pub mod io;
pub mod nodeset;
pub mod oracle;
pub mod probability;
pub mod quorums;
pub mod slices;
pub mod trust;

pub use error::{FbasError, Result};
pub use fbas::{expand_simple, fbas_size, make_general, make_simple, Fbas, GeneralFbas, SimpleFbas, SubFbas};
pub use nodeset::{set_of, NameTable, NodeId, NodeSet, MAX_NODES};
pub use slices::QuorumSliceDefinition;
