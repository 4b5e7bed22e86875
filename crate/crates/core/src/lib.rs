//! Geodesic convexity on partial cubes.
//!
//! The crate recognizes partial cubes through the Djoković–Winkler relation,
//! computes convex hulls two independent ways, and solves the hull number
//! problem exactly (hitting sets over cut sides), in polynomial time on
//! plane quadrangulations (chordal clique covers), and on atomistic lattices
//! of convex subgraphs. It also builds the SAT gadget showing the general
//! problem is NP-complete and relates poset dimension to hull numbers of
//! linear extension graphs.
//!
//! Every fast algorithm has a slow, definition-level counterpart in this
//! crate, and [`crosscheck`] runs them against each other.

use thiserror::Error;

pub mod bitset;
pub mod convexity;
pub mod crosscheck;
pub mod generators;
pub mod graph;
pub mod hitting;
pub mod hullnum;
pub mod lattice;
pub mod pcube;
pub mod planarquad;
pub mod poset;
pub mod satred;

pub use bitset::VertexSet;
pub use graph::{all_pairs_distances, load_graph, DistanceMatrix, Graph, GraphError};
pub use pcube::{recognize, CutPartition, PartialCube, Rejection};

/// Exponential-time routines refuse graphs with more vertices than this.
pub const EXACT_VERTEX_LIMIT: usize = 4096;

/// Subset enumeration oracles refuse graphs with more vertices than this.
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// An input is too large for the requested exact computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("too many {what}: {actual} exceeds the limit of {limit}")]
pub struct BoundExceeded {
    pub what: &'static str,
    pub limit: usize,
    pub actual: usize,
}

impl BoundExceeded {
    pub fn new(what: &'static str, limit: usize, actual: usize) -> Self {
        BoundExceeded { what, limit, actual }
    }
}
