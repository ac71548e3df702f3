//! Detection of adversarially inserted edges in attributed graphs.
//!
//! The crate is `no_std` (with `alloc`) and holds every algorithm: the graph
//! model and generators, dense numerics, the GCN node classifier, pairwise
//! link heuristics, the three detectors (link prediction, sequential graph
//! generation scoring, edge outlier detection), the degree-gated ensemble and
//! the greedy surrogate attacks. File formats, experiments and the CLI live in
//! the `edog` crate.
#![no_std]
extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod attack;
pub mod ensemble;
pub mod error;
pub mod gcn;
pub mod ggd;
pub mod graph;
pub mod lp;
pub mod metrics;
pub mod numkit;
pub mod od;
pub mod scores;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use graph::{Graph, NodePair, Subgraph};
pub use numkit::{Matrix, PrngStream};
pub use scores::EdgeScores;
