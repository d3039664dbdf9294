//! Flip algebra, indiscernible sequences and flip-wideness on finite graphs.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of immutable inputs; IO, file formats and the command line live in
//! the companion `flipwide` crate.
//!
//! Module map:
//!
//! * [`graph`], [`flip`], [`set`]: simple undirected graphs, vertex sets,
//!   flips `G ⊕ F`, BFS distances and distance-`r` independence.
//! * [`formulas`]: the restricted formula fragment the algorithms evaluate
//!   (edges, `dist ≤ r`, neighbourhood equivalence over a ball, Φ-types and
//!   existential pattern formulas).
//! * [`indiscernibles`]: indiscernibility checks, EM-types and Ramsey-style
//!   extraction of indiscernible subsequences.
//! * [`sampleset`]: sample sets for sequences with disjoint ball
//!   neighbourhoods, with per-vertex exceptional-index certificates.
//! * [`flipwide`]: the inductive flip-wideness construction.
//! * [`oracles`]: alternation / exception rank, type decompositions and
//!   witness searches used as positive and negative controls.
//! * [`generators`]: deterministic graph families.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod flip;
pub mod flipwide;
pub mod formulas;
pub mod generators;
pub mod graph;
pub mod indiscernibles;
pub mod oracles;
pub mod sampleset;
pub mod set;

pub use error::{Error, Result};
pub use flip::{apply_flips, Flip, FlipSet};
pub use graph::{DistanceTable, Graph, Vertex};
pub use set::VertexSet;
