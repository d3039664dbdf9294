//! Verification oracles: ranks and type decompositions of connection profiles,
//! brute-force witness searches for the order property, shattering and the
//! pairing index, and the bipartite canonical-pattern finder.

mod bipartite;
mod decomposition;
mod ranks;
mod witness;

pub use bipartite::{bipartite_canonical_pattern, CanonicalKind, CanonicalPattern};
pub use decomposition::{decompose_sequence_types, Falsifier, TypeDecomposition};
pub use ranks::{alternation_rank, connection_profile, exception_rank, RankWitness};
pub use witness::{
    order_property_witness, pairing_index_witness, shattering_witness, SearchConfig, SearchMode, SearchOutcome,
    Witness, WitnessKind,
};
