//! Total perfect codes in Cayley graphs.
//!
//! A total perfect code `C` in a graph is a vertex set such that every vertex
//! has exactly one neighbour in `C`. This crate builds finite groups and their
//! Cayley graphs, verifies codes against the algebraic characterizations that
//! hold for Cayley graphs, searches for codes exhaustively, constructs linear
//! codes in cubelike graphs and evaluates spectral necessary conditions with
//! exact arithmetic.

pub mod bitset;
pub mod cayley;
pub mod cli;
pub mod codes;
pub mod error;
pub mod gf2;
pub mod group;
pub mod search;
pub mod spectral;

pub use bitset::BitSet;
pub use cayley::{build_cayley, close_connection_set, is_connected, CayleyGraph, ConnectionSet};
pub use error::{Error, Result};
pub use codes::{verify_tpc, Verdict, Witness};
pub use gf2::{construct_cubelike_tpc, GF2Matrix, LinearCode};
pub use group::{make_group, Group, GroupPartition, VertexSet};
pub use search::{find_tpcs, SearchMode, SearchOptions, SearchResult};
pub use spectral::{exact_eliminate, quotient_matrix, Conclusion, NecessityReport, QuotientMatrix};
