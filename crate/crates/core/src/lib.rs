//! Decremental connectivity for bipartite graphs whose characters are
//! deactivated one by one, and an `O(nm)` solver for incomplete directed
//! perfect phylogeny built on it.
//!
//! * [`graph`]: bipartite graphs and component list representations;
//! * [`engine`]: the decremental connectivity engines;
//! * [`solver`]: the round-based solver and its certificates;
//! * [`verify`]: independent oracles;
//! * [`gen`] and [`bench`]: seeded instances and operation counting.

pub mod bench;
pub mod cli;
pub mod counter;
pub mod engine;
pub mod error;
pub mod format;
pub mod gen;
pub mod graph;
pub mod matrix;
pub mod phylogeny;
pub mod solver;
pub mod verify;

pub use counter::OpCounter;
pub use engine::{build_engine, DcEngine, EngineKind, SplitReport};
pub use error::{Error, Result};
pub use matrix::{BinaryMatrix, CharState, IncompleteMatrix};
pub use phylogeny::Phylogeny;
pub use solver::{solve, Solution};
