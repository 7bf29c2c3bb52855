//! Perturbed substructure optimization on graphs with a matrix-form genetic
//! algorithm.
//!
//! An individual is a row of `k` gene ids indexing a [`graph::GenePool`] of
//! candidate edges or nodes. The GA operators work on whole
//! [`ga::PopulationMatrix`] values; [`fitness`] holds the attack objectives
//! and [`parallel`] the execution modes.

pub mod bitmat;
pub mod error;
pub mod fitness;
pub mod ga;
pub mod graph;
pub mod parallel;
pub mod rng;

pub use error::{Error, Result};
