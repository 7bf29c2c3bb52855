use thiserror::Error;

use crate::graph::PoolKind;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("gene pool for {0} is empty")]
    EmptyPool(PoolKind),

    #[error("gene id {gene} out of range for pool of size {pool_len}")]
    GeneOutOfRange { gene: u32, pool_len: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("shape mismatch: expected {expected:?}, got {actual:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("fitness of row {row} is not a number")]
    NanFitness { row: usize },

    #[error("modularity is undefined on a graph without edges")]
    UndefinedModularity,

    #[error("partitions cover different node sets ({0} vs {1} nodes)")]
    PartitionMismatch(usize, usize),

    #[error(
        "graph too small for a link-prediction split: {edges} edges, need at least {required}"
    )]
    GraphTooSmall { edges: usize, required: usize },

    #[error("link-prediction split has no test edges")]
    EmptyTestSet,

    #[error("task {task} cannot use a {kind} gene pool")]
    IncompatiblePool { task: String, kind: PoolKind },

    #[error("worker failure: {0}")]
    Worker(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
