//! Batch fitness functions and the quality metrics used for reporting.
//!
//! Each objective perturbs the adjacency matrix with an individual's genes
//! and scores the result. [`Fitness::evaluate`] is the per-individual
//! reference path; [`Fitness::evaluate_batch`] is what the batched execution
//! modes call and may take a different (matrix) route as long as it returns
//! identical values.

mod cnd;
mod community;
mod linkpred;
mod reachability;

use std::fmt;
use std::str::FromStr;

pub use cnd::{pc_fitness, sixdst_fitness, PairwiseConnectivityFitness, SixDstFitness};
pub use community::{
    detect_communities, load_ground_truth, modularity, nmi, CdaFitness, CommunityPartition,
    Detector, EDGELESS_MODULARITY,
};
pub use linkpred::{
    auc, build_lp_split, lp_auc_precision, ra_score, ra_scores, LinkPredictionSplit, LpaFitness,
    ScoreMap,
};
pub use reachability::{
    accessibility_matrix, accessibility_matrix_with, AccessibilityMatrix, ReachabilityMode,
};

use crate::error::{Error, Result};
use crate::ga::{Direction, FitnessVector, PopulationMatrix};
use crate::graph::PoolKind;

pub trait Fitness: Sync {
    /// Fitness of one individual.
    fn evaluate(&self, genes: &[u32]) -> Result<f64>;

    /// Fitness of every row of `batch`, in row order.
    fn evaluate_batch(&self, batch: &PopulationMatrix) -> Result<FitnessVector> {
        batch
            .iter_rows()
            .map(|row| self.evaluate(row))
            .collect::<Result<Vec<_>>>()
            .map(FitnessVector::new)
    }
}

impl<T: Fitness + ?Sized> Fitness for &T {
    fn evaluate(&self, genes: &[u32]) -> Result<f64> {
        (**self).evaluate(genes)
    }

    fn evaluate_batch(&self, batch: &PopulationMatrix) -> Result<FitnessVector> {
        (**self).evaluate_batch(batch)
    }
}

/// Adapts a plain function of the genes into a [`Fitness`].
pub struct FnFitness<F>(pub F);

impl<F> Fitness for FnFitness<F>
where
    F: Fn(&[u32]) -> f64 + Sync,
{
    fn evaluate(&self, genes: &[u32]) -> Result<f64> {
        Ok((self.0)(genes))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Task {
    CndSixdst,
    CndPc,
    CdaModularity,
    LpaSimilarity,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::CndSixdst => "cnd-sixdst",
            Task::CndPc => "cnd-pc",
            Task::CdaModularity => "cda-modularity",
            Task::LpaSimilarity => "lpa-similarity",
        }
    }

    /// Every attack minimizes its objective.
    pub fn direction(self) -> Direction {
        Direction::Minimize
    }

    pub fn accepts(self, kind: PoolKind) -> bool {
        match self {
            Task::CndSixdst | Task::CndPc => kind == PoolKind::NodeRemoval,
            Task::CdaModularity => matches!(kind, PoolKind::EdgeRemoval | PoolKind::EdgeAddition),
            Task::LpaSimilarity => kind == PoolKind::EdgeRemoval,
        }
    }

    pub fn check_pool(self, kind: PoolKind) -> Result<()> {
        if self.accepts(kind) {
            Ok(())
        } else {
            Err(Error::IncompatiblePool {
                task: self.as_str().to_owned(),
                kind,
            })
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cnd-sixdst" => Ok(Task::CndSixdst),
            "cnd-pc" => Ok(Task::CndPc),
            "cda-modularity" => Ok(Task::CdaModularity),
            "lpa-similarity" => Ok(Task::LpaSimilarity),
            other => Err(Error::InvalidParams(format!("unknown task '{other}'"))),
        }
    }
}

/// Which objective to optimize and its auxiliary settings.
#[derive(Clone, Debug, PartialEq)]
pub struct FitnessSpec {
    pub task: Task,
    pub direction: Direction,
    pub detector: Detector,
    /// Hidden-edge fraction for link-prediction splits.
    pub split_fraction: f64,
    pub reachability: ReachabilityMode,
}

impl FitnessSpec {
    pub fn new(task: Task) -> Self {
        Self {
            task,
            direction: task.direction(),
            detector: Detector::GreedyModularity,
            split_fraction: 0.1,
            reachability: ReachabilityMode::Fixpoint,
        }
    }
}
