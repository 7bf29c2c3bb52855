//! Link-prediction splits, the resource-allocation predictor, AUC and
//! precision, and the link-prediction attack objective.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Fitness;
use crate::error::{Error, Result};
use crate::fitness::Task;
use crate::graph::{
    apply_perturbation, Adjacency, Element, GenePool, Graph, Perturbation, PoolKind,
};

const MIN_SPLIT_EDGES: usize = 10;

/// Hidden positives and sampled negatives for evaluating a predictor.
#[derive(Clone, Debug, PartialEq)]
pub struct LinkPredictionSplit {
    /// The observed graph: all nodes, test edges removed.
    pub train: Graph,
    pub test_edges: Vec<(usize, usize)>,
    /// Pairs that are not edges of the full graph.
    pub probe_nonedges: Vec<(usize, usize)>,
    pub seed: u64,
}

impl LinkPredictionSplit {
    /// Gene pool over the training edges.
    pub fn train_pool(&self) -> Result<GenePool> {
        GenePool::build(&self.train, PoolKind::EdgeRemoval)
    }
}

/// Hides `round(test_fraction * m)` edges chosen uniformly and samples the
/// same number of non-edges, both determined by `seed`.
pub fn build_lp_split(graph: &Graph, test_fraction: f64, seed: u64) -> Result<LinkPredictionSplit> {
    if !(test_fraction > 0.0 && test_fraction <= 0.5) {
        return Err(Error::InvalidParams(format!(
            "test fraction {test_fraction} not in (0, 0.5]"
        )));
    }
    let m = graph.edge_count();
    if m < MIN_SPLIT_EDGES {
        return Err(Error::GraphTooSmall {
            edges: m,
            required: MIN_SPLIT_EDGES,
        });
    }
    let count = ((test_fraction * m as f64).round() as usize).max(1);
    let n = graph.node_count();
    let complement = n * (n - 1) / 2 - m;
    if complement < count {
        return Err(Error::GraphTooSmall {
            edges: m,
            required: MIN_SPLIT_EDGES,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = graph.edges().to_vec();
    edges.shuffle(&mut rng);
    let mut test_edges: Vec<_> = edges[..count].to_vec();
    test_edges.sort_unstable();

    let mut probes = HashSet::new();
    let mut probe_nonedges = Vec::with_capacity(count);
    while probe_nonedges.len() < count {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let pair = (u.min(v), u.max(v));
        if !graph.has_edge(pair.0, pair.1) && probes.insert(pair) {
            probe_nonedges.push(pair);
        }
    }
    probe_nonedges.sort_unstable();

    let hidden: HashSet<_> = test_edges.iter().copied().collect();
    Ok(LinkPredictionSplit {
        train: graph.without_edges(&hidden),
        test_edges,
        probe_nonedges,
        seed,
    })
}

/// Resource allocation index `sum over common neighbors z of 1 / deg(z)`.
pub fn ra_score(adj: &Adjacency, u: usize, v: usize) -> f64 {
    let (ru, rv) = (adj.bits().row(u), adj.bits().row(v));
    let mut score = 0.0;
    for (w, (a, b)) in ru.iter().zip(rv).enumerate() {
        let mut common = a & b;
        while common != 0 {
            let z = w * 64 + common.trailing_zeros() as usize;
            common &= common - 1;
            score += 1.0 / adj.degree(z) as f64;
        }
    }
    score
}

pub type ScoreMap = HashMap<(usize, usize), f64>;

/// Resource allocation scores for the requested pairs, keyed with `u < v`.
pub fn ra_scores(adj: &Adjacency, pairs: &[(usize, usize)]) -> ScoreMap {
    pairs
        .iter()
        .map(|&(u, v)| ((u.min(v), u.max(v)), ra_score(adj, u, v)))
        .collect()
}

/// Probability that a positive outscores a negative, over all pairs; ties count half.
pub fn auc(positive: &[f64], negative: &[f64]) -> f64 {
    let mut wins = 0.0;
    for &p in positive {
        for &q in negative {
            if p > q {
                wins += 1.0;
            } else if p == q {
                wins += 0.5;
            }
        }
    }
    wins / (positive.len() * negative.len()) as f64
}

fn lookup(scores: &ScoreMap, &(u, v): &(usize, usize)) -> Result<f64> {
    scores
        .get(&(u.min(v), u.max(v)))
        .copied()
        .ok_or_else(|| Error::InvalidParams(format!("no score for pair ({u}, {v})")))
}

/// AUC over every (test edge, probe) pair, and precision among the top `L`
/// candidates where `L` is the number of test edges. Candidates are the test
/// edges plus the probes; equal scores are ordered by pair.
pub fn lp_auc_precision(split: &LinkPredictionSplit, scores: &ScoreMap) -> Result<(f64, f64)> {
    if split.test_edges.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let positive = split
        .test_edges
        .iter()
        .map(|p| lookup(scores, p))
        .collect::<Result<Vec<_>>>()?;
    let negative = split
        .probe_nonedges
        .iter()
        .map(|p| lookup(scores, p))
        .collect::<Result<Vec<_>>>()?;

    let mut ranked: Vec<(f64, (usize, usize), bool)> = split
        .test_edges
        .iter()
        .zip(&positive)
        .map(|(&pair, &s)| (s, pair, true))
        .chain(
            split
                .probe_nonedges
                .iter()
                .zip(&negative)
                .map(|(&pair, &s)| (s, pair, false)),
        )
        .collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let top = split.test_edges.len();
    let hits = ranked.iter().take(top).filter(|r| r.2).count();
    Ok((auc(&positive, &negative), hits as f64 / top as f64))
}

/// Minimize the AUC of the resource-allocation predictor after removing
/// training edges.
pub struct LpaFitness {
    split: LinkPredictionSplit,
    train_adj: Adjacency,
    pool: GenePool,
}

impl LpaFitness {
    pub fn new(split: LinkPredictionSplit, pool: GenePool) -> Result<Self> {
        Task::LpaSimilarity.check_pool(pool.kind())?;
        if let Some(&Element::Edge(u, v)) = pool.genes().iter().find(|e| match e {
            Element::Edge(u, v) => !split.train.has_edge(*u, *v),
            Element::Node(_) => true,
        }) {
            return Err(Error::InvalidParams(format!(
                "pool edge ({u}, {v}) is not a training edge"
            )));
        }
        if split.test_edges.is_empty() {
            return Err(Error::EmptyTestSet);
        }
        let train_adj = split.train.adjacency();
        Ok(Self {
            split,
            train_adj,
            pool,
        })
    }

    pub fn split(&self) -> &LinkPredictionSplit {
        &self.split
    }

    pub fn pool(&self) -> &GenePool {
        &self.pool
    }

    pub fn perturbed(&self, genes: &[u32]) -> Result<Adjacency> {
        Ok(apply_perturbation(
            &self.train_adj,
            &Perturbation::new(&self.pool, genes)?,
        ))
    }

    /// AUC and precision of the predictor on the perturbed training graph.
    pub fn metrics(&self, genes: &[u32]) -> Result<(f64, f64)> {
        let adj = self.perturbed(genes)?;
        let pairs: Vec<_> = self
            .split
            .test_edges
            .iter()
            .chain(&self.split.probe_nonedges)
            .copied()
            .collect();
        lp_auc_precision(&self.split, &ra_scores(&adj, &pairs))
    }
}

impl Fitness for LpaFitness {
    fn evaluate(&self, genes: &[u32]) -> Result<f64> {
        let adj = self.perturbed(genes)?;
        let positive: Vec<f64> = self
            .split
            .test_edges
            .iter()
            .map(|&(u, v)| ra_score(&adj, u, v))
            .collect();
        let negative: Vec<f64> = self
            .split
            .probe_nonedges
            .iter()
            .map(|&(u, v)| ra_score(&adj, u, v))
            .collect();
        Ok(auc(&positive, &negative))
    }
}
