//! Critical node detection objectives: the largest connected component
//! (SixDST) and pairwise connectivity (CutOff-style).

use super::reachability::{accessibility_matrix_with, ReachabilityMode};
use super::Fitness;
use crate::error::Result;
use crate::fitness::Task;
use crate::ga::{FitnessVector, PopulationMatrix};
use crate::graph::{
    apply_perturbation, Adjacency, Element, GenePool, Graph, Perturbation, PoolKind,
};

fn node_pool(task: Task, pool: &GenePool) -> Result<()> {
    task.check_pool(pool.kind())
}

/// Component sizes of the graph with `removed` nodes isolated, found by
/// walking neighbor lists. Removed nodes count as singletons.
fn component_sizes(neighbors: &[Vec<usize>], removed: &[bool]) -> Vec<usize> {
    let n = neighbors.len();
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    let mut sizes = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        if removed[start] {
            sizes.push(1);
            continue;
        }
        stack.push(start);
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &v in &neighbors[u] {
                if !seen[v] && !removed[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}

fn removed_mask(pool: &GenePool, n: usize, genes: &[u32]) -> Result<Vec<bool>> {
    let p = Perturbation::new(pool, genes)?;
    let mut removed = vec![false; n];
    for e in p.elements() {
        if let Element::Node(u) = e {
            removed[u] = true;
        }
    }
    Ok(removed)
}

fn accessibility_of(
    adj: &Adjacency,
    pool: &GenePool,
    genes: &[u32],
    mode: ReachabilityMode,
) -> Result<super::AccessibilityMatrix> {
    let perturbed = apply_perturbation(adj, &Perturbation::new(pool, genes)?);
    Ok(accessibility_matrix_with(&perturbed, mode))
}

/// MCN of every individual via the accessibility matrix.
pub fn sixdst_fitness(
    adj: &Adjacency,
    batch: &PopulationMatrix,
    pool: &GenePool,
) -> Result<FitnessVector> {
    node_pool(Task::CndSixdst, pool)?;
    batch
        .iter_rows()
        .map(|row| {
            Ok(accessibility_of(adj, pool, row, ReachabilityMode::Fixpoint)?.max_row_sum() as f64)
        })
        .collect::<Result<Vec<_>>>()
        .map(FitnessVector::new)
}

/// Pairwise connectivity of every individual via the accessibility matrix.
pub fn pc_fitness(
    adj: &Adjacency,
    batch: &PopulationMatrix,
    pool: &GenePool,
) -> Result<FitnessVector> {
    node_pool(Task::CndPc, pool)?;
    batch
        .iter_rows()
        .map(|row| {
            Ok(
                accessibility_of(adj, pool, row, ReachabilityMode::Fixpoint)?.connected_pairs()
                    as f64,
            )
        })
        .collect::<Result<Vec<_>>>()
        .map(FitnessVector::new)
}

/// Minimize the largest connected component after removing the genes' nodes.
///
/// The batch path computes the accessibility matrix of each perturbed
/// adjacency; the per-individual path walks neighbor lists. Both are exact.
pub struct SixDstFitness {
    adj: Adjacency,
    neighbors: Vec<Vec<usize>>,
    pool: GenePool,
    mode: ReachabilityMode,
}

impl SixDstFitness {
    pub fn new(graph: &Graph, pool: GenePool) -> Result<Self> {
        Self::with_mode(graph, pool, ReachabilityMode::Fixpoint)
    }

    pub fn with_mode(graph: &Graph, pool: GenePool, mode: ReachabilityMode) -> Result<Self> {
        node_pool(Task::CndSixdst, &pool)?;
        Ok(Self {
            adj: graph.adjacency(),
            neighbors: graph.neighbor_lists(),
            pool,
            mode,
        })
    }

    pub fn pool(&self) -> &GenePool {
        &self.pool
    }
}

impl Fitness for SixDstFitness {
    fn evaluate(&self, genes: &[u32]) -> Result<f64> {
        let removed = removed_mask(&self.pool, self.neighbors.len(), genes)?;
        let largest = component_sizes(&self.neighbors, &removed)
            .into_iter()
            .max()
            .unwrap_or(0);
        Ok(largest as f64)
    }

    fn evaluate_batch(&self, batch: &PopulationMatrix) -> Result<FitnessVector> {
        batch
            .iter_rows()
            .map(|row| {
                Ok(accessibility_of(&self.adj, &self.pool, row, self.mode)?.max_row_sum() as f64)
            })
            .collect::<Result<Vec<_>>>()
            .map(FitnessVector::new)
    }
}

/// Minimize the number of node pairs that remain connected.
pub struct PairwiseConnectivityFitness {
    adj: Adjacency,
    neighbors: Vec<Vec<usize>>,
    pool: GenePool,
}

impl PairwiseConnectivityFitness {
    pub fn new(graph: &Graph, pool: GenePool) -> Result<Self> {
        node_pool(Task::CndPc, &pool)?;
        debug_assert_eq!(pool.kind(), PoolKind::NodeRemoval);
        Ok(Self {
            adj: graph.adjacency(),
            neighbors: graph.neighbor_lists(),
            pool,
        })
    }
}

impl Fitness for PairwiseConnectivityFitness {
    fn evaluate(&self, genes: &[u32]) -> Result<f64> {
        let removed = removed_mask(&self.pool, self.neighbors.len(), genes)?;
        let pairs: u64 = component_sizes(&self.neighbors, &removed)
            .into_iter()
            .map(|c| (c as u64) * (c as u64 - 1) / 2)
            .sum();
        Ok(pairs as f64)
    }

    fn evaluate_batch(&self, batch: &PopulationMatrix) -> Result<FitnessVector> {
        pc_fitness(&self.adj, batch, &self.pool)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GenePool;

    fn k4() -> Graph {
        Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn empty_perturbation_on_k4() {
        let g = k4();
        let pool = GenePool::build(&g, PoolKind::NodeRemoval).unwrap();
        let batch = PopulationMatrix::new(1, 0, vec![]).unwrap();
        assert_eq!(
            sixdst_fitness(&g.adjacency(), &batch, &pool)
                .unwrap()
                .values(),
            &[4.0]
        );
        assert_eq!(
            pc_fitness(&g.adjacency(), &batch, &pool).unwrap().values(),
            &[6.0]
        );
        let f = SixDstFitness::new(&g, pool).unwrap();
        assert_eq!(f.evaluate(&[]).unwrap(), 4.0);
    }

    #[test]
    fn star_without_center() {
        let s5 = Graph::from_edges(5, (1..5).map(|l| (0, l)));
        let pool = GenePool::build(&s5, PoolKind::NodeRemoval).unwrap();
        let batch = PopulationMatrix::from_rows(&[vec![0]]).unwrap();
        assert_eq!(
            sixdst_fitness(&s5.adjacency(), &batch, &pool)
                .unwrap()
                .values(),
            &[1.0]
        );
        let f = SixDstFitness::new(&s5, pool).unwrap();
        assert_eq!(f.evaluate(&[0]).unwrap(), 1.0);
        assert_eq!(f.evaluate_batch(&batch).unwrap().values(), &[1.0]);
    }

    #[test]
    fn all_nodes_removed() {
        let g = k4();
        let pool = GenePool::build(&g, PoolKind::NodeRemoval).unwrap();
        let batch = PopulationMatrix::from_rows(&[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(
            pc_fitness(&g.adjacency(), &batch, &pool).unwrap().values(),
            &[0.0]
        );
        let f = PairwiseConnectivityFitness::new(&g, pool).unwrap();
        assert_eq!(f.evaluate(&[0, 1, 2, 3]).unwrap(), 0.0);
    }

    #[test]
    fn edge_pool_is_rejected() {
        let g = k4();
        let pool = GenePool::build(&g, PoolKind::EdgeRemoval).unwrap();
        assert!(SixDstFitness::new(&g, pool.clone()).is_err());
        let batch = PopulationMatrix::from_rows(&[vec![0]]).unwrap();
        assert!(pc_fitness(&g.adjacency(), &batch, &pool).is_err());
    }
}
