use super::{Element, GenePool, Graph};
use crate::bitmat::BitMatrix;
use crate::error::{Error, Result};

/// Symmetric 0/1 adjacency with an all-zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    bits: BitMatrix,
}

impl Adjacency {
    pub fn from_graph(graph: &Graph) -> Self {
        let mut adj = Self::empty(graph.node_count());
        for &(u, v) in graph.edges() {
            adj.add_edge(u, v);
        }
        adj
    }

    pub fn empty(n: usize) -> Self {
        Self {
            bits: BitMatrix::zeros(n),
        }
    }

    pub fn n(&self) -> usize {
        self.bits.n()
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits.get(u, v)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.bits.set(u, v);
            self.bits.set(v, u);
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.bits.clear(u, v);
        self.bits.clear(v, u);
    }

    /// Zeroes the node's row and column; the node stays as an isolated vertex.
    pub fn remove_node(&mut self, u: usize) {
        let neighbors: Vec<usize> = self.bits.row_ones(u).collect();
        for v in neighbors {
            self.bits.clear(v, u);
        }
        self.bits.row_mut(u).fill(0);
    }

    pub fn degree(&self, u: usize) -> usize {
        self.bits.row_count(u)
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.bits.row_ones(u)
    }

    pub fn edge_count(&self) -> usize {
        self.bits.count_ones() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|u| {
                self.neighbors(u)
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .collect()
    }
}

/// One decoded individual: gene ids into a pool.
#[derive(Clone, Copy, Debug)]
pub struct Perturbation<'a> {
    pool: &'a GenePool,
    genes: &'a [u32],
}

impl<'a> Perturbation<'a> {
    pub fn new(pool: &'a GenePool, genes: &'a [u32]) -> Result<Self> {
        if let Some(&gene) = genes.iter().find(|&&g| g as usize >= pool.len()) {
            return Err(Error::GeneOutOfRange {
                gene,
                pool_len: pool.len(),
            });
        }
        Ok(Self { pool, genes })
    }

    pub fn genes(&self) -> &'a [u32] {
        self.genes
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + 'a {
        let pool = self.pool;
        self.genes.iter().map(move |&g| pool.element(g))
    }
}

/// Returns a perturbed copy of `adj`. Repeated genes and edges that are
/// already absent (or present, for additions) are no-ops.
pub fn apply_perturbation(adj: &Adjacency, p: &Perturbation<'_>) -> Adjacency {
    let mut out = adj.clone();
    apply_in_place(&mut out, p.pool.kind(), p.elements());
    out
}

pub(crate) fn apply_in_place(
    adj: &mut Adjacency,
    kind: super::PoolKind,
    elements: impl Iterator<Item = Element>,
) {
    use super::PoolKind::*;
    for element in elements {
        match (kind, element) {
            (EdgeRemoval, Element::Edge(u, v)) => adj.remove_edge(u, v),
            (EdgeAddition, Element::Edge(u, v)) => adj.add_edge(u, v),
            (NodeRemoval, Element::Node(u)) => adj.remove_node(u),
            (kind, element) => unreachable!("{element:?} in a {kind} pool"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{connected_components, PoolKind};

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l)))
    }

    #[test]
    fn removing_middle_of_path() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let pool = GenePool::build(&p3, PoolKind::NodeRemoval).unwrap();
        let genes = [1];
        let out = apply_perturbation(&p3.adjacency(), &Perturbation::new(&pool, &genes).unwrap());
        assert_eq!(out.degree(1), 0);
        assert_eq!(out.edge_count(), 0);
        let comps = connected_components(&out);
        assert_eq!(comps.groups(), &[vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn duplicate_genes_are_idempotent() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let pool = GenePool::build(&k4, PoolKind::EdgeRemoval).unwrap();
        let adj = k4.adjacency();
        let once = apply_perturbation(&adj, &Perturbation::new(&pool, &[0]).unwrap());
        let twice = apply_perturbation(&adj, &Perturbation::new(&pool, &[0, 0]).unwrap());
        assert_eq!(once, twice);
        assert!(!once.has_edge(0, 1) && !once.has_edge(1, 0));
        assert_eq!(once.edge_count(), 5);
    }

    #[test]
    fn star_without_center_is_all_singletons() {
        let s5 = star(4);
        let pool = GenePool::build(&s5, PoolKind::NodeRemoval).unwrap();
        let out = apply_perturbation(&s5.adjacency(), &Perturbation::new(&pool, &[0]).unwrap());
        assert_eq!(out.edge_count(), 0);
        // brute force: no node reaches any other
        for u in 0..5 {
            for v in 0..5 {
                assert!(!out.has_edge(u, v));
            }
        }
        assert_eq!(connected_components(&out).groups().len(), 5);
    }

    #[test]
    fn edge_addition_sets_both_directions() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let pool = GenePool::build(&p3, PoolKind::EdgeAddition).unwrap();
        let out = apply_perturbation(&p3.adjacency(), &Perturbation::new(&pool, &[0]).unwrap());
        assert!(out.has_edge(0, 2) && out.has_edge(2, 0));
    }

    #[test]
    fn input_is_untouched_and_empty_is_identity() {
        let g = crate::graph::erdos_renyi(20, 0.3, 9);
        let adj = g.adjacency();
        let pool = GenePool::build(&g, PoolKind::NodeRemoval).unwrap();
        let before = adj.clone();
        let _ = apply_perturbation(&adj, &Perturbation::new(&pool, &[1, 2, 3]).unwrap());
        assert_eq!(adj, before);
        assert_eq!(
            apply_perturbation(&adj, &Perturbation::new(&pool, &[]).unwrap()),
            adj
        );
    }

    #[test]
    fn out_of_range_gene_is_rejected() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let pool = GenePool::build(&p3, PoolKind::EdgeRemoval).unwrap();
        assert!(matches!(
            Perturbation::new(&pool, &[2]),
            Err(Error::GeneOutOfRange {
                gene: 2,
                pool_len: 2
            })
        ));
    }
}
