use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::Graph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PoolKind {
    EdgeRemoval,
    EdgeAddition,
    NodeRemoval,
}

impl PoolKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PoolKind::EdgeRemoval => "edge-removal",
            PoolKind::EdgeAddition => "edge-addition",
            PoolKind::NodeRemoval => "node-removal",
        }
    }
}

impl fmt::Display for PoolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PoolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-removal" => Ok(PoolKind::EdgeRemoval),
            "edge-addition" => Ok(PoolKind::EdgeAddition),
            "node-removal" => Ok(PoolKind::NodeRemoval),
            other => Err(Error::InvalidParams(format!("unknown pool kind '{other}'"))),
        }
    }
}

/// A single perturbation element. Edges are stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Edge(usize, usize),
    Node(usize),
}

/// Indexed universe of candidate perturbations; a chromosome holds indices into it.
#[derive(Clone, Debug)]
pub struct GenePool {
    kind: PoolKind,
    genes: Vec<Element>,
    reverse: HashMap<Element, u32>,
}

impl GenePool {
    /// Enumerates the pool in a fixed order: edges by `(min, max)` id,
    /// complement pairs in the same order, nodes by id.
    pub fn build(graph: &Graph, kind: PoolKind) -> Result<Self> {
        if graph.node_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        let genes: Vec<Element> = match kind {
            PoolKind::EdgeRemoval => graph
                .edges()
                .iter()
                .map(|&(u, v)| Element::Edge(u, v))
                .collect(),
            PoolKind::EdgeAddition => {
                let n = graph.node_count();
                let mut out = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if !graph.has_edge(u, v) {
                            out.push(Element::Edge(u, v));
                        }
                    }
                }
                out
            }
            PoolKind::NodeRemoval => (0..graph.node_count()).map(Element::Node).collect(),
        };
        Self::from_elements(kind, genes)
    }

    /// Pool over an explicit element list, e.g. only the training edges of a
    /// link-prediction split.
    pub fn from_elements(kind: PoolKind, genes: Vec<Element>) -> Result<Self> {
        if genes.is_empty() {
            return Err(Error::EmptyPool(kind));
        }
        let reverse = genes
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as u32))
            .collect::<HashMap<_, _>>();
        if reverse.len() != genes.len() {
            return Err(Error::InvalidParams(
                "gene pool contains repeated elements".into(),
            ));
        }
        Ok(Self {
            kind,
            genes,
            reverse,
        })
    }

    pub fn kind(&self) -> PoolKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn genes(&self) -> &[Element] {
        &self.genes
    }

    pub fn element(&self, gene: u32) -> Element {
        self.genes[gene as usize]
    }

    pub fn index_of(&self, element: &Element) -> Option<u32> {
        self.reverse.get(element).copied()
    }
}

/// Genes per individual: `ceil(rate * basis)` where the basis is the edge
/// count for edge pools and the node count for node pools.
pub fn perturbation_budget(graph: &Graph, kind: PoolKind, rate: f64) -> Result<usize> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "perturbation rate {rate} not in (0, 1]"
        )));
    }
    let basis = match kind {
        PoolKind::EdgeRemoval | PoolKind::EdgeAddition => graph.edge_count(),
        PoolKind::NodeRemoval => graph.node_count(),
    };
    // the epsilon absorbs products like 0.1 * 30 = 3.0000000000000004
    let k = (rate * basis as f64 - 1e-9).ceil().max(1.0) as usize;
    Ok(k)
}
