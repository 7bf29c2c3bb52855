//! Undirected graphs, edge-list ingestion, gene pools and perturbations.

mod components;
mod generators;
mod perturb;
mod pool;

use std::collections::{HashMap, HashSet};

pub use components::{
    connected_components, connected_components_excluding, largest_component_size,
    pairwise_connectivity, Components,
};
pub use generators::{barabasi_albert, erdos_renyi};
pub use perturb::{apply_perturbation, Adjacency, Perturbation};
pub use pool::{perturbation_budget, Element, GenePool, PoolKind};

use crate::error::{Error, Result};

/// Undirected, unweighted simple graph over dense node ids `0..n`.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    labels: Vec<String>,
    label_map: HashMap<String, usize>,
}

/// What `load_edge_list` discarded while reading.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub duplicates: usize,
    pub self_loops: usize,
}

impl Graph {
    /// Builds a graph on `n` nodes labelled by their ids. Self-loops and
    /// repeated pairs are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut set = HashSet::new();
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u},{v}) outside 0..{n}");
            if u != v {
                set.insert((u.min(v), u.max(v)));
            }
        }
        Self::assemble(labels, set.into_iter().collect())
    }

    fn assemble(labels: Vec<String>, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        let label_map = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Self {
            n: labels.len(),
            edges,
            labels,
            label_map,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id]
    }

    pub fn id_of(&self, label: &str) -> Option<usize> {
        self.label_map.get(label).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::from_graph(self)
    }

    pub fn neighbor_lists(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            lists[u].push(v);
            lists[v].push(u);
        }
        lists
    }

    /// Same node set with a subset of edges removed.
    pub fn without_edges(&self, removed: &HashSet<(usize, usize)>) -> Graph {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| !removed.contains(e))
            .collect();
        Self::assemble(self.labels.clone(), edges)
    }
}

/// Parses a whitespace-separated edge list.
///
/// Labels are mapped to dense ids in order of first appearance. Blank lines
/// and lines starting with `#` or `%` are skipped.
pub fn load_edge_list(text: &str) -> Result<(Graph, LoadReport)> {
    let mut labels: Vec<String> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    let mut report = LoadReport::default();

    let mut intern = |label: &str, labels: &mut Vec<String>| -> usize {
        *ids.entry(label.to_owned()).or_insert_with(|| {
            labels.push(label.to_owned());
            labels.len() - 1
        })
    };

    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected 2 node labels, found {}", tokens.len()),
            });
        }
        let u = intern(tokens[0], &mut labels);
        let v = intern(tokens[1], &mut labels);
        if u == v {
            report.self_loops += 1;
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(key);
        } else {
            report.duplicates += 1;
        }
    }
    if labels.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok((Graph::assemble(labels, edges), report))
}
