//! Community partitions, greedy modularity detection, modularity, NMI and
//! the community-detection attack objective.

use std::collections::{BTreeMap, HashMap};

use super::{Fitness, Task};
use crate::error::{Error, Result};
use crate::graph::{apply_perturbation, Adjacency, GenePool, Graph, Perturbation};

/// Fitness reported when a perturbation leaves no edges: the lower bound of
/// modularity, i.e. a maximally successful attack.
pub const EDGELESS_MODULARITY: f64 = -0.5;

/// Assignment of every node to a community with dense ids `0..count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommunityPartition {
    assignment: Vec<usize>,
    count: usize,
}

impl CommunityPartition {
    /// Relabels arbitrary community labels to dense ids in order of first appearance.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut ids = HashMap::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l.clone()).or_insert(next)
            })
            .collect();
        Self {
            assignment,
            count: ids.len(),
        }
    }

    /// Groups must cover `0..n` exactly once.
    pub fn from_groups(n: usize, groups: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (c, group) in groups.iter().enumerate() {
            for &u in group {
                if u >= n || labels[u] != usize::MAX {
                    return Err(Error::InvalidParams(format!(
                        "node {u} is out of range or assigned twice"
                    )));
                }
                labels[u] = c;
            }
        }
        if let Some(u) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidParams(format!("node {u} has no community")));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn community_count(&self) -> usize {
        self.count
    }

    pub fn community_of(&self, u: usize) -> usize {
        self.assignment[u]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.count];
        for (u, &c) in self.assignment.iter().enumerate() {
            groups[c].push(u);
        }
        groups
    }
}

/// Reads `label community` lines. Every node of `graph` must appear once.
pub fn load_ground_truth(text: &str, graph: &Graph) -> Result<CommunityPartition> {
    let mut labels: Vec<Option<String>> = vec![None; graph.node_count()];
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: idx + 1,
            message,
        };
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(parse_err(format!(
                "expected 'label community', found {} tokens",
                tokens.len()
            )));
        }
        let node = graph
            .id_of(tokens[0])
            .ok_or_else(|| parse_err(format!("unknown node '{}'", tokens[0])))?;
        if labels[node].replace(tokens[1].to_owned()).is_some() {
            return Err(parse_err(format!("node '{}' assigned twice", tokens[0])));
        }
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(u, l)| {
            l.ok_or_else(|| {
                Error::InvalidParams(format!("node '{}' has no community", graph.label(u)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CommunityPartition::from_labels(&labels))
}

/// Newman modularity `Q = sum_c (L_c / m - (D_c / 2m)^2)`.
pub fn modularity(adj: &Adjacency, partition: &CommunityPartition) -> Result<f64> {
    if partition.node_count() != adj.n() {
        return Err(Error::PartitionMismatch(partition.node_count(), adj.n()));
    }
    let m = adj.edge_count();
    if m == 0 {
        return Err(Error::UndefinedModularity);
    }
    let mut inner = vec![0usize; partition.community_count()];
    let mut degree = vec![0usize; partition.community_count()];
    for u in 0..adj.n() {
        let cu = partition.community_of(u);
        degree[cu] += adj.degree(u);
        for v in adj.neighbors(u).filter(|&v| v > u) {
            if partition.community_of(v) == cu {
                inner[cu] += 1;
            }
        }
    }
    let m = m as f64;
    Ok(inner
        .iter()
        .zip(&degree)
        .map(|(&l, &d)| l as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum())
}

/// Greedy agglomerative modularity maximization.
///
/// Starts from singletons and repeatedly merges the pair of adjacent
/// communities with the largest modularity gain `2 (e_ij - a_i a_j)` until
/// no merge has a positive gain. Equal gains go to the smallest `(i, j)`.
pub fn detect_communities(adj: &Adjacency) -> CommunityPartition {
    let n = adj.n();
    let m = adj.edge_count();
    if m == 0 {
        return CommunityPartition::from_labels(&(0..n).collect::<Vec<_>>());
    }
    let two_m = 2.0 * m as f64;
    // links[i][j]: fraction of edge ends joining communities i and j (each direction)
    let mut links: Vec<BTreeMap<usize, f64>> = (0..n)
        .map(|u| adj.neighbors(u).map(|v| (v, 1.0 / two_m)).collect())
        .collect();
    let mut share: Vec<f64> = (0..n).map(|u| adj.degree(u) as f64 / two_m).collect();
    let mut active = vec![true; n];
    let mut owner: Vec<usize> = (0..n).collect();

    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in (0..n).filter(|&i| active[i]) {
            for (&j, &e) in links[i].range(i + 1..) {
                let gain = 2.0 * (e - share[i] * share[j]);
                if best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, i, j));
                }
            }
        }
        let Some((gain, i, j)) = best else { break };
        if gain <= 1e-12 {
            break;
        }
        // fold j into i
        let absorbed = std::mem::take(&mut links[j]);
        for (k, e) in absorbed {
            if k == i {
                continue;
            }
            *links[i].entry(k).or_insert(0.0) += e;
            let row = &mut links[k];
            row.remove(&j);
            *row.entry(i).or_insert(0.0) += e;
        }
        links[i].remove(&j);
        share[i] += share[j];
        share[j] = 0.0;
        active[j] = false;
        for o in owner.iter_mut().filter(|o| **o == j) {
            *o = i;
        }
    }
    CommunityPartition::from_labels(&owner)
}

fn entropy(counts: impl Iterator<Item = usize>, total: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information with arithmetic-mean normalization,
/// `2 I(X; Y) / (H(X) + H(Y))`. Two single-community partitions score 1.
pub fn nmi(a: &CommunityPartition, b: &CommunityPartition) -> Result<f64> {
    if a.node_count() != b.node_count() {
        return Err(Error::PartitionMismatch(a.node_count(), b.node_count()));
    }
    let n = a.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let total = n as f64;
    let mut joint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut count_a = vec![0usize; a.community_count()];
    let mut count_b = vec![0usize; b.community_count()];
    for u in 0..n {
        let (ca, cb) = (a.community_of(u), b.community_of(u));
        *joint.entry((ca, cb)).or_insert(0) += 1;
        count_a[ca] += 1;
        count_b[cb] += 1;
    }
    let ha = entropy(count_a.iter().copied(), total);
    let hb = entropy(count_b.iter().copied(), total);
    if ha + hb == 0.0 {
        return Ok(1.0);
    }
    let mut mutual = 0.0;
    for (&(ca, cb), &c) in &joint {
        let c = c as f64;
        mutual += c / total * (total * c / (count_a[ca] as f64 * count_b[cb] as f64)).ln();
    }
    Ok((2.0 * mutual / (ha + hb)).clamp(0.0, 1.0))
}

/// Community detector attacked by [`CdaFitness`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Detector {
    #[default]
    GreedyModularity,
}

impl Detector {
    pub fn detect(self, adj: &Adjacency) -> CommunityPartition {
        match self {
            Detector::GreedyModularity => detect_communities(adj),
        }
    }
}

/// Minimize the modularity of the communities the detector finds on the
/// perturbed graph.
pub struct CdaFitness {
    adj: Adjacency,
    pool: GenePool,
    detector: Detector,
}

impl CdaFitness {
    pub fn new(graph: &Graph, pool: GenePool, detector: Detector) -> Result<Self> {
        Task::CdaModularity.check_pool(pool.kind())?;
        Ok(Self {
            adj: graph.adjacency(),
            pool,
            detector,
        })
    }

    /// The perturbed adjacency for one individual.
    pub fn perturbed(&self, genes: &[u32]) -> Result<Adjacency> {
        Ok(apply_perturbation(
            &self.adj,
            &Perturbation::new(&self.pool, genes)?,
        ))
    }
}

impl Fitness for CdaFitness {
    fn evaluate(&self, genes: &[u32]) -> Result<f64> {
        let adj = self.perturbed(genes)?;
        if adj.edge_count() == 0 {
            return Ok(EDGELESS_MODULARITY);
        }
        modularity(&adj, &self.detector.detect(&adj))
    }
}
