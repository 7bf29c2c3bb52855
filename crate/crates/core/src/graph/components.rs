use super::Adjacency;

/// Partition of nodes into connected components. Members are ascending and
/// components are ordered by their smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    groups: Vec<Vec<usize>>,
}

impl Components {
    pub fn from_groups(mut groups: Vec<Vec<usize>>) -> Self {
        for g in &mut groups {
            g.sort_unstable();
        }
        groups.retain(|g| !g.is_empty());
        groups.sort_unstable_by_key(|g| g[0]);
        Self { groups }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.groups.iter().map(Vec::len)
    }
}

/// Components by breadth-first traversal. Isolated nodes, including removed
/// ones, are singleton components.
pub fn connected_components(adj: &Adjacency) -> Components {
    traverse(adj, &vec![false; adj.n()])
}

/// Like [`connected_components`] but leaves the flagged nodes out entirely.
pub fn connected_components_excluding(adj: &Adjacency, excluded: &[bool]) -> Components {
    assert_eq!(excluded.len(), adj.n());
    traverse(adj, excluded)
}

fn traverse(adj: &Adjacency, excluded: &[bool]) -> Components {
    let n = adj.n();
    let mut seen = excluded.to_vec();
    let mut groups = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut group = Vec::new();
        while let Some(u) = queue.pop_front() {
            group.push(u);
            for v in adj.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        group.sort_unstable();
        groups.push(group);
    }
    Components { groups }
}

/// `sum |C| (|C| - 1) / 2` over components: the number of connected node pairs.
pub fn pairwise_connectivity(components: &Components) -> u64 {
    components
        .sizes()
        .map(|s| (s as u64) * (s as u64).saturating_sub(1) / 2)
        .sum()
}

pub fn largest_component_size(components: &Components) -> usize {
    components.sizes().max().unwrap_or(0)
}
