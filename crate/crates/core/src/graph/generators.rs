use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;

/// G(n, p): each of the n(n-1)/2 pairs is an edge independently with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Preferential attachment: starts from a clique on `m + 1` nodes, then each
/// new node attaches to `m` distinct existing nodes chosen with probability
/// proportional to degree. With `m = 1` the result is a tree with `n - 1` edges.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Graph {
    assert!(m >= 1 && n > m, "need n > m >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    // every edge endpoint appears once per incident edge
    let mut endpoints: Vec<usize> = Vec::new();
    for u in 0..=m {
        for v in u + 1..=m {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    for new in m + 1..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            edges.push((t, new));
            endpoints.push(t);
            endpoints.push(new);
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ba_tree_has_n_minus_one_edges() {
        let g = barabasi_albert(500, 1, 7);
        assert_eq!(g.node_count(), 500);
        assert_eq!(g.edge_count(), 499);
    }

    #[test]
    fn generators_are_seeded() {
        assert_eq!(erdos_renyi(40, 0.1, 3), erdos_renyi(40, 0.1, 3));
        assert_eq!(barabasi_albert(60, 2, 3), barabasi_albert(60, 2, 3));
        assert_ne!(erdos_renyi(40, 0.1, 3), erdos_renyi(40, 0.1, 4));
    }
}
