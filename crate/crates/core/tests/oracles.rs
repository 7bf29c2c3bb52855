//! Fitness and graph routines cross-checked against independent,
//! deliberately naive reimplementations.

use std::collections::VecDeque;

use psso_core::fitness::{
    accessibility_matrix, detect_communities, modularity, nmi, pc_fitness, sixdst_fitness,
    CommunityPartition,
};
use psso_core::ga::PopulationMatrix;
use psso_core::graph::{load_edge_list, Adjacency, Element, GenePool, Graph, PoolKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KARATE: &str = include_str!("../../../data/karate.edges");

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.random_range(4..=64);
    let density = rng.random_range(0.02..=0.5);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < density {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Reachability by breadth-first search from every node over edge lists.
fn bfs_reach(n: usize, edges: &[(usize, usize)], removed: &[bool]) -> Vec<Vec<bool>> {
    let mut nbrs = vec![Vec::new(); n];
    for &(u, v) in edges {
        if !removed[u] && !removed[v] {
            nbrs[u].push(v);
            nbrs[v].push(u);
        }
    }
    (0..n)
        .map(|src| {
            let mut seen = vec![false; n];
            seen[src] = true;
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for &v in &nbrs[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            seen
        })
        .collect()
}

#[test]
fn accessibility_matches_traversal_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE55);
    for _ in 0..200 {
        let g = random_graph(&mut rng);
        let n = g.node_count();
        let reach = bfs_reach(n, g.edges(), &vec![false; n]);
        let m = accessibility_matrix(&g.adjacency());
        for u in 0..n {
            for v in 0..n {
                assert_eq!(m.get(u, v), reach[u][v], "n={n} ({u},{v})");
            }
        }
    }
}

#[test]
fn squaring_count_on_paths_is_logarithmic_in_diameter() {
    for n in 2..=64usize {
        let g = Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1)));
        let diameter = (n - 1) as f64;
        let bound = diameter.log2().ceil() as usize + 1;
        let m = accessibility_matrix(&g.adjacency());
        assert!(
            m.multiplications() <= bound,
            "P{n}: {} > {bound}",
            m.multiplications()
        );
        assert_eq!(m.max_row_sum(), n);
    }
}

#[test]
fn mcn_and_pc_match_component_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    for case in 0..500 {
        let g = random_graph(&mut rng);
        let n = g.node_count();
        let pool = GenePool::build(&g, PoolKind::NodeRemoval).unwrap();
        let k = rng.random_range(1..=n / 2);
        let genes: Vec<u32> = (0..k)
            .map(|_| rng.random_range(0..pool.len() as u32))
            .collect();

        let mut removed = vec![false; n];
        for &gene in &genes {
            let Element::Node(u) = pool.element(gene) else {
                unreachable!()
            };
            removed[u] = true;
        }
        let reach = bfs_reach(n, g.edges(), &removed);
        let mut expected_mcn = 1;
        let mut expected_pc = 0u64;
        let mut counted = vec![false; n];
        for u in 0..n {
            if removed[u] || counted[u] {
                continue;
            }
            let size = (0..n)
                .filter(|&v| reach[u][v])
                .inspect(|&v| counted[v] = true)
                .count();
            expected_mcn = expected_mcn.max(size);
            expected_pc += (size * (size - 1) / 2) as u64;
        }

        let batch = PopulationMatrix::from_rows(&[genes]).unwrap();
        let adj = g.adjacency();
        let mcn = sixdst_fitness(&adj, &batch, &pool).unwrap().get(0);
        let pc = pc_fitness(&adj, &batch, &pool).unwrap().get(0);
        assert_eq!(mcn, expected_mcn as f64, "case {case}");
        assert_eq!(pc, expected_pc as f64, "case {case}");
    }
}

/// Q straight from the definition: sum over node pairs of
/// (A_uv - d_u d_v / 2m) [c_u = c_v] / 2m.
fn naive_modularity(g: &Graph, assignment: &[usize]) -> f64 {
    let n = g.node_count();
    let m = g.edge_count() as f64;
    let deg: Vec<f64> = (0..n)
        .map(|u| g.edges().iter().filter(|&&(a, b)| a == u || b == u).count() as f64)
        .collect();
    let mut q = 0.0;
    for u in 0..n {
        for v in 0..n {
            if assignment[u] == assignment[v] {
                let a = if g.has_edge(u, v) { 1.0 } else { 0.0 };
                q += a - deg[u] * deg[v] / (2.0 * m);
            }
        }
    }
    q / (2.0 * m)
}

/// All set partitions of `0..n` as restricted growth strings.
fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().max().map_or(0, |&m| m + 1);
        for label in 0..=next {
            prefix.push(label);
            grow(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), n, &mut out);
    out
}

#[test]
fn two_triangles_detection_is_the_exhaustive_optimum() {
    let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
    let partitions = all_partitions(6);
    assert_eq!(partitions.len(), 203);
    let best = partitions
        .iter()
        .max_by(|a, b| naive_modularity(&g, a).total_cmp(&naive_modularity(&g, b)))
        .unwrap();
    let found = detect_communities(&g.adjacency());
    assert_eq!(found.community_count(), 2);
    assert!(found.communities().iter().all(|c| c.len() == 3));
    assert_eq!(found, CommunityPartition::from_labels(best));
    let q = modularity(&g.adjacency(), &found).unwrap();
    assert!((q - 0.5).abs() < 1e-12);
    assert!((q - naive_modularity(&g, best)).abs() < 1e-12);
}

/// Agglomerative greedy that rescores every candidate merge by recomputing Q
/// from scratch.
fn naive_greedy(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let current = naive_modularity(g, &label);
        let mut best: Option<(f64, usize, usize)> = None;
        let mut ids: Vec<usize> = label.clone();
        ids.sort_unstable();
        ids.dedup();
        for (x, &a) in ids.iter().enumerate() {
            for &b in &ids[x + 1..] {
                let adjacent = g.edges().iter().any(|&(u, v)| {
                    (label[u] == a && label[v] == b) || (label[u] == b && label[v] == a)
                });
                if !adjacent {
                    continue;
                }
                let merged: Vec<usize> =
                    label.iter().map(|&l| if l == b { a } else { l }).collect();
                let gain = naive_modularity(g, &merged) - current;
                if best.is_none_or(|(bg, _, _)| gain > bg + 1e-12) {
                    best = Some((gain, a, b));
                }
            }
        }
        match best {
            Some((gain, a, b)) if gain > 1e-12 => {
                label.iter_mut().filter(|l| **l == b).for_each(|l| *l = a)
            }
            _ => return label,
        }
    }
}

#[test]
fn karate_detection_agrees_with_naive_greedy() {
    let (g, _) = load_edge_list(KARATE).unwrap();
    let ours = detect_communities(&g.adjacency());
    let q = modularity(&g.adjacency(), &ours).unwrap();
    assert!((q - naive_modularity(&g, ours.assignment())).abs() < 1e-12);
    let reference = naive_modularity(&g, &naive_greedy(&g));
    assert!((q - reference).abs() <= 0.02, "ours {q}, naive {reference}");
    // networkx greedy_modularity_communities on the unweighted graph
    assert!((q - 0.3806706114398422).abs() <= 0.02, "ours {q}");
}

/// NMI from the contingency table with arithmetic-mean normalization.
fn hand_nmi(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let ka = a.iter().max().unwrap() + 1;
    let kb = b.iter().max().unwrap() + 1;
    let mut table = vec![vec![0.0; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x][y] += 1.0;
    }
    let row: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let col: Vec<f64> = (0..kb).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let h = |c: &[f64]| {
        -c.iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| x / n * (x / n).ln())
            .sum::<f64>()
    };
    let mut mi = 0.0;
    for i in 0..ka {
        for j in 0..kb {
            let nij = table[i][j];
            if nij > 0.0 {
                mi += nij / n * (n * nij / (row[i] * col[j])).ln();
            }
        }
    }
    let (ha, hb) = (h(&row), h(&col));
    if ha == 0.0 && hb == 0.0 {
        1.0
    } else {
        mi / ((ha + hb) / 2.0)
    }
}

#[test]
fn nmi_matches_contingency_formula() {
    let part = |l: &[usize]| CommunityPartition::from_labels(l);
    // {ab|cd} against {ac|bd}: independent, so zero
    assert_eq!(
        nmi(&part(&[0, 0, 1, 1]), &part(&[0, 1, 0, 1])).unwrap(),
        0.0
    );
    // reference values from scikit-learn's normalized_mutual_info_score
    let cases: [(&[usize], &[usize], f64); 2] = [
        (&[0, 0, 0, 1, 1, 2], &[0, 0, 1, 1, 2, 2], 0.5206652463984818),
        (&[0, 0, 1, 1, 1], &[0, 1, 1, 2, 2], 0.4580652856440157),
    ];
    for (a, b, expected) in cases {
        let v = nmi(&part(a), &part(b)).unwrap();
        assert!((v - expected).abs() < 1e-12, "{v} vs {expected}");
        assert!((v - hand_nmi(a, b)).abs() < 1e-12);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let n = rng.random_range(2..30);
        let a: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
        let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..5)).collect();
        let (pa, pb) = (part(&a), part(&b));
        let v = nmi(&pa, &pb).unwrap();
        assert!((v - hand_nmi(pa.assignment(), pb.assignment())).abs() < 1e-12);
        assert!((v - nmi(&pb, &pa).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn perturbed_graphs_leave_the_input_untouched() {
    let (g, _) = load_edge_list(KARATE).unwrap();
    let adj: Adjacency = g.adjacency();
    let before = adj.edges();
    let pool = GenePool::build(&g, PoolKind::NodeRemoval).unwrap();
    let batch = PopulationMatrix::from_rows(&[vec![0, 33, 5], vec![1, 2, 3]]).unwrap();
    let first = sixdst_fitness(&adj, &batch, &pool).unwrap();
    assert_eq!(first, sixdst_fitness(&adj, &batch, &pool).unwrap());
    assert_eq!(adj.edges(), before);
}
