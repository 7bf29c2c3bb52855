use proptest::prelude::*;

use psso_core::fitness::{auc, modularity, CommunityPartition, FnFitness};
use psso_core::ga::{
    crossover, eda_sample, elitism, mutate, roulette_select, run_ga, Direction, FitnessVector,
    GaParams, PopulationMatrix,
};
use psso_core::graph::{
    apply_perturbation, connected_components, GenePool, Graph, Perturbation, PoolKind,
};
use psso_core::parallel::{row_blocks, ModeTopology};
use psso_core::rng::RngPolicy;

fn population(
    max_rows: usize,
    max_cols: usize,
    pool: u32,
) -> impl Strategy<Value = PopulationMatrix> {
    (2..=max_rows, 1..=max_cols).prop_flat_map(move |(s, k)| {
        prop::collection::vec(0..pool, s * k)
            .prop_map(move |g| PopulationMatrix::new(s, k, g).unwrap())
    })
}

fn graph() -> impl Strategy<Value = Graph> {
    (2usize..16).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..40)
            .prop_map(move |e| Graph::from_edges(n, e.into_iter().filter(|(u, v)| u != v)))
    })
}

fn direction() -> impl Strategy<Value = Direction> {
    prop_oneof![Just(Direction::Maximize), Just(Direction::Minimize)]
}

/// Small integer-valued fitness so ties are common.
fn fitness_for(rows: usize) -> impl Strategy<Value = FitnessVector> {
    prop::collection::vec((-4i32..4).prop_map(f64::from), rows).prop_map(FitnessVector::new)
}

proptest! {
    #[test]
    fn operators_preserve_shape_and_range(
        pop in population(12, 8, 30),
        pc in 0.0f64..=1.0,
        pm in 0.0f64..=1.0,
        seed in any::<u64>(),
        generation in 1u64..100,
        dir in direction(),
    ) {
        let policy = RngPolicy::new(seed);
        let fit = FitnessVector::new((0..pop.rows()).map(|i| (i * 7 % 5) as f64).collect());
        let partners = roulette_select(&pop, &fit, dir, &policy, generation).unwrap();
        let c_pop = crossover(&pop, &partners, pc, &policy, generation).unwrap();
        let m_pop = mutate(&c_pop, 0, pm, 30, &policy, generation).unwrap();
        let e_pop = eda_sample(&pop, pop.rows().div_ceil(2), 30, pop.rows(), 1.0, &policy, generation).unwrap();
        for out in [&partners, &c_pop, &m_pop, &e_pop] {
            prop_assert_eq!(out.shape(), pop.shape());
            prop_assert!(out.check_genes(30).is_ok());
        }
        for i in 0..pop.rows() {
            prop_assert!(pop.iter_rows().any(|r| r == partners.row(i)));
        }
    }

    #[test]
    fn rate_extremes_are_exact(pop in population(10, 6, 20), seed in any::<u64>()) {
        let policy = RngPolicy::new(seed);
        let partners = PopulationMatrix::new(
            pop.rows(), pop.cols(), pop.as_slice().iter().map(|g| (g + 1) % 20).collect()).unwrap();
        prop_assert_eq!(&crossover(&pop, &partners, 0.0, &policy, 1).unwrap(), &pop);
        prop_assert_eq!(&crossover(&pop, &partners, 1.0, &policy, 1).unwrap(), &partners);
        prop_assert_eq!(&mutate(&pop, 0, 0.0, 20, &policy, 1).unwrap(), &pop);
    }

    #[test]
    fn mutating_a_block_equals_the_matching_rows_of_a_full_mutation(
        pop in population(16, 5, 50),
        split in 0usize..16,
        seed in any::<u64>(),
    ) {
        let policy = RngPolicy::new(seed);
        let split = split.min(pop.rows());
        let full = mutate(&pop, 0, 0.4, 50, &policy, 3).unwrap();
        let head = mutate(&pop.slice_rows(0..split), 0, 0.4, 50, &policy, 3).unwrap();
        let tail = mutate(&pop.slice_rows(split..pop.rows()), split, 0.4, 50, &policy, 3).unwrap();
        prop_assert_eq!(full.slice_rows(0..split), head);
        prop_assert_eq!(full.slice_rows(split..pop.rows()), tail);
    }

    #[test]
    fn elitism_equals_full_sort_oracle(
        (pop, m_pop, fp, fm) in population(10, 4, 9).prop_flat_map(|pop| {
            let (s, k) = pop.shape();
            (Just(pop),
             prop::collection::vec(0u32..9, s * k).prop_map(move |g| PopulationMatrix::new(s, k, g).unwrap()),
             fitness_for(s), fitness_for(s))
        }),
        dir in direction(),
    ) {
        let s = pop.rows();
        let mut stacked: Vec<(f64, usize, Vec<u32>)> = (0..s)
            .map(|i| (fp.get(i), i, pop.row(i).to_vec()))
            .chain((0..s).map(|i| (fm.get(i), s + i, m_pop.row(i).to_vec())))
            .collect();
        // insertion sort: move an entry left only past strictly worse ones
        for i in 1..stacked.len() {
            let mut j = i;
            while j > 0 && {
                let (a, b) = (stacked[j].0, stacked[j - 1].0);
                match dir { Direction::Maximize => a > b, Direction::Minimize => a < b }
            } {
                stacked.swap(j, j - 1);
                j -= 1;
            }
        }
        let (kept, kept_fit) = elitism(&pop, &m_pop, &fp, &fm, dir).unwrap();
        for (i, (f, _, row)) in stacked.iter().take(s).enumerate() {
            prop_assert_eq!(kept_fit.get(i), *f);
            prop_assert_eq!(kept.row(i), row.as_slice());
        }
    }

    #[test]
    fn perturbation_keeps_adjacency_symmetric(g in graph(), picks in prop::collection::vec(any::<u32>(), 0..6)) {
        let adj = g.adjacency();
        for kind in [PoolKind::EdgeRemoval, PoolKind::EdgeAddition, PoolKind::NodeRemoval] {
            let Ok(pool) = GenePool::build(&g, kind) else { continue };
            if pool.is_empty() { continue; }
            let genes: Vec<u32> = picks.iter().map(|p| p % pool.len() as u32).collect();
            let out = apply_perturbation(&adj, &Perturbation::new(&pool, &genes).unwrap());
            prop_assert!(out.bits().is_symmetric());
            let none = apply_perturbation(&adj, &Perturbation::new(&pool, &[]).unwrap());
            prop_assert_eq!(none.edges(), adj.edges());
            match kind {
                PoolKind::EdgeRemoval => prop_assert!(out.edge_count() <= adj.edge_count()),
                PoolKind::EdgeAddition => prop_assert!(out.edge_count() >= adj.edge_count()),
                PoolKind::NodeRemoval => prop_assert!(out.edge_count() <= adj.edge_count()),
            }
        }
    }

    #[test]
    fn components_are_maximal_connected_sets(g in graph()) {
        let adj = g.adjacency();
        let comps = connected_components(&adj);
        let n = g.node_count();
        let mut label = vec![usize::MAX; n];
        for (c, group) in comps.groups().iter().enumerate() {
            for &u in group {
                prop_assert_eq!(label[u], usize::MAX);
                label[u] = c;
            }
        }
        prop_assert!(label.iter().all(|&l| l != usize::MAX));
        // every edge stays within a component
        for &(u, v) in g.edges() {
            prop_assert_eq!(label[u], label[v]);
        }
        // each component is internally connected: walk Warshall closure over the edges
        let mut reach = vec![vec![false; n]; n];
        for u in 0..n { reach[u][u] = true; }
        for &(u, v) in g.edges() { reach[u][v] = true; reach[v][u] = true; }
        for w in 0..n { for u in 0..n { for v in 0..n {
            if reach[u][w] && reach[w][v] { reach[u][v] = true; }
        }}}
        for u in 0..n { for v in 0..n {
            prop_assert_eq!(reach[u][v], label[u] == label[v]);
        }}
    }

    #[test]
    fn single_community_has_zero_modularity(g in graph()) {
        prop_assume!(g.edge_count() > 0);
        let one = CommunityPartition::from_labels(&vec![0; g.node_count()]);
        prop_assert!(modularity(&g.adjacency(), &one).unwrap().abs() < 1e-12);
    }

    #[test]
    fn separated_scores_give_unit_auc(
        pos in prop::collection::vec(10.0f64..20.0, 1..20),
        neg in prop::collection::vec(0.0f64..10.0, 1..20),
    ) {
        prop_assert_eq!(auc(&pos, &neg), 1.0);
        prop_assert_eq!(auc(&neg, &pos), 0.0);
    }

    #[test]
    fn row_blocks_partition_the_population(s in 1usize..500, pn in 1usize..64) {
        let blocks = row_blocks(s, pn);
        let size = s.div_ceil(pn);
        prop_assert_eq!(blocks[0].start, 0);
        prop_assert_eq!(blocks.last().unwrap().end, s);
        for pair in blocks.windows(2) {
            prop_assert_eq!(pair[0].end, pair[1].start);
            prop_assert_eq!(pair[0].len(), size);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn best_so_far_never_regresses(seed in any::<u64>(), dir in direction(), salt in any::<u32>()) {
        let f = FnFitness(move |genes: &[u32]| {
            genes.iter().fold(salt as u64, |h, &g| h.rotate_left(5) ^ (g as u64).wrapping_mul(0x9E37_79B9)) as f64
                % 1000.0
        });
        let params = GaParams {
            pc: 0.8, pm: 0.2, pop_size: 8, budget: 4, iterations: 30,
            direction: dir, eda_interval: Some(4), seed,
        };
        let run = run_ga(&params, 40, &f, &ModeTopology::s()).unwrap();
        for pair in run.history.windows(2) {
            prop_assert!(dir.rank(pair[1].best, pair[0].best) != std::cmp::Ordering::Greater);
        }
    }
}

#[test]
fn constant_fitness_keeps_shape_and_value() {
    let params = GaParams {
        pc: 0.5,
        pm: 0.5,
        pop_size: 6,
        budget: 3,
        iterations: 10,
        direction: Direction::Maximize,
        eda_interval: None,
        seed: 1,
    };
    let run = run_ga(&params, 12, &FnFitness(|_: &[u32]| 4.0), &ModeTopology::s()).unwrap();
    assert!(run.history.iter().all(|g| g.best == 4.0 && g.mean == 4.0));
    assert_eq!(run.population.shape(), (6, 3));
}
