//! Loop-based reference mode: one individual at a time, per-individual
//! fitness calls, no matrices. Draws the same streams as the batched modes.

use std::time::Instant;

use rand::Rng;

use super::ModeTopology;
use crate::error::{Error, Result};
use crate::fitness::Fitness;
use crate::ga::{
    eda_elite_count, rank_weights, roulette_spin, Direction, FitnessVector, GaParams,
    GenerationRecord, PopulationMatrix, RunResult, EDA_SMOOTHING,
};
use crate::rng::{RngPolicy, Role};

fn evaluate_all(fitness: &dyn Fitness, rows: &[Vec<u32>]) -> Result<Vec<f64>> {
    rows.iter()
        .enumerate()
        .map(|(row, genes)| {
            let v = fitness.evaluate(genes)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NanFitness { row })
            }
        })
        .collect()
}

/// Indices of `fit` sorted best first; stable.
fn ranked(fit: &[f64], dir: Direction) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..fit.len()).collect();
    idx.sort_by(|&a, &b| dir.rank(fit[a], fit[b]));
    idx
}

pub fn run_serial(params: &GaParams, pool_len: usize, fitness: &dyn Fitness) -> Result<RunResult> {
    params.validate()?;
    if pool_len == 0 {
        return Err(Error::InvalidParams("gene pool is empty".into()));
    }
    let started = Instant::now();
    let policy = RngPolicy::new(params.seed);
    let (s, k, dir) = (params.pop_size, params.budget, params.direction);
    let upper = pool_len as u32;

    let initial: Vec<Vec<u32>> = (0..s)
        .map(|i| {
            let mut rng = policy.stream(0, Role::Init, i);
            (0..k).map(|_| rng.random_range(0..upper)).collect()
        })
        .collect();
    let initial_fit = evaluate_all(fitness, &initial)?;
    let order = ranked(&initial_fit, dir);
    let mut pop: Vec<Vec<u32>> = order.iter().map(|&i| initial[i].clone()).collect();
    let mut fit: Vec<f64> = order.iter().map(|&i| initial_fit[i]).collect();
    let setup = started.elapsed();

    let mut history = Vec::with_capacity(params.iterations);
    for g in 1..=params.iterations {
        let gen_start = Instant::now();
        let key = g as u64;

        let mut children: Vec<Vec<u32>> = Vec::with_capacity(s);
        if params.is_eda_generation(key) {
            let elite = eda_elite_count(s);
            let total = elite as f64 + EDA_SMOOTHING;
            for i in 0..s {
                let mut rng = policy.stream(key, Role::Eda, i);
                let child = (0..k)
                    .map(|j| {
                        let u = rng.random::<f64>() * total;
                        if u < elite as f64 {
                            pop[(u as usize).min(elite - 1)][j]
                        } else {
                            rng.random_range(0..upper)
                        }
                    })
                    .collect();
                children.push(child);
            }
        } else {
            let weights = rank_weights(&fit, dir)?;
            let total: f64 = weights.iter().sum();
            for i in 0..s {
                let partner =
                    roulette_spin(&weights, total, &mut policy.stream(key, Role::Select, i));
                let mut rng = policy.stream(key, Role::CrossoverMask, i);
                let child = (0..k)
                    .map(|j| {
                        if rng.random::<f64>() < params.pc {
                            pop[partner][j]
                        } else {
                            pop[i][j]
                        }
                    })
                    .collect();
                children.push(child);
            }
        }

        for (i, child) in children.iter_mut().enumerate() {
            let mut mask = policy.stream(key, Role::MutationMask, i);
            let mut fresh = policy.stream(key, Role::MutationIndex, i);
            for gene in child.iter_mut() {
                let hit = mask.random::<f64>() < params.pm;
                let replacement = fresh.random_range(0..upper);
                if hit {
                    *gene = replacement;
                }
            }
        }

        let child_fit = evaluate_all(fitness, &children).map_err(|e| match e {
            Error::NanFitness { row } => Error::NanFitness { row: row + s },
            other => other,
        })?;

        // parents are already sorted; merge with the sorted children, parents first on ties
        let child_order = ranked(&child_fit, dir);
        let mut next = Vec::with_capacity(s);
        let mut next_fit = Vec::with_capacity(s);
        let (mut a, mut b) = (0, 0);
        while next.len() < s {
            let take_parent = b == s
                || (a < s
                    && dir.rank(fit[a], child_fit[child_order[b]]) != std::cmp::Ordering::Greater);
            if take_parent {
                next.push(std::mem::take(&mut pop[a]));
                next_fit.push(fit[a]);
                a += 1;
            } else {
                let c = child_order[b];
                next.push(children[c].clone());
                next_fit.push(child_fit[c]);
                b += 1;
            }
        }
        pop = next;
        fit = next_fit;

        history.push(GenerationRecord {
            generation: g,
            best: fit[0],
            mean: fit.iter().sum::<f64>() / s as f64,
            wall: gen_start.elapsed(),
            exchange: Default::default(),
            lifecycle: Default::default(),
            messages: 0,
            fitness_calls: s,
        });
    }

    Ok(RunResult {
        best: pop[0].clone(),
        best_fitness: fit[0],
        history,
        population: PopulationMatrix::from_rows(&pop)?,
        fitness: FitnessVector::new(fit),
        setup,
        topology: ModeTopology::serial(),
        wall_time: started.elapsed(),
    })
}
