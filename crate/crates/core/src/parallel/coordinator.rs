//! Generation loop shared by the batched modes. The coordinator owns the
//! full sorted population; a [`Lanes`] implementation decides where
//! initialization, mutation and fitness run.

use std::time::{Duration, Instant};

use super::ModeTopology;
use crate::error::Result;
use crate::ga::{
    crossover, eda_elite_count, eda_sample, elitism, roulette_select, sort_population,
    FitnessVector, GaParams, GenerationRecord, PopulationMatrix, RunResult, EDA_SMOOTHING,
};
use crate::rng::RngPolicy;

/// Time and traffic attributed to one lane round trip.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Overhead {
    pub exchange: Duration,
    pub lifecycle: Duration,
    pub messages: usize,
    pub fitness_calls: usize,
}

pub(crate) struct Evaluated {
    pub pop: PopulationMatrix,
    pub fitness: FitnessVector,
    pub overhead: Overhead,
}

pub(crate) trait Lanes {
    /// Builds and evaluates the initial population (unsorted).
    fn initialize(&mut self) -> Result<Evaluated>;

    /// Mutates the crossed-over population and evaluates the result.
    fn mutate_and_evaluate(
        &mut self,
        c_pop: PopulationMatrix,
        generation: u64,
    ) -> Result<Evaluated>;
}

pub(crate) fn coordinate(
    params: &GaParams,
    pool_len: usize,
    lanes: &mut dyn Lanes,
    topology: ModeTopology,
    spawn_cost: Duration,
) -> Result<RunResult> {
    let started = Instant::now();
    let policy = RngPolicy::new(params.seed);
    let dir = params.direction;
    let s = params.pop_size;

    let init = lanes.initialize()?;
    let (mut pop, mut fit) = sort_population(&init.pop, &init.fitness, dir)?;
    let setup = started.elapsed() + spawn_cost;

    let mut history = Vec::with_capacity(params.iterations);
    for g in 1..=params.iterations {
        let gen_start = Instant::now();
        let key = g as u64;
        let c_pop = if params.is_eda_generation(key) {
            eda_sample(
                &pop,
                eda_elite_count(s),
                pool_len,
                s,
                EDA_SMOOTHING,
                &policy,
                key,
            )?
        } else {
            let partners = roulette_select(&pop, &fit, dir, &policy, key)?;
            crossover(&pop, &partners, params.pc, &policy, key)?
        };
        let child = lanes.mutate_and_evaluate(c_pop, key)?;
        (pop, fit) = elitism(&pop, &child.pop, &fit, &child.fitness, dir)?;
        history.push(GenerationRecord {
            generation: g,
            best: fit.get(0),
            mean: fit.mean(),
            wall: gen_start.elapsed(),
            exchange: child.overhead.exchange,
            lifecycle: child.overhead.lifecycle,
            messages: child.overhead.messages,
            fitness_calls: child.overhead.fitness_calls,
        });
    }

    Ok(RunResult {
        best: pop.row(0).to_vec(),
        best_fitness: fit.get(0),
        history,
        population: pop,
        fitness: fit,
        setup,
        topology,
        wall_time: started.elapsed() + spawn_cost,
    })
}
