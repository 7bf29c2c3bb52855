use std::time::Duration;

use super::population::{Direction, FitnessVector, PopulationMatrix};
use crate::error::{Error, Result};
use crate::fitness::Fitness;
use crate::parallel::{self, ModeTopology};

#[derive(Clone, Debug, PartialEq)]
pub struct GaParams {
    /// Crossover rate.
    pub pc: f64,
    /// Mutation rate.
    pub pm: f64,
    pub pop_size: usize,
    /// Genes per individual.
    pub budget: usize,
    pub iterations: usize,
    pub direction: Direction,
    /// Every `eda_interval`-th generation samples from the elite distribution
    /// instead of selection + crossover.
    pub eda_interval: Option<usize>,
    pub seed: u64,
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(0.0..=1.0).contains(&self.pc) {
            return bad(format!("crossover rate {} not in [0, 1]", self.pc));
        }
        if !(0.0..=1.0).contains(&self.pm) {
            return bad(format!("mutation rate {} not in [0, 1]", self.pm));
        }
        if self.pop_size < 2 {
            return bad(format!("population size {} < 2", self.pop_size));
        }
        if self.budget < 1 {
            return bad("budget must be at least 1".into());
        }
        if self.iterations == 0 {
            return bad("iterations must be positive".into());
        }
        if self.eda_interval == Some(0) {
            return bad("eda interval must be positive".into());
        }
        Ok(())
    }

    pub fn is_eda_generation(&self, generation: u64) -> bool {
        self.eda_interval
            .is_some_and(|every| generation.is_multiple_of(every as u64))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationRecord {
    /// 1-based generation number.
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
    pub wall: Duration,
    /// Time spent moving population and fitness slices between lanes.
    pub exchange: Duration,
    /// Time spent creating and joining worker lanes.
    pub lifecycle: Duration,
    pub messages: usize,
    pub fitness_calls: usize,
}

impl GenerationRecord {
    pub fn compute(&self) -> Duration {
        self.wall.saturating_sub(self.exchange + self.lifecycle)
    }
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub best: Vec<u32>,
    pub best_fitness: f64,
    pub history: Vec<GenerationRecord>,
    /// Final population, sorted best first, and its fitness.
    pub population: PopulationMatrix,
    pub fitness: FitnessVector,
    /// Initialization, including spawning persistent workers.
    pub setup: Duration,
    pub topology: ModeTopology,
    /// Wall time of the generation loop plus setup.
    pub wall_time: Duration,
}

/// Runs the GA: initialize, then per generation select, cross over (or
/// sample the EDA model), mutate, evaluate and apply elitism.
pub fn run_ga(
    params: &GaParams,
    pool_len: usize,
    fitness: &dyn Fitness,
    topology: &ModeTopology,
) -> Result<RunResult> {
    params.validate()?;
    if pool_len == 0 {
        return Err(Error::InvalidParams("gene pool is empty".into()));
    }
    parallel::run(params, pool_len, fitness, topology)
}
