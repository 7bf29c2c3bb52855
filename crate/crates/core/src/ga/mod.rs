//! Matrix-form genetic operators and the generation loop.

mod eda;
mod engine;
mod operators;
mod population;

pub use eda::{eda_elite_count, eda_sample, EDA_SMOOTHING};
pub use engine::{run_ga, GaParams, GenerationRecord, RunResult};
pub use operators::{
    combine, crossover, crossover_mask, elitism, init_population, init_rows, mutate,
    mutation_index_rows, mutation_mask_rows, rank_weights, roulette_select, roulette_spin,
    select_partners, sort_population,
};
pub use population::{Direction, FitnessVector, MaskMatrix, PopulationMatrix};
