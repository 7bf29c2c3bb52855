use std::str::FromStr;

use psso_core::fitness::{
    build_lp_split, modularity, nmi, CdaFitness, Fitness, LpaFitness, PairwiseConnectivityFitness,
    SixDstFitness, Task, EDGELESS_MODULARITY,
};
use psso_core::ga::{run_ga, GaParams, RunResult};
use psso_core::graph::{
    apply_perturbation, connected_components, largest_component_size, pairwise_connectivity,
    perturbation_budget, Adjacency, GenePool, Graph, Perturbation,
};
use psso_core::parallel::Mode;

use crate::config::ExperimentConfig;
use crate::dataset::Dataset;
use crate::error::{BenchError, Result};
use crate::report::ResultRow;

/// Runs `cfg.repetitions` attacks with seeds `seed, seed + 1, ...`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let data = Dataset::load(&cfg.dataset, cfg.ground_truth.as_deref())?;
    (0..cfg.repetitions as u64)
        .map(|r| run_once(cfg, &data, cfg.params.seed.wrapping_add(r)))
        .collect()
}

/// Runs every config in order and concatenates the rows.
pub fn run_experiments(cfgs: &[ExperimentConfig]) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for cfg in cfgs {
        rows.extend(run_experiment(cfg)?);
    }
    Ok(rows)
}

fn dataset_err(name: &str) -> impl Fn(psso_core::Error) -> BenchError + '_ {
    move |e| BenchError::Dataset(format!("{name}: {e}"))
}

fn components_metrics(adj: &Adjacency) -> (f64, f64) {
    let comps = connected_components(adj);
    (
        largest_component_size(&comps) as f64,
        pairwise_connectivity(&comps) as f64,
    )
}

fn base_row(
    cfg: &ExperimentConfig,
    data: &Dataset,
    params: &GaParams,
    run: &RunResult,
) -> ResultRow {
    ResultRow {
        task: cfg.fitness.task.as_str().to_owned(),
        algorithm: cfg.algorithm.clone(),
        dataset: data.name.clone(),
        mode: run.topology.mode.as_str().to_owned(),
        pn: run.topology.pn,
        qn: run.topology.qn,
        pop_size: params.pop_size,
        iterations: params.iterations,
        budget: params.budget,
        seed: params.seed,
        wall_time_s: run.wall_time.as_secs_f64(),
        best_fitness: run.best_fitness,
        baseline_q: None,
        attacked_q: None,
        baseline_nmi: None,
        attacked_nmi: None,
        baseline_mcn: None,
        attacked_mcn: None,
        baseline_pc: None,
        attacked_pc: None,
        baseline_auc: None,
        attacked_auc: None,
        baseline_precision: None,
        attacked_precision: None,
    }
}

fn attack(
    cfg: &ExperimentConfig,
    params: &mut GaParams,
    graph: &Graph,
    pool: &GenePool,
    fitness: &dyn Fitness,
) -> Result<RunResult> {
    params.budget = perturbation_budget(graph, cfg.pool, cfg.rate)?;
    Ok(run_ga(
        params,
        pool.len(),
        fitness,
        &cfg.effective_topology(),
    )?)
}

fn run_once(cfg: &ExperimentConfig, data: &Dataset, seed: u64) -> Result<ResultRow> {
    let mut params = GaParams {
        seed,
        ..cfg.params.clone()
    };
    let graph = &data.graph;
    let pool_for = |g: &Graph| GenePool::build(g, cfg.pool).map_err(dataset_err(&data.name));

    match cfg.fitness.task {
        Task::CdaModularity => {
            let pool = pool_for(graph)?;
            let fitness = CdaFitness::new(graph, pool.clone(), cfg.fitness.detector)?;
            let run = attack(cfg, &mut params, graph, &pool, &fitness)?;

            let adj = graph.adjacency();
            let detector = cfg.fitness.detector;
            let before = detector.detect(&adj);
            let baseline_q = modularity(&adj, &before).map_err(dataset_err(&data.name))?;
            let after_adj = fitness.perturbed(&run.best)?;
            let after = detector.detect(&after_adj);
            let attacked_q = if after_adj.edge_count() == 0 {
                EDGELESS_MODULARITY
            } else {
                modularity(&after_adj, &after)?
            };
            // without ground truth the unattacked detection is the reference
            let reference = data.ground_truth.as_ref().unwrap_or(&before);
            Ok(ResultRow {
                baseline_q: Some(baseline_q),
                attacked_q: Some(attacked_q),
                baseline_nmi: Some(nmi(&before, reference)?),
                attacked_nmi: Some(nmi(&after, reference)?),
                ..base_row(cfg, data, &params, &run)
            })
        }
        Task::CndSixdst | Task::CndPc => {
            let pool = pool_for(graph)?;
            let run = if cfg.fitness.task == Task::CndSixdst {
                let f = SixDstFitness::with_mode(graph, pool.clone(), cfg.fitness.reachability)?;
                attack(cfg, &mut params, graph, &pool, &f)?
            } else {
                let f = PairwiseConnectivityFitness::new(graph, pool.clone())?;
                attack(cfg, &mut params, graph, &pool, &f)?
            };
            let adj = graph.adjacency();
            let (mcn0, pc0) = components_metrics(&adj);
            let (mcn1, pc1) = components_metrics(&apply_perturbation(
                &adj,
                &Perturbation::new(&pool, &run.best)?,
            ));
            Ok(ResultRow {
                baseline_mcn: Some(mcn0),
                attacked_mcn: Some(mcn1),
                baseline_pc: Some(pc0),
                attacked_pc: Some(pc1),
                ..base_row(cfg, data, &params, &run)
            })
        }
        Task::LpaSimilarity => {
            let split = build_lp_split(graph, cfg.fitness.split_fraction, seed)
                .map_err(dataset_err(&data.name))?;
            let train = split.train.clone();
            let pool = pool_for(&train)?;
            let fitness = LpaFitness::new(split, pool.clone())?;
            let run = attack(cfg, &mut params, &train, &pool, &fitness)?;
            let (auc0, prec0) = fitness.metrics(&[])?;
            let (auc1, prec1) = fitness.metrics(&run.best)?;
            Ok(ResultRow {
                baseline_auc: Some(auc0),
                attacked_auc: Some(auc1),
                baseline_precision: Some(prec0),
                attacked_precision: Some(prec1),
                ..base_row(cfg, data, &params, &run)
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    PopSize,
    Pn,
}

impl FromStr for SweepAxis {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pop_size" | "pop-size" => Ok(Self::PopSize),
            "pn" => Ok(Self::Pn),
            other => Err(BenchError::Config(format!(
                "unknown sweep axis '{other}' (use pop_size or pn)"
            ))),
        }
    }
}

/// One experiment batch per value of `axis`; values must be non-empty and
/// strictly ascending.
pub fn sweep(cfg: &ExperimentConfig, axis: SweepAxis, values: &[usize]) -> Result<Vec<ResultRow>> {
    if values.is_empty() {
        return Err(BenchError::Config("sweep needs at least one value".into()));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::Config(format!(
            "sweep values {values:?} are not strictly ascending"
        )));
    }
    match axis {
        SweepAxis::PopSize if values[0] < 2 => {
            return Err(BenchError::Config(
                "population sizes must be at least 2".into(),
            ))
        }
        SweepAxis::Pn if values[0] == 0 => {
            return Err(BenchError::Config("worker counts must be positive".into()))
        }
        SweepAxis::Pn if matches!(cfg.topology.mode, Mode::Serial | Mode::S) => {
            return Err(BenchError::Config(format!(
                "a pn sweep needs mode SM, M or MNM, not {}",
                cfg.topology.mode
            )))
        }
        _ => {}
    }
    let mut rows = Vec::new();
    for &value in values {
        let mut point = cfg.clone();
        match axis {
            SweepAxis::PopSize => point.params.pop_size = value,
            SweepAxis::Pn => point.topology.pn = value,
        }
        rows.extend(run_experiment(&point)?);
    }
    Ok(rows)
}
