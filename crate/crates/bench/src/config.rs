//! Experiment configuration.
//!
//! A config file holds one JSON object per experiment, or an array of them.
//! Only `algorithm` and `dataset` are required; every GA setting defaults to
//! the algorithm's entry in [`ALGORITHMS`].
//!
//! ```json
//! { "algorithm": "qattack", "dataset": "../data/karate.edges",
//!   "ground_truth": "../data/karate.communities", "iterations": 300 }
//! ```

use std::path::{Path, PathBuf};

use psso_core::fitness::{FitnessSpec, ReachabilityMode, Task};
use psso_core::ga::GaParams;
use psso_core::graph::PoolKind;
use psso_core::parallel::{worker_cap, Mode, ModeTopology};
use serde::Deserialize;

use crate::dataset::DatasetSource;
use crate::error::{BenchError, Result};

/// Per-algorithm defaults.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgorithmDefaults {
    pub name: &'static str,
    pub task: Task,
    pub pool: PoolKind,
    pub pc: f64,
    pub pm: f64,
    pub eda_interval: Option<usize>,
    pub iterations: usize,
    pub pop_size: usize,
    /// Perturbation rate: the budget is `ceil(rate * basis)`.
    pub rate: f64,
}

pub const ALGORITHMS: [AlgorithmDefaults; 6] = [
    AlgorithmDefaults {
        name: "qattack",
        task: Task::CdaModularity,
        pool: PoolKind::EdgeAddition,
        pc: 0.8,
        pm: 0.1,
        eda_interval: None,
        iterations: 1500,
        pop_size: 100,
        rate: 0.1,
    },
    AlgorithmDefaults {
        name: "cda-eda",
        task: Task::CdaModularity,
        pool: PoolKind::EdgeAddition,
        pc: 0.6,
        pm: 0.2,
        eda_interval: None,
        iterations: 1500,
        pop_size: 100,
        rate: 0.1,
    },
    AlgorithmDefaults {
        name: "sixdst",
        task: Task::CndSixdst,
        pool: PoolKind::NodeRemoval,
        pc: 0.5,
        pm: 0.3,
        eda_interval: None,
        iterations: 5000,
        pop_size: 80,
        rate: 0.1,
    },
    AlgorithmDefaults {
        name: "cutoff-pc",
        task: Task::CndPc,
        pool: PoolKind::NodeRemoval,
        pc: 0.6,
        pm: 0.2,
        eda_interval: None,
        iterations: 5000,
        pop_size: 80,
        rate: 0.1,
    },
    AlgorithmDefaults {
        name: "lpa-ga",
        task: Task::LpaSimilarity,
        pool: PoolKind::EdgeRemoval,
        pc: 0.7,
        pm: 0.1,
        eda_interval: None,
        iterations: 500,
        pop_size: 50,
        rate: 0.1,
    },
    // no crossover rate: every generation samples the elite model instead
    AlgorithmDefaults {
        name: "lpa-eda",
        task: Task::LpaSimilarity,
        pool: PoolKind::EdgeRemoval,
        pc: 0.0,
        pm: 0.1,
        eda_interval: Some(1),
        iterations: 500,
        pop_size: 50,
        rate: 0.1,
    },
];

pub fn algorithm_defaults(name: &str) -> Option<&'static AlgorithmDefaults> {
    ALGORITHMS.iter().find(|a| a.name == name)
}

/// The on-disk shape of one experiment.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub algorithm: String,
    pub dataset: String,
    pub task: Option<String>,
    pub ground_truth: Option<String>,
    pub pool: Option<String>,
    pub pc: Option<f64>,
    pub pm: Option<f64>,
    pub pop_size: Option<usize>,
    pub iterations: Option<usize>,
    pub eda_interval: Option<usize>,
    pub rate: Option<f64>,
    pub seed: Option<u64>,
    pub repetitions: Option<usize>,
    pub mode: Option<String>,
    pub pn: Option<usize>,
    pub qn: Option<usize>,
    pub max_workers: Option<usize>,
    pub split_fraction: Option<f64>,
    pub reachability: Option<String>,
    pub output: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(Box<ConfigFile>),
    Many(Vec<ConfigFile>),
}

/// A validated experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: String,
    pub dataset: DatasetSource,
    pub ground_truth: Option<PathBuf>,
    /// GA settings; `budget` is a placeholder until the graph is loaded.
    pub params: GaParams,
    pub fitness: FitnessSpec,
    pub pool: PoolKind,
    pub rate: f64,
    pub topology: ModeTopology,
    pub max_workers: Option<usize>,
    pub repetitions: usize,
    pub output: Option<PathBuf>,
}

fn parse_field<T>(value: &str, what: &str) -> Result<T>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| BenchError::Config(format!("invalid {what} '{value}': {e}")))
}

impl ExperimentConfig {
    /// Reads a config file. Relative paths inside it resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Vec<Self>> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_json(&text, base)
    }

    pub fn from_json(text: &str, base: &Path) -> Result<Vec<Self>> {
        let parsed: OneOrMany = serde_json::from_str(text)
            .map_err(|e| BenchError::Config(format!("malformed config: {e}")))?;
        let files = match parsed {
            OneOrMany::One(file) => vec![*file],
            OneOrMany::Many(files) => files,
        };
        if files.is_empty() {
            return Err(BenchError::Config("config holds no experiments".into()));
        }
        files.iter().map(|f| Self::from_file(f, base)).collect()
    }

    pub fn from_file(file: &ConfigFile, base: &Path) -> Result<Self> {
        let defaults = algorithm_defaults(&file.algorithm).ok_or_else(|| {
            let known: Vec<_> = ALGORITHMS.iter().map(|a| a.name).collect();
            BenchError::Config(format!(
                "unknown algorithm '{}' (known: {})",
                file.algorithm,
                known.join(", ")
            ))
        })?;
        let task = match &file.task {
            Some(t) => parse_field::<Task>(t, "task")?,
            None => defaults.task,
        };
        if task != defaults.task {
            return Err(BenchError::Config(format!(
                "algorithm {} runs task {}, not {task}",
                defaults.name, defaults.task
            )));
        }
        let pool = match &file.pool {
            Some(p) => parse_field::<PoolKind>(p, "pool")?,
            None => defaults.pool,
        };
        task.check_pool(pool)
            .map_err(|e| BenchError::Config(e.to_string()))?;

        let mut fitness = FitnessSpec::new(task);
        if let Some(f) = file.split_fraction {
            if !(f > 0.0 && f <= 0.5) {
                return Err(BenchError::Config(format!(
                    "split_fraction {f} not in (0, 0.5]"
                )));
            }
            fitness.split_fraction = f;
        }
        if let Some(r) = &file.reachability {
            fitness.reachability = match r.as_str() {
                "fixpoint" => ReachabilityMode::Fixpoint,
                "six-degrees" => ReachabilityMode::SixDegrees,
                other => {
                    return Err(BenchError::Config(format!(
                        "unknown reachability '{other}'"
                    )))
                }
            };
        }

        let params = GaParams {
            pc: file.pc.unwrap_or(defaults.pc),
            pm: file.pm.unwrap_or(defaults.pm),
            pop_size: file.pop_size.unwrap_or(defaults.pop_size),
            budget: 1,
            iterations: file.iterations.unwrap_or(defaults.iterations),
            direction: fitness.direction,
            eda_interval: file.eda_interval.or(defaults.eda_interval),
            seed: file.seed.unwrap_or(1),
        };
        params
            .validate()
            .map_err(|e| BenchError::Config(e.to_string()))?;

        let rate = file.rate.unwrap_or(defaults.rate);
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(BenchError::Config(format!("rate {rate} not in (0, 1]")));
        }
        let repetitions = file.repetitions.unwrap_or(1);
        if repetitions == 0 {
            return Err(BenchError::Config("repetitions must be at least 1".into()));
        }
        if file.max_workers == Some(0) {
            return Err(BenchError::Config("max_workers must be positive".into()));
        }
        let mode = match &file.mode {
            Some(m) => parse_field::<Mode>(m, "mode")?,
            None => Mode::S,
        };
        let topology = ModeTopology::new(mode, file.pn.unwrap_or(1), file.qn.unwrap_or(1))
            .map_err(|e| BenchError::Config(e.to_string()))?;

        Ok(Self {
            algorithm: defaults.name.to_owned(),
            dataset: DatasetSource::parse(&file.dataset, base)?,
            ground_truth: file.ground_truth.as_ref().map(|g| base.join(g)),
            params,
            fitness,
            pool,
            rate,
            topology,
            max_workers: file.max_workers,
            repetitions,
            output: file.output.as_ref().map(|o| base.join(o)),
        })
    }

    /// The topology after the worker cap and population clamp.
    pub fn effective_topology(&self) -> ModeTopology {
        self.topology
            .effective(self.params.pop_size, worker_cap(self.max_workers))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> Result<Vec<ExperimentConfig>> {
        ExperimentConfig::from_json(json, Path::new("/cfg"))
    }

    #[test]
    fn defaults_fill_in_everything() {
        let cfg = &parse(r#"{"algorithm": "qattack", "dataset": "k.edges"}"#).unwrap()[0];
        assert_eq!(cfg.params.pc, 0.8);
        assert_eq!(cfg.params.pm, 0.1);
        assert_eq!(cfg.params.pop_size, 100);
        assert_eq!(cfg.params.iterations, 1500);
        assert_eq!(cfg.rate, 0.1);
        assert_eq!(cfg.fitness.task, Task::CdaModularity);
        assert_eq!(cfg.topology, ModeTopology::s());
        assert_eq!(cfg.dataset, DatasetSource::File("/cfg/k.edges".into()));
        assert_eq!(cfg.repetitions, 1);
    }

    #[test]
    fn every_algorithm_is_self_consistent() {
        for a in &ALGORITHMS {
            assert!(a.task.accepts(a.pool), "{}", a.name);
            let json = format!(r#"{{"algorithm": "{}", "dataset": "x"}}"#, a.name);
            assert!(parse(&json).is_ok(), "{}", a.name);
        }
        assert_eq!(algorithm_defaults("lpa-eda").unwrap().eda_interval, Some(1));
    }

    #[test]
    fn overrides_apply() {
        let cfg = &parse(
            r#"{"algorithm": "sixdst", "dataset": "ba:100:1", "pop_size": 12, "iterations": 3,
                "mode": "MNM", "pn": 2, "qn": 3, "seed": 9, "repetitions": 4, "reachability": "six-degrees"}"#,
        )
        .unwrap()[0];
        assert_eq!(cfg.params.pop_size, 12);
        assert_eq!(cfg.topology, ModeTopology::mnm(2, 3));
        assert_eq!(cfg.params.seed, 9);
        assert_eq!(cfg.repetitions, 4);
        assert_eq!(cfg.fitness.reachability, ReachabilityMode::SixDegrees);
    }

    #[test]
    fn arrays_hold_several_experiments() {
        let cfgs = parse(
            r#"[{"algorithm": "lpa-ga", "dataset": "d"}, {"algorithm": "lpa-eda", "dataset": "d"}]"#,
        )
        .unwrap();
        assert_eq!(cfgs.len(), 2);
        assert_eq!(cfgs[1].params.eda_interval, Some(1));
        assert!(parse("[]").is_err());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        for json in [
            r#"{"algorithm": "qattack", "dataset": "k", "pool": "node-removal"}"#,
            r#"{"algorithm": "nope", "dataset": "k"}"#,
            r#"{"algorithm": "qattack", "dataset": "k", "task": "cnd-pc"}"#,
            r#"{"algorithm": "qattack", "dataset": "k", "repetitions": 0}"#,
            r#"{"algorithm": "qattack", "dataset": "k", "pc": 2.0}"#,
            r#"{"algorithm": "qattack", "dataset": "k", "iterations": 0}"#,
            r#"{"algorithm": "qattack", "dataset": "k", "rate": 0}"#,
            r#"{"algorithm": "qattack", "dataset": "k", "mode": "gpu"}"#,
            r#"{"algorithm": "qattack", "dataset": "k", "pn": 0, "mode": "M"}"#,
            r#"{"algorithm": "qattack", "dataset": "k", "unknown_key": 1}"#,
            r#"{"algorithm": "lpa-ga", "dataset": "k", "split_fraction": 0.9}"#,
            r#"{"algorithm": "qattack"}"#,
            "not json",
        ] {
            let err = parse(json).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{json}: {err}");
        }
    }
}
