use std::fmt;
use std::path::{Path, PathBuf};

use psso_core::fitness::{load_ground_truth, CommunityPartition};
use psso_core::graph::{barabasi_albert, erdos_renyi, load_edge_list, Graph};

use crate::error::{BenchError, Result};

/// Where a graph comes from: an edge-list file or a seeded generator.
///
/// Generator specs are written `ba:<n>:<m>[:<seed>]` or
/// `er:<n>:<p>[:<seed>]`; anything else is a file path.
#[derive(Clone, Debug, PartialEq)]
pub enum DatasetSource {
    File(PathBuf),
    BarabasiAlbert { n: usize, m: usize, seed: u64 },
    ErdosRenyi { n: usize, p: f64, seed: u64 },
}

fn field<T: std::str::FromStr>(spec: &str, value: Option<&str>, what: &str) -> Result<T> {
    value
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| BenchError::Config(format!("dataset '{spec}': bad or missing {what}")))
}

impl DatasetSource {
    /// Parses a dataset spec; relative file paths are joined onto `base`.
    pub fn parse(spec: &str, base: &Path) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let seed = |i: usize| parts.get(i).map_or(Ok(0), |s| field(spec, Some(s), "seed"));
        match parts[0] {
            "ba" if parts.len() <= 4 => Ok(Self::BarabasiAlbert {
                n: field(spec, parts.get(1).copied(), "node count")?,
                m: field(spec, parts.get(2).copied(), "attachment count")?,
                seed: seed(3)?,
            }),
            "er" if parts.len() <= 4 => Ok(Self::ErdosRenyi {
                n: field(spec, parts.get(1).copied(), "node count")?,
                p: field(spec, parts.get(2).copied(), "edge probability")?,
                seed: seed(3)?,
            }),
            _ => Ok(Self::File(base.join(spec))),
        }
    }

    /// Short name used in result rows.
    pub fn name(&self) -> String {
        match self {
            Self::File(path) => path.file_stem().map_or_else(
                || path.display().to_string(),
                |s| s.to_string_lossy().into_owned(),
            ),
            other => other.to_string(),
        }
    }

    pub fn load(&self) -> Result<Graph> {
        match *self {
            Self::File(ref path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| BenchError::Dataset(format!("{}: {e}", path.display())))?;
                let (graph, report) = load_edge_list(&text)
                    .map_err(|e| BenchError::Dataset(format!("{}: {e}", path.display())))?;
                if report.duplicates + report.self_loops > 0 {
                    log::warn!(
                        "{}: dropped {} duplicate edges and {} self-loops",
                        path.display(),
                        report.duplicates,
                        report.self_loops
                    );
                }
                Ok(graph)
            }
            Self::BarabasiAlbert { n, m, seed } => {
                if m == 0 || n <= m {
                    return Err(BenchError::Config(format!("ba:{n}:{m} needs 1 <= m < n")));
                }
                Ok(barabasi_albert(n, m, seed))
            }
            Self::ErdosRenyi { n, p, seed } => {
                if n == 0 || !(0.0..=1.0).contains(&p) {
                    return Err(BenchError::Config(format!(
                        "er:{n}:{p} needs n > 0 and p in [0, 1]"
                    )));
                }
                Ok(erdos_renyi(n, p, seed))
            }
        }
    }
}

impl fmt::Display for DatasetSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::File(path) => write!(f, "{}", path.display()),
            Self::BarabasiAlbert { n, m, seed } => write!(f, "ba:{n}:{m}:{seed}"),
            Self::ErdosRenyi { n, p, seed } => write!(f, "er:{n}:{p}:{seed}"),
        }
    }
}

/// A loaded graph plus its optional ground-truth communities.
pub struct Dataset {
    pub name: String,
    pub graph: Graph,
    pub ground_truth: Option<CommunityPartition>,
}

impl Dataset {
    pub fn load(source: &DatasetSource, ground_truth: Option<&Path>) -> Result<Self> {
        let graph = source.load()?;
        let ground_truth = ground_truth
            .map(|path| {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| BenchError::Dataset(format!("{}: {e}", path.display())))?;
                load_ground_truth(&text, &graph)
                    .map_err(|e| BenchError::Dataset(format!("{}: {e}", path.display())))
            })
            .transpose()?;
        Ok(Self {
            name: source.name(),
            graph,
            ground_truth,
        })
    }
}
