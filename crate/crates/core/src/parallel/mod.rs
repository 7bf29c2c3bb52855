//! Execution modes.
//!
//! * `Serial`: per-individual loops and per-individual fitness; the
//!   reference the other modes must reproduce.
//! * `S`: whole-population matrix operators and one batch fitness call on a
//!   single lane.
//! * `SM`: operators on the coordinator, fitness sharded over `pn`
//!   short-lived workers each generation.
//! * `M`: `pn` persistent workers own contiguous row blocks; they initialize,
//!   mutate and evaluate locally while the coordinator gathers the blocks
//!   for elitism, selection and crossover and scatters them back.
//! * `MNM`: `M` where each worker shards its fitness over `qn` short-lived
//!   inner workers.
//!
//! All random draws are keyed by generation, role and global row, so every
//! mode produces the same run for the same seed.

mod coordinator;
mod lanes;
mod serial;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::time::Duration;

pub use lanes::WorkerMessage;
pub use serial::run_serial;

use crate::error::{Error, Result};
use crate::fitness::Fitness;
use crate::ga::{GaParams, RunResult};

/// Environment variable capping the number of worker lanes.
pub const MAX_WORKERS_ENV: &str = "GAPA_MAX_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Serial,
    S,
    SM,
    M,
    MNM,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Serial => "serial",
            Mode::S => "S",
            Mode::SM => "SM",
            Mode::M => "M",
            Mode::MNM => "MNM",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "serial" | "cpu" => Ok(Mode::Serial),
            "s" => Ok(Mode::S),
            "sm" => Ok(Mode::SM),
            "m" => Ok(Mode::M),
            "mnm" => Ok(Mode::MNM),
            other => Err(Error::InvalidParams(format!("unknown mode '{other}'"))),
        }
    }
}

/// Worker layout: `pn` outer lanes and `qn` fitness shards per lane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModeTopology {
    pub mode: Mode,
    pub pn: usize,
    pub qn: usize,
}

impl ModeTopology {
    pub fn serial() -> Self {
        Self {
            mode: Mode::Serial,
            pn: 1,
            qn: 1,
        }
    }

    pub fn s() -> Self {
        Self {
            mode: Mode::S,
            pn: 1,
            qn: 1,
        }
    }

    pub fn sm(pn: usize) -> Self {
        Self {
            mode: Mode::SM,
            pn,
            qn: 1,
        }
    }

    pub fn m(pn: usize) -> Self {
        Self {
            mode: Mode::M,
            pn,
            qn: 1,
        }
    }

    pub fn mnm(pn: usize, qn: usize) -> Self {
        Self {
            mode: Mode::MNM,
            pn,
            qn,
        }
    }

    pub fn new(mode: Mode, pn: usize, qn: usize) -> Result<Self> {
        if pn == 0 || qn == 0 {
            return Err(Error::InvalidParams(
                "worker counts must be positive".into(),
            ));
        }
        Ok(match mode {
            Mode::Serial => Self::serial(),
            Mode::S => Self::s(),
            Mode::SM => Self::sm(pn),
            Mode::M => Self::m(pn),
            Mode::MNM => Self::mnm(pn, qn),
        })
    }

    /// Applies the worker cap and clamps `pn` to the population size.
    pub fn effective(&self, pop_size: usize, cap: Option<usize>) -> Self {
        let mut out = *self;
        if let Some(cap) = cap {
            out.pn = out.pn.min(cap);
            out.qn = out.qn.min(cap);
        }
        if out.pn > pop_size {
            log::warn!(
                "{} workers for {pop_size} rows; clamping to {pop_size}",
                out.pn
            );
            out.pn = pop_size;
        }
        out
    }
}

/// Worker cap from `GAPA_MAX_WORKERS`, falling back to the configured value.
pub fn worker_cap(configured: Option<usize>) -> Option<usize> {
    match std::env::var(MAX_WORKERS_ENV) {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => {
                log::warn!("ignoring {MAX_WORKERS_ENV}={raw:?}: expected a positive integer");
                configured
            }
        },
        Err(_) => configured,
    }
}

/// Contiguous blocks of `ceil(s / pn)` rows covering `0..s`; the last block
/// may be short and fewer than `pn` blocks come back when `pn` does not
/// divide the rows evenly enough.
pub fn row_blocks(s: usize, pn: usize) -> Vec<Range<usize>> {
    let pn = pn.max(1);
    let size = s.div_ceil(pn).max(1);
    (0..s)
        .step_by(size)
        .map(|start| start..(start + size).min(s))
        .collect()
}

pub fn run_mode_s(params: &GaParams, pool_len: usize, fitness: &dyn Fitness) -> Result<RunResult> {
    lanes::run_single(params, pool_len, fitness)
}

pub fn run_mode_sm(
    params: &GaParams,
    pool_len: usize,
    fitness: &dyn Fitness,
    pn: usize,
) -> Result<RunResult> {
    let topology = ModeTopology::sm(pn).effective(params.pop_size, worker_cap(None));
    lanes::run_sharded(params, pool_len, fitness, topology)
}

pub fn run_mode_m(
    params: &GaParams,
    pool_len: usize,
    fitness: &dyn Fitness,
    pn: usize,
) -> Result<RunResult> {
    let topology = ModeTopology::m(pn).effective(params.pop_size, worker_cap(None));
    lanes::run_persistent(params, pool_len, fitness, topology)
}

pub fn run_mode_mnm(
    params: &GaParams,
    pool_len: usize,
    fitness: &dyn Fitness,
    pn: usize,
    qn: usize,
) -> Result<RunResult> {
    let topology = ModeTopology::mnm(pn, qn).effective(params.pop_size, worker_cap(None));
    lanes::run_persistent(params, pool_len, fitness, topology)
}

pub(crate) fn run(
    params: &GaParams,
    pool_len: usize,
    fitness: &dyn Fitness,
    topology: &ModeTopology,
) -> Result<RunResult> {
    if topology.pn == 0 || topology.qn == 0 {
        return Err(Error::InvalidParams(
            "worker counts must be positive".into(),
        ));
    }
    let topology = topology.effective(params.pop_size, worker_cap(None));
    match topology.mode {
        Mode::Serial => run_serial(params, pool_len, fitness),
        Mode::S => lanes::run_single(params, pool_len, fitness),
        Mode::SM => lanes::run_sharded(params, pool_len, fitness, topology),
        Mode::M | Mode::MNM => lanes::run_persistent(params, pool_len, fitness, topology),
    }
}

/// Per-generation split of wall time into compute, data exchange and
/// worker lifecycle.
#[derive(Clone, Debug, PartialEq)]
pub struct OverheadRow {
    pub generation: usize,
    pub compute: Duration,
    pub exchange: Duration,
    pub lifecycle: Duration,
    pub wall: Duration,
}

pub fn overhead_report(result: &RunResult) -> Vec<OverheadRow> {
    result
        .history
        .iter()
        .map(|g| OverheadRow {
            generation: g.generation,
            compute: g.compute(),
            exchange: g.exchange,
            lifecycle: g.lifecycle,
            wall: g.wall,
        })
        .collect()
}
