//! Lane layouts for the batched modes.

use std::ops::Range;
use std::panic::{self, AssertUnwindSafe};
use std::sync::mpsc::{self, Receiver, Sender};
use std::thread;
use std::time::{Duration, Instant};

use super::coordinator::{coordinate, Evaluated, Lanes, Overhead};
use super::{row_blocks, ModeTopology};
use crate::error::{Error, Result};
use crate::fitness::Fitness;
use crate::ga::{
    init_population, init_rows, mutate, FitnessVector, GaParams, PopulationMatrix, RunResult,
};
use crate::rng::RngPolicy;

/// Traffic between the coordinator and a persistent worker.
#[derive(Debug)]
pub enum WorkerMessage {
    /// Crossed-over rows `offset..offset + rows.rows()` for the worker to
    /// mutate and evaluate.
    PopulationSlice {
        generation: u64,
        offset: usize,
        rows: PopulationMatrix,
    },
    /// Mutated rows and their fitness. `busy` is the worker's time between
    /// receiving the slice and replying; `exchange` and `lifecycle` cover
    /// any inner shards it used.
    FitnessSlice {
        generation: u64,
        offset: usize,
        rows: PopulationMatrix,
        fitness: FitnessVector,
        busy: Duration,
        exchange: Duration,
        lifecycle: Duration,
    },
    Shutdown,
}

/// Evaluates `pop` on `shards` short-lived scoped threads over contiguous row
/// blocks and merges the results by offset.
pub(crate) fn sharded_evaluate(
    fitness: &dyn Fitness,
    pop: &PopulationMatrix,
    shards: usize,
) -> Result<(FitnessVector, Overhead)> {
    let blocks = row_blocks(pop.rows(), shards);
    let cut = Instant::now();
    let slices: Vec<(usize, PopulationMatrix)> = blocks
        .iter()
        .map(|b| (b.start, pop.slice_rows(b.clone())))
        .collect();
    let mut exchange = cut.elapsed();

    let (outputs, spawn, tail) = thread::scope(|scope| {
        let spawn_start = Instant::now();
        let handles: Vec<_> = slices
            .into_iter()
            .map(|(offset, slice)| {
                scope.spawn(move || {
                    let out = fitness.evaluate_batch(&slice);
                    (offset, slice.rows(), out, Instant::now())
                })
            })
            .collect();
        let spawn = spawn_start.elapsed();
        let joined: Vec<_> = handles.into_iter().map(|h| h.join()).collect();
        let joined_at = Instant::now();
        (joined, spawn, joined_at)
    });

    let merge = Instant::now();
    let mut values = vec![0.0; pop.rows()];
    let mut last_finish: Option<Instant> = None;
    for joined in outputs {
        let (offset, len, out, finished) =
            joined.map_err(|_| Error::Worker("fitness shard panicked".into()))?;
        let fv = out?;
        if fv.len() != len {
            return Err(Error::ShapeMismatch {
                expected: (len, 1),
                actual: (fv.len(), 1),
            });
        }
        values[offset..offset + len].copy_from_slice(fv.values());
        last_finish = Some(last_finish.map_or(finished, |t| t.max(finished)));
    }
    exchange += merge.elapsed();
    let join_tail = last_finish.map_or(Duration::ZERO, |t| tail.saturating_duration_since(t));
    let overhead = Overhead {
        exchange,
        lifecycle: spawn + join_tail,
        messages: 2 * blocks.len(),
        fitness_calls: blocks.len(),
    };
    Ok((FitnessVector::new(values), overhead))
}

#[derive(Clone, Copy)]
struct Shared<'a> {
    fitness: &'a dyn Fitness,
    pool_len: usize,
    s: usize,
    k: usize,
    pm: f64,
    policy: RngPolicy,
}

impl<'a> Shared<'a> {
    fn new(params: &GaParams, pool_len: usize, fitness: &'a dyn Fitness) -> Self {
        Self {
            fitness,
            pool_len,
            s: params.pop_size,
            k: params.budget,
            pm: params.pm,
            policy: RngPolicy::new(params.seed),
        }
    }
}

/// Mode S: one lane, one batch call per generation.
struct Single<'a>(Shared<'a>);

impl Lanes for Single<'_> {
    fn initialize(&mut self) -> Result<Evaluated> {
        let c = &self.0;
        let pop = init_population(c.pool_len, c.s, c.k, &c.policy)?;
        let fitness = c.fitness.evaluate_batch(&pop)?;
        Ok(Evaluated {
            pop,
            fitness,
            overhead: Overhead {
                fitness_calls: 1,
                ..Overhead::default()
            },
        })
    }

    fn mutate_and_evaluate(
        &mut self,
        c_pop: PopulationMatrix,
        generation: u64,
    ) -> Result<Evaluated> {
        let c = &self.0;
        let pop = mutate(&c_pop, 0, c.pm, c.pool_len, &c.policy, generation)?;
        let fitness = c.fitness.evaluate_batch(&pop)?;
        Ok(Evaluated {
            pop,
            fitness,
            overhead: Overhead {
                fitness_calls: 1,
                ..Overhead::default()
            },
        })
    }
}

pub(crate) fn run_single(
    params: &GaParams,
    pool_len: usize,
    fitness: &dyn Fitness,
) -> Result<RunResult> {
    params.validate()?;
    let mut lanes = Single(Shared::new(params, pool_len, fitness));
    coordinate(
        params,
        pool_len,
        &mut lanes,
        ModeTopology::s(),
        Duration::ZERO,
    )
}

/// Mode SM: operators on the coordinator, fitness on `pn` fresh threads.
struct Sharded<'a> {
    shared: Shared<'a>,
    pn: usize,
}

impl Lanes for Sharded<'_> {
    fn initialize(&mut self) -> Result<Evaluated> {
        let c = &self.shared;
        let pop = init_population(c.pool_len, c.s, c.k, &c.policy)?;
        let (fitness, overhead) = sharded_evaluate(c.fitness, &pop, self.pn)?;
        Ok(Evaluated {
            pop,
            fitness,
            overhead,
        })
    }

    fn mutate_and_evaluate(
        &mut self,
        c_pop: PopulationMatrix,
        generation: u64,
    ) -> Result<Evaluated> {
        let c = &self.shared;
        let pop = mutate(&c_pop, 0, c.pm, c.pool_len, &c.policy, generation)?;
        let (fitness, overhead) = sharded_evaluate(c.fitness, &pop, self.pn)?;
        Ok(Evaluated {
            pop,
            fitness,
            overhead,
        })
    }
}

pub(crate) fn run_sharded(
    params: &GaParams,
    pool_len: usize,
    fitness: &dyn Fitness,
    topology: ModeTopology,
) -> Result<RunResult> {
    params.validate()?;
    let mut lanes = Sharded {
        shared: Shared::new(params, pool_len, fitness),
        pn: topology.pn,
    };
    coordinate(params, pool_len, &mut lanes, topology, Duration::ZERO)
}

/// Evaluates a worker's block, optionally over `qn` inner shards.
fn worker_evaluate(
    shared: &Shared<'_>,
    rows: &PopulationMatrix,
    qn: usize,
) -> Result<(FitnessVector, Overhead)> {
    if qn > 1 {
        sharded_evaluate(shared.fitness, rows, qn)
    } else {
        Ok((shared.fitness.evaluate_batch(rows)?, Overhead::default()))
    }
}

fn worker_reply(
    shared: &Shared<'_>,
    qn: usize,
    generation: u64,
    offset: usize,
    rows: PopulationMatrix,
    received: Instant,
) -> Result<WorkerMessage> {
    let (fitness, inner) = worker_evaluate(shared, &rows, qn)?;
    Ok(WorkerMessage::FitnessSlice {
        generation,
        offset,
        rows,
        fitness,
        busy: received.elapsed(),
        exchange: inner.exchange,
        lifecycle: inner.lifecycle,
    })
}

fn worker_loop(
    shared: Shared<'_>,
    block: Range<usize>,
    qn: usize,
    inbox: Receiver<WorkerMessage>,
    outbox: Sender<Result<WorkerMessage>>,
) {
    let guarded = |f: &mut dyn FnMut() -> Result<WorkerMessage>| {
        panic::catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err(Error::Worker(format!("worker for rows {block:?} panicked"))))
    };

    let init = guarded(&mut || {
        let started = Instant::now();
        let rows = init_rows(shared.pool_len, block.clone(), shared.k, &shared.policy)?;
        worker_reply(&shared, qn, 0, block.start, rows, started)
    });
    if outbox.send(init).is_err() {
        return;
    }

    while let Ok(msg) = inbox.recv() {
        let reply = match msg {
            WorkerMessage::PopulationSlice {
                generation,
                offset,
                rows,
            } => guarded(&mut || {
                let received = Instant::now();
                let mutated = mutate(
                    &rows,
                    offset,
                    shared.pm,
                    shared.pool_len,
                    &shared.policy,
                    generation,
                )?;
                worker_reply(&shared, qn, generation, offset, mutated, received)
            }),
            WorkerMessage::Shutdown => break,
            other => Err(Error::Worker(format!(
                "worker received unexpected {other:?}"
            ))),
        };
        if outbox.send(reply).is_err() {
            break;
        }
    }
}

/// Modes M and MNM: `pn` long-lived workers, each owning one row block.
struct Persistent<'a> {
    shared: Shared<'a>,
    blocks: Vec<Range<usize>>,
    calls_per_round: usize,
    inboxes: Vec<Sender<WorkerMessage>>,
    replies: Receiver<Result<WorkerMessage>>,
}

impl Persistent<'_> {
    fn gather(&mut self, generation: u64, scatter: Duration) -> Result<Evaluated> {
        let (s, k) = (self.shared.s, self.shared.k);
        let waiting = Instant::now();
        let mut pop = PopulationMatrix::zeros(s, k);
        let mut values = vec![0.0; s];
        let mut merge = Duration::ZERO;
        let mut busiest = Duration::ZERO;
        let mut inner_exchange = Duration::ZERO;
        let mut lifecycle = Duration::ZERO;
        for _ in 0..self.blocks.len() {
            let reply = self
                .replies
                .recv()
                .map_err(|_| Error::Worker("worker lane closed".into()))??;
            let WorkerMessage::FitnessSlice {
                generation: got,
                offset,
                rows,
                fitness,
                busy,
                exchange,
                lifecycle: lc,
            } = reply
            else {
                return Err(Error::Worker(format!("unexpected reply {reply:?}")));
            };
            if got != generation || fitness.len() != rows.rows() {
                return Err(Error::Worker(format!(
                    "stale or malformed slice at row {offset} (generation {got}, expected {generation})"
                )));
            }
            let t = Instant::now();
            pop.write_rows(offset, &rows);
            values[offset..offset + rows.rows()].copy_from_slice(fitness.values());
            merge += t.elapsed();
            busiest = busiest.max(busy);
            inner_exchange = inner_exchange.max(exchange);
            lifecycle = lifecycle.max(lc);
        }
        let transit = waiting.elapsed().saturating_sub(merge + busiest);
        Ok(Evaluated {
            pop,
            fitness: FitnessVector::new(values),
            overhead: Overhead {
                exchange: scatter + merge + transit + inner_exchange,
                lifecycle,
                messages: 2 * self.blocks.len(),
                fitness_calls: self.calls_per_round,
            },
        })
    }
}

impl Lanes for Persistent<'_> {
    fn initialize(&mut self) -> Result<Evaluated> {
        self.gather(0, Duration::ZERO)
    }

    fn mutate_and_evaluate(
        &mut self,
        c_pop: PopulationMatrix,
        generation: u64,
    ) -> Result<Evaluated> {
        let scatter = Instant::now();
        for (block, inbox) in self.blocks.iter().zip(&self.inboxes) {
            let msg = WorkerMessage::PopulationSlice {
                generation,
                offset: block.start,
                rows: c_pop.slice_rows(block.clone()),
            };
            inbox
                .send(msg)
                .map_err(|_| Error::Worker(format!("worker for rows {block:?} is gone")))?;
        }
        self.gather(generation, scatter.elapsed())
    }
}

pub(crate) fn run_persistent(
    params: &GaParams,
    pool_len: usize,
    fitness: &dyn Fitness,
    topology: ModeTopology,
) -> Result<RunResult> {
    params.validate()?;
    let shared = Shared::new(params, pool_len, fitness);
    let blocks = row_blocks(params.pop_size, topology.pn);
    let qn = topology.qn;
    let calls_per_round = blocks.iter().map(|b| row_blocks(b.len(), qn).len()).sum();

    thread::scope(|scope| {
        let spawning = Instant::now();
        let (reply_tx, replies) = mpsc::channel();
        let mut inboxes = Vec::with_capacity(blocks.len());
        for block in &blocks {
            let (tx, rx) = mpsc::channel();
            let outbox = reply_tx.clone();
            let block = block.clone();
            scope.spawn(move || worker_loop(shared, block, qn, rx, outbox));
            inboxes.push(tx);
        }
        drop(reply_tx);
        let spawn_cost = spawning.elapsed();

        let mut lanes = Persistent {
            shared,
            blocks,
            calls_per_round,
            inboxes,
            replies,
        };
        let result = coordinate(params, pool_len, &mut lanes, topology, spawn_cost);
        for inbox in &lanes.inboxes {
            let _ = inbox.send(WorkerMessage::Shutdown);
        }
        result
    })
}
