//! Population initialization, roulette selection, mask crossover, mask
//! mutation and sort-based elitism.
//!
//! Every random draw comes from an [`RngPolicy`] stream keyed by generation,
//! role and global row index. Functions that act on a block of rows take the
//! block's first global row as `offset` so a worker holding rows `a..b`
//! draws exactly what a single lane would for the same rows.

use std::ops::Range;

use rand::Rng;

use super::population::{Direction, FitnessVector, MaskMatrix, PopulationMatrix};
use crate::error::{Error, Result};
use crate::rng::{RngPolicy, Role};

/// Generation key used for the initial population.
pub(crate) const INIT_GENERATION: u64 = 0;

pub fn init_population(
    pool_len: usize,
    s: usize,
    k: usize,
    policy: &RngPolicy,
) -> Result<PopulationMatrix> {
    init_rows(pool_len, 0..s, k, policy)
}

/// Initial genes for global rows `rows`, uniform over `0..pool_len`.
pub fn init_rows(
    pool_len: usize,
    rows: Range<usize>,
    k: usize,
    policy: &RngPolicy,
) -> Result<PopulationMatrix> {
    if pool_len == 0 {
        return Err(Error::InvalidParams(
            "cannot initialize from an empty pool".into(),
        ));
    }
    let upper = pool_len as u32;
    let mut genes = Vec::with_capacity(rows.len() * k);
    for i in rows.clone() {
        let mut rng = policy.stream(INIT_GENERATION, Role::Init, i);
        genes.extend((0..k).map(|_| rng.random_range(0..upper)));
    }
    PopulationMatrix::new(rows.len(), k, genes)
}

/// Rank-based roulette weights: the best row gets `s`, the worst `1`.
/// Rows with equal fitness share the mean weight of the ranks they span, so
/// uniform fitness gives uniform weights.
pub fn rank_weights(fitness: &[f64], direction: Direction) -> Result<Vec<f64>> {
    if let Some(row) = fitness.iter().position(|v| !v.is_finite()) {
        return Err(Error::NanFitness { row });
    }
    let s = fitness.len();
    let mut order: Vec<usize> = (0..s).collect();
    order.sort_by(|&a, &b| direction.rank(fitness[a], fitness[b]));
    let mut weights = vec![0.0; s];
    let mut start = 0;
    while start < s {
        let mut end = start + 1;
        while end < s && fitness[order[end]] == fitness[order[start]] {
            end += 1;
        }
        // ranks start..end carry weights s-start ..= s-end+1
        let mean = (2 * s - start - end + 1) as f64 / 2.0;
        for &row in &order[start..end] {
            weights[row] = mean;
        }
        start = end;
    }
    Ok(weights)
}

/// One spin of the wheel: index `i` with probability `weights[i] / sum`.
/// A zero total degenerates to a uniform pick.
pub fn roulette_spin<R: Rng + ?Sized>(weights: &[f64], total: f64, rng: &mut R) -> usize {
    if total <= 0.0 {
        return rng.random_range(0..weights.len());
    }
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    // rounding pushed target past the last boundary
    weights
        .iter()
        .rposition(|&w| w > 0.0)
        .unwrap_or(weights.len() - 1)
}

/// Partner row for every row `i`, drawn from the `Select` stream of row `i`.
pub fn select_partners(
    fitness: &FitnessVector,
    direction: Direction,
    policy: &RngPolicy,
    generation: u64,
) -> Result<Vec<usize>> {
    let weights = rank_weights(fitness.values(), direction)?;
    let total: f64 = weights.iter().sum();
    Ok((0..weights.len())
        .map(|i| {
            let mut rng = policy.stream(generation, Role::Select, i);
            roulette_spin(&weights, total, &mut rng)
        })
        .collect())
}

/// The partner matrix `PC`: `s` rows sampled with replacement by rank roulette.
pub fn roulette_select(
    pop: &PopulationMatrix,
    fitness: &FitnessVector,
    direction: Direction,
    policy: &RngPolicy,
    generation: u64,
) -> Result<PopulationMatrix> {
    if fitness.len() != pop.rows() {
        return Err(Error::ShapeMismatch {
            expected: (pop.rows(), 1),
            actual: (fitness.len(), 1),
        });
    }
    let partners = select_partners(fitness, direction, policy, generation)?;
    let mut out = PopulationMatrix::zeros(pop.rows(), pop.cols());
    for (i, &p) in partners.iter().enumerate() {
        out.row_mut(i).copy_from_slice(pop.row(p));
    }
    Ok(out)
}

fn bernoulli_rows(
    rows: Range<usize>,
    k: usize,
    rate: f64,
    role: Role,
    policy: &RngPolicy,
    generation: u64,
) -> MaskMatrix {
    let mut bits = Vec::with_capacity(rows.len() * k);
    for i in rows.clone() {
        let mut rng = policy.stream(generation, role, i);
        bits.extend((0..k).map(|_| rng.random::<f64>() < rate));
    }
    MaskMatrix::new(rows.len(), k, bits)
}

/// `RC`: each entry is 1 with probability `pc`.
pub fn crossover_mask(
    s: usize,
    k: usize,
    pc: f64,
    policy: &RngPolicy,
    generation: u64,
) -> MaskMatrix {
    bernoulli_rows(0..s, k, pc, Role::CrossoverMask, policy, generation)
}

/// `RM` restricted to global rows `rows`: each entry is 1 with probability `pm`.
pub fn mutation_mask_rows(
    rows: Range<usize>,
    k: usize,
    pm: f64,
    policy: &RngPolicy,
    generation: u64,
) -> MaskMatrix {
    bernoulli_rows(rows, k, pm, Role::MutationMask, policy, generation)
}

/// `R_POP` restricted to global rows `rows`: fresh uniform gene ids.
pub fn mutation_index_rows(
    rows: Range<usize>,
    k: usize,
    pool_len: usize,
    policy: &RngPolicy,
    generation: u64,
) -> PopulationMatrix {
    let upper = pool_len as u32;
    let mut genes = Vec::with_capacity(rows.len() * k);
    for i in rows.clone() {
        let mut rng = policy.stream(generation, Role::MutationIndex, i);
        genes.extend((0..k).map(|_| rng.random_range(0..upper)));
    }
    PopulationMatrix::new(rows.len(), k, genes).expect("shape by construction")
}

/// `take ⊙ mask + keep ⊙ (1 - mask)`, elementwise.
pub fn combine(
    keep: &PopulationMatrix,
    take: &PopulationMatrix,
    mask: &MaskMatrix,
) -> Result<PopulationMatrix> {
    for shape in [take.shape(), mask.shape()] {
        if shape != keep.shape() {
            return Err(Error::ShapeMismatch {
                expected: keep.shape(),
                actual: shape,
            });
        }
    }
    let (rows, cols) = keep.shape();
    let mut out = PopulationMatrix::zeros(rows, cols);
    for i in 0..rows {
        let (k_row, t_row, m_row) = (keep.row(i), take.row(i), mask.row(i));
        for (j, slot) in out.row_mut(i).iter_mut().enumerate() {
            *slot = if m_row[j] { t_row[j] } else { k_row[j] };
        }
    }
    Ok(out)
}

/// `C_POP = PC ⊙ RC + POP ⊙ (1 - RC)` with a fresh `RC` for this generation.
pub fn crossover(
    pop: &PopulationMatrix,
    partners: &PopulationMatrix,
    pc: f64,
    policy: &RngPolicy,
    generation: u64,
) -> Result<PopulationMatrix> {
    let mask = crossover_mask(pop.rows(), pop.cols(), pc, policy, generation);
    combine(pop, partners, &mask)
}

/// `M_POP = C_POP ⊙ (1 - RM) + R_POP ⊙ RM` for a block whose first global
/// row is `offset`.
pub fn mutate(
    c_pop: &PopulationMatrix,
    offset: usize,
    pm: f64,
    pool_len: usize,
    policy: &RngPolicy,
    generation: u64,
) -> Result<PopulationMatrix> {
    let rows = offset..offset + c_pop.rows();
    let mask = mutation_mask_rows(rows.clone(), c_pop.cols(), pm, policy, generation);
    let fresh = mutation_index_rows(rows, c_pop.cols(), pool_len, policy, generation);
    combine(c_pop, &fresh, &mask)
}

/// Stable sort of rows by fitness, best first.
pub fn sort_population(
    pop: &PopulationMatrix,
    fitness: &FitnessVector,
    direction: Direction,
) -> Result<(PopulationMatrix, FitnessVector)> {
    fitness.check_finite()?;
    let mut order: Vec<usize> = (0..pop.rows()).collect();
    order.sort_by(|&a, &b| direction.rank(fitness.get(a), fitness.get(b)));
    let mut out = PopulationMatrix::zeros(pop.rows(), pop.cols());
    for (dst, &src) in order.iter().enumerate() {
        out.row_mut(dst).copy_from_slice(pop.row(src));
    }
    let values = order.iter().map(|&i| fitness.get(i)).collect();
    Ok((out, FitnessVector::new(values)))
}

/// Keeps the best `s` of the `2s` stacked rows `[pop; m_pop]`.
///
/// The sort is stable, so among equal fitness the parent rows come before
/// the mutated rows and each keeps its original order.
pub fn elitism(
    pop: &PopulationMatrix,
    m_pop: &PopulationMatrix,
    fit_pop: &FitnessVector,
    fit_m: &FitnessVector,
    direction: Direction,
) -> Result<(PopulationMatrix, FitnessVector)> {
    if pop.shape() != m_pop.shape() {
        return Err(Error::ShapeMismatch {
            expected: pop.shape(),
            actual: m_pop.shape(),
        });
    }
    if fit_pop.len() != pop.rows() || fit_m.len() != m_pop.rows() {
        return Err(Error::ShapeMismatch {
            expected: (pop.rows(), m_pop.rows()),
            actual: (fit_pop.len(), fit_m.len()),
        });
    }
    fit_pop.check_finite()?;
    fit_m.check_finite().map_err(|e| match e {
        Error::NanFitness { row } => Error::NanFitness {
            row: row + pop.rows(),
        },
        other => other,
    })?;

    let s = pop.rows();
    let value = |i: usize| {
        if i < s {
            fit_pop.get(i)
        } else {
            fit_m.get(i - s)
        }
    };
    let mut order: Vec<usize> = (0..2 * s).collect();
    order.sort_by(|&a, &b| direction.rank(value(a), value(b)));

    let mut out = PopulationMatrix::zeros(s, pop.cols());
    let mut values = Vec::with_capacity(s);
    for (dst, &src) in order.iter().take(s).enumerate() {
        let row = if src < s {
            pop.row(src)
        } else {
            m_pop.row(src - s)
        };
        out.row_mut(dst).copy_from_slice(row);
        values.push(value(src));
    }
    Ok((out, FitnessVector::new(values)))
}
