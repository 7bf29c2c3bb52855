use rand::Rng;

use super::population::PopulationMatrix;
use crate::error::{Error, Result};
use crate::rng::{RngPolicy, Role};

/// Pseudo-observations spread uniformly over the pool at every locus when
/// the engine samples an EDA generation. One extra observation in total
/// keeps every gene reachable without swamping the elite statistics.
pub const EDA_SMOOTHING: f64 = 1.0;

/// Elite rows the engine estimates the EDA distribution from: the top half.
pub fn eda_elite_count(s: usize) -> usize {
    s.div_ceil(2).max(1)
}

/// Samples an `s x k` population column-independently from the per-locus
/// gene frequencies of the first `elite_count` rows of `elite` (which must
/// be sorted best first).
///
/// At each locus gene `g` is drawn with probability proportional to
/// `count(g) + smoothing / pool_len`. With `smoothing = 0` this is the plain
/// empirical distribution.
pub fn eda_sample(
    elite: &PopulationMatrix,
    elite_count: usize,
    pool_len: usize,
    s: usize,
    smoothing: f64,
    policy: &RngPolicy,
    generation: u64,
) -> Result<PopulationMatrix> {
    if elite_count == 0 || elite_count > elite.rows() {
        return Err(Error::InvalidParams(format!(
            "elite count {elite_count} not in 1..={}",
            elite.rows()
        )));
    }
    if pool_len == 0 || smoothing < 0.0 {
        return Err(Error::InvalidParams(
            "EDA needs a non-empty pool and smoothing >= 0".into(),
        ));
    }
    let k = elite.cols();
    let total = elite_count as f64 + smoothing;
    let mut genes = Vec::with_capacity(s * k);
    for i in 0..s {
        let mut rng = policy.stream(generation, Role::Eda, i);
        for j in 0..k {
            // an elite row picked uniformly reproduces the empirical frequency at locus j
            let u = rng.random::<f64>() * total;
            let gene = if u < elite_count as f64 {
                elite.row((u as usize).min(elite_count - 1))[j]
            } else {
                rng.random_range(0..pool_len as u32)
            };
            genes.push(gene);
        }
    }
    PopulationMatrix::new(s, k, genes)
}
