use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Maximize,
    Minimize,
}

impl Direction {
    /// Ordering that puts better fitness first.
    pub fn rank(self, a: f64, b: f64) -> std::cmp::Ordering {
        match self {
            Direction::Maximize => b.total_cmp(&a),
            Direction::Minimize => a.total_cmp(&b),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Maximize => "maximize",
            Direction::Minimize => "minimize",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maximize" | "max" => Ok(Direction::Maximize),
            "minimize" | "min" => Ok(Direction::Minimize),
            other => Err(Error::InvalidParams(format!("unknown direction '{other}'"))),
        }
    }
}

/// `s x k` matrix of gene ids, row-major. Row `i` is individual `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PopulationMatrix {
    rows: usize,
    cols: usize,
    genes: Vec<u32>,
}

impl PopulationMatrix {
    pub fn new(rows: usize, cols: usize, genes: Vec<u32>) -> Result<Self> {
        if genes.len() != rows * cols {
            return Err(Error::InvalidParams(format!(
                "{} genes cannot fill a {rows}x{cols} population",
                genes.len()
            )));
        }
        Ok(Self { rows, cols, genes })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            genes: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidParams("ragged population rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            genes: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.genes[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.genes[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.genes
    }

    /// Copy of rows `range`.
    pub fn slice_rows(&self, range: std::ops::Range<usize>) -> PopulationMatrix {
        PopulationMatrix {
            rows: range.len(),
            cols: self.cols,
            genes: self.genes[range.start * self.cols..range.end * self.cols].to_vec(),
        }
    }

    /// Copies `block` into rows starting at `offset`.
    pub fn write_rows(&mut self, offset: usize, block: &PopulationMatrix) {
        assert_eq!(block.cols, self.cols);
        let start = offset * self.cols;
        self.genes[start..start + block.genes.len()].copy_from_slice(&block.genes);
    }

    pub fn check_genes(&self, pool_len: usize) -> Result<()> {
        match self.genes.iter().find(|&&g| g as usize >= pool_len) {
            Some(&gene) => Err(Error::GeneOutOfRange { gene, pool_len }),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for PopulationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter_rows()).finish()
    }
}

/// Binary `s x k` mask; `true` marks positions that take the alternative gene.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaskMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl MaskMatrix {
    pub fn new(rows: usize, cols: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), rows * cols);
        Self { rows, cols, bits }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[bool] {
        &self.bits[i * self.cols..(i + 1) * self.cols]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn ones_fraction(&self) -> f64 {
        if self.bits.is_empty() {
            return 0.0;
        }
        self.count_ones() as f64 / self.bits.len() as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitnessVector {
    values: Vec<f64>,
}

impl FitnessVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len().max(1) as f64
    }

    /// Index of the best value; the first one wins ties.
    pub fn best_index(&self, direction: Direction) -> Option<usize> {
        (0..self.values.len()).min_by(|&a, &b| direction.rank(self.values[a], self.values[b]))
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.values.iter().position(|v| !v.is_finite()) {
            Some(row) => Err(Error::NanFitness { row }),
            None => Ok(()),
        }
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.values
    }
}

impl From<Vec<f64>> for FitnessVector {
    fn from(values: Vec<f64>) -> Self {
        Self { values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_and_slices() {
        let mut pop = PopulationMatrix::new(3, 2, vec![0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(pop.row(1), &[2, 3]);
        let block = pop.slice_rows(1..3);
        assert_eq!(block.shape(), (2, 2));
        pop.write_rows(0, &block);
        assert_eq!(pop.as_slice(), &[2, 3, 4, 5, 4, 5]);
        assert!(PopulationMatrix::new(2, 2, vec![1]).is_err());
        assert!(pop.check_genes(6).is_ok());
        assert!(pop.check_genes(5).is_err());
    }

    #[test]
    fn best_index_respects_direction() {
        let f = FitnessVector::new(vec![2.0, 5.0, 1.0, 5.0]);
        assert_eq!(f.best_index(Direction::Maximize), Some(1));
        assert_eq!(f.best_index(Direction::Minimize), Some(2));
        assert!(FitnessVector::new(vec![1.0, f64::NAN])
            .check_finite()
            .is_err());
    }
}
