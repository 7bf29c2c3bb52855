use crate::bitmat::BitMatrix;
use crate::graph::Adjacency;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ReachabilityMode {
    /// Square until the matrix stops changing. Exact for any diameter.
    #[default]
    Fixpoint,
    /// Exactly three squarings, i.e. `(A + I)^8`: exact whenever the
    /// diameter is at most 8, which covers small-world graphs.
    SixDegrees,
}

/// Boolean reachability closure `M[u][v] = 1` iff `v` is reachable from `u`
/// (every node reaches itself).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessibilityMatrix {
    matrix: BitMatrix,
    multiplications: usize,
}

impl AccessibilityMatrix {
    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn get(&self, u: usize, v: usize) -> bool {
        self.matrix.get(u, v)
    }

    /// Boolean matrix products performed to reach the closure.
    pub fn multiplications(&self) -> usize {
        self.multiplications
    }

    /// Size of the component containing `u`.
    pub fn row_sum(&self, u: usize) -> usize {
        self.matrix.row_count(u)
    }

    /// Maximum connectivity number: the largest row sum.
    pub fn max_row_sum(&self) -> usize {
        (0..self.matrix.n())
            .map(|u| self.row_sum(u))
            .max()
            .unwrap_or(0)
    }

    /// Connected node pairs: every node in a component of size `c` has row
    /// sum `c`, so `sum_u (row_sum(u) - 1) / 2 = sum_C c (c - 1) / 2`.
    pub fn connected_pairs(&self) -> u64 {
        let total: u64 = (0..self.matrix.n())
            .map(|u| self.row_sum(u) as u64 - 1)
            .sum();
        total / 2
    }
}

pub fn accessibility_matrix(adj: &Adjacency) -> AccessibilityMatrix {
    accessibility_matrix_with(adj, ReachabilityMode::Fixpoint)
}

/// Repeated squaring of `binarize(A + I)`: after `t` products the matrix
/// holds every pair joined by a path of length at most `2^t`. Binarizing at
/// each step keeps entries in {0, 1}.
pub fn accessibility_matrix_with(adj: &Adjacency, mode: ReachabilityMode) -> AccessibilityMatrix {
    let n = adj.n();
    let mut current = adj.bits().clone();
    for i in 0..n {
        current.set(i, i);
    }
    let mut multiplications = 0;
    match mode {
        ReachabilityMode::Fixpoint => loop {
            let next = current.bool_mul(&current);
            multiplications += 1;
            if next == current {
                break;
            }
            current = next;
        },
        ReachabilityMode::SixDegrees => {
            for _ in 0..3 {
                current = current.bool_mul(&current);
                multiplications += 1;
            }
        }
    }
    AccessibilityMatrix {
        matrix: current,
        multiplications,
    }
}
