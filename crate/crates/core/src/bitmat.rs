//! Dense square boolean matrices packed into 64-bit words.

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        let words = n.div_ceil(WORD);
        Self {
            n,
            words,
            data: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / WORD] >> (j % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / WORD] |= 1 << (j % WORD);
    }

    #[inline]
    pub fn clear(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / WORD] &= !(1 << (j % WORD));
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn row_count(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Column indices of the set bits in row `i`, ascending.
    pub fn row_ones(&self, i: usize) -> RowOnes<'_> {
        RowOnes {
            words: self.row(i),
            index: 0,
            current: self.row(i).first().copied().unwrap_or(0),
        }
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.row_ones(i).all(|j| self.get(j, i)))
    }

    /// Boolean product: `out[i][j] = OR_k self[i][k] AND rhs[k][j]`.
    ///
    /// Row `i` of the product is the union of the rows of `rhs` selected by
    /// the set bits of row `i` of `self`, so the cost is proportional to the
    /// number of ones in `self` times the row width.
    pub fn bool_mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = BitMatrix::zeros(self.n);
        for i in 0..self.n {
            let start = i * self.words;
            for k in self.row_ones(i) {
                let src = rhs.row(k);
                let dst = &mut out.data[start..start + self.words];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d |= *s;
                }
            }
        }
        out
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let line: String = (0..self.n)
                .map(|j| if self.get(i, j) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

pub struct RowOnes<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for RowOnes<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}
