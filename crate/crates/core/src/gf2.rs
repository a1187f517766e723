//! Dense bit-packed matrices over the two-element field.
//!
//! Used by the static Betti computation, which deliberately runs plain
//! Gaussian elimination on a dense representation instead of reusing the
//! persistence reduction: the two routes check each other.

use alloc::vec::Vec;

/// Row-major bit matrix; 64 entries per word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        Self {
            rows,
            cols,
            words_per_row,
            data: alloc::vec![0; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, row: usize, col: usize) {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.words_per_row + (col >> 6)] |= 1u64 << (col & 63);
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.words_per_row + (col >> 6)] >> (col & 63) & 1 == 1
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let w = self.words_per_row;
        let (a, b) = (src * w, dst * w);
        for k in 0..w {
            let v = self.data[a + k];
            self.data[b + k] ^= v;
        }
    }

    /// Rank over the two-element field, by row-echelon elimination.
    /// Consumes the matrix (it is reduced in place).
    pub fn rank(mut self) -> usize {
        let mut rank = 0usize;
        for col in 0..self.cols {
            // Find a pivot row at or below `rank` with a 1 in this column.
            let Some(pivot) = (rank..self.rows).find(|r| self.get(*r, col)) else {
                continue;
            };
            if pivot != rank {
                let w = self.words_per_row;
                for k in 0..w {
                    self.data.swap(pivot * w + k, rank * w + k);
                }
            }
            for r in 0..self.rows {
                if r != rank && self.get(r, col) {
                    self.xor_row_into(rank, r);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_identity_and_zero() {
        let mut m = BitMatrix::zeros(3, 3);
        for i in 0..3 {
            m.set(i, i);
        }
        assert_eq!(m.rank(), 3);
        assert_eq!(BitMatrix::zeros(4, 7).rank(), 0);
        assert_eq!(BitMatrix::zeros(0, 0).rank(), 0);
    }

    #[test]
    fn rank_detects_dependent_rows() {
        // Row 2 = row 0 + row 1 over GF(2).
        let mut m = BitMatrix::zeros(3, 4);
        m.set(0, 0);
        m.set(0, 1);
        m.set(1, 1);
        m.set(1, 2);
        m.set(2, 0);
        m.set(2, 2);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rank_spans_word_boundaries() {
        // 2x130 matrix with pivots at columns 100 and 129.
        let mut m = BitMatrix::zeros(2, 130);
        m.set(0, 100);
        m.set(0, 129);
        m.set(1, 129);
        assert_eq!(m.rank(), 2);
    }
}
