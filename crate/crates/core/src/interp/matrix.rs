//! Dense row-major matrices over `F_p` and rank by Gaussian elimination.

use super::field::PrimeField;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Builds a matrix from reduced entries in row-major order.
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Copy with rows and columns permuted: row `i` of the result is row
    /// `row_perm[i]` of `self`, likewise for columns.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, self.cols);
        for (i, &src_r) in row_perm.iter().enumerate() {
            for (j, &src_c) in col_perm.iter().enumerate() {
                out.data[i * self.cols + j] = self.get(src_r, src_c);
            }
        }
        out
    }

    /// Rank over `F_p`. Consumes the matrix, which is reduced in place.
    pub fn rank(mut self, field: &PrimeField) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let p = field.modulus();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| self.data[r * cols + col] != 0) else {
                continue;
            };
            if pivot != rank {
                for c in col..cols {
                    self.data.swap(pivot * cols + c, rank * cols + c);
                }
            }
            let inv = field.inv(self.data[rank * cols + col]);
            // Scale the pivot row so eliminating below needs one multiplier each.
            for c in col..cols {
                let i = rank * cols + c;
                self.data[i] = field.mul(self.data[i], inv);
            }
            let (head, tail) = self.data.split_at_mut((rank + 1) * cols);
            let pivot_row = &head[rank * cols + col..(rank + 1) * cols];
            for row in tail.chunks_exact_mut(cols) {
                let lead = row[col];
                if lead == 0 {
                    continue;
                }
                let factor = p - lead;
                for (x, &y) in row[col..].iter_mut().zip(pivot_row) {
                    // x + (p - lead)·y < p + p² < 2^64
                    *x = field.reduce(*x + factor * y);
                }
            }
            rank += 1;
        }
        rank
    }
}
