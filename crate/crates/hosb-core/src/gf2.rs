//! Bit-packed linear algebra over GF(2).
//!
//! Rows are stored as `u64` words; elimination works row-wise with word
//! XORs. This is the exact oracle behind planted 3R3X instances: solving
//! `A x = b (mod 2)` recovers a ground state directly.

use alloc::vec;
use alloc::vec::Vec;

use crate::Error;

/// A dense M x N bit matrix with bit-packed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    n_rows: usize,
    n_cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zero(n_rows: usize, n_cols: usize) -> Self {
        let words_per_row = n_cols.div_ceil(64);
        Gf2Matrix {
            n_rows,
            n_cols,
            words_per_row,
            words: vec![0; n_rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        assert!(r < self.n_rows && c < self.n_cols, "bit index out of range");
        let w = r * self.words_per_row + c / 64;
        let mask = 1u64 << (c % 64);
        if bit {
            self.words[w] |= mask;
        } else {
            self.words[w] &= !mask;
        }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.n_rows && c < self.n_cols, "bit index out of range");
        let w = r * self.words_per_row + c / 64;
        (self.words[w] >> (c % 64)) & 1 == 1
    }

    /// Flips bit (r, c); handy when filling parity rows.
    pub fn toggle(&mut self, r: usize, c: usize) {
        let w = r * self.words_per_row + c / 64;
        self.words[w] ^= 1u64 << (c % 64);
    }

    /// Matrix-vector product `A x` over GF(2).
    pub fn mul_vec(&self, x: &[bool]) -> Result<Vec<bool>, Error> {
        if x.len() != self.n_cols {
            return Err(Error::DimensionMismatch {
                expected: self.n_cols,
                got: x.len(),
            });
        }
        let mut packed = vec![0u64; self.words_per_row];
        for (c, &bit) in x.iter().enumerate() {
            if bit {
                packed[c / 64] |= 1u64 << (c % 64);
            }
        }
        let mut out = Vec::with_capacity(self.n_rows);
        for r in 0..self.n_rows {
            let row = &self.words[r * self.words_per_row..(r + 1) * self.words_per_row];
            let parity = row
                .iter()
                .zip(&packed)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            out.push(parity & 1 == 1);
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words_per_row;
        for k in 0..w {
            self.words.swap(a * w + k, b * w + k);
        }
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let w = self.words_per_row;
        let (src_off, dst_off) = (src * w, dst * w);
        for k in 0..w {
            let v = self.words[src_off + k];
            self.words[dst_off + k] ^= v;
        }
    }
}

/// Outcome of [`solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Solution {
    /// One solution with all free variables set to 0, or `None` when the
    /// system is inconsistent. Inconsistency is a result, not an error.
    pub solution: Option<Vec<bool>>,
    pub rank: usize,
    /// `n_cols - rank`; when consistent the solution count is `2^nullity`.
    pub nullity: usize,
    /// A basis of the null space (one vector per free column); the full
    /// solution set is `solution + span(null_basis)`.
    pub null_basis: Vec<Vec<bool>>,
}

impl Gf2Solution {
    /// `2^nullity` when it fits in a `u128`.
    pub fn solution_count(&self) -> Option<u128> {
        if self.solution.is_none() {
            return Some(0);
        }
        if self.nullity < 128 {
            Some(1u128 << self.nullity)
        } else {
            None
        }
    }
}

/// Gaussian elimination over GF(2) on the augmented system `[A | b]`.
pub fn solve(a: &Gf2Matrix, b: &[bool]) -> Result<Gf2Solution, Error> {
    if b.len() != a.n_rows {
        return Err(Error::DimensionMismatch {
            expected: a.n_rows,
            got: b.len(),
        });
    }
    let m = a.n_rows;
    let n = a.n_cols;

    // Augment b as an extra column so row ops carry it along.
    let mut work = Gf2Matrix::zero(m, n + 1);
    for r in 0..m {
        for w in 0..a.words_per_row {
            work.words[r * work.words_per_row + w] = a.words[r * a.words_per_row + w];
        }
        if b[r] {
            work.set(r, n, true);
        }
    }

    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; n];
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..m).find(|&r| work.get(r, col)) else {
            continue;
        };
        work.swap_rows(rank, pivot);
        for r in 0..m {
            if r != rank && work.get(r, col) {
                work.xor_row_into(rank, r);
            }
        }
        pivot_row_of_col[col] = Some(rank);
        pivot_col_of_row.push(col);
        rank += 1;
        if rank == m {
            break;
        }
    }

    // Any all-zero row with b = 1 is a contradiction.
    let consistent = (rank..m).all(|r| !work.get(r, n));
    let nullity = n - rank;

    let solution = consistent.then(|| {
        let mut x = vec![false; n];
        for (row, &col) in pivot_col_of_row.iter().enumerate() {
            x[col] = work.get(row, n);
        }
        x
    });

    // Null basis: one vector per free column f, with x_f = 1 and each
    // pivot column set to the coefficient of f in its reduced row.
    let mut null_basis = Vec::with_capacity(nullity);
    for f in 0..n {
        if pivot_row_of_col[f].is_some() {
            continue;
        }
        let mut v = vec![false; n];
        v[f] = true;
        for (row, &col) in pivot_col_of_row.iter().enumerate() {
            if work.get(row, f) {
                v[col] = true;
            }
        }
        null_basis.push(v);
    }

    Ok(Gf2Solution {
        solution,
        rank,
        nullity,
        null_basis,
    })
}

/// Enumerates the full solution set `solution + span(null_basis)`.
/// Intended for oracle checks at small nullity.
pub fn enumerate_solutions(sol: &Gf2Solution) -> Vec<Vec<bool>> {
    let Some(base) = &sol.solution else {
        return Vec::new();
    };
    assert!(
        sol.nullity < 32,
        "solution space too large to enumerate (nullity {})",
        sol.nullity
    );
    let mut out = Vec::with_capacity(1usize << sol.nullity);
    for mask in 0u64..(1u64 << sol.nullity) {
        let mut x = base.clone();
        for (k, basis_vec) in sol.null_basis.iter().enumerate() {
            if (mask >> k) & 1 == 1 {
                for (xi, &bi) in x.iter_mut().zip(basis_vec) {
                    *xi ^= bi;
                }
            }
        }
        out.push(x);
    }
    out
}
