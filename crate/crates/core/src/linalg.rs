//! Exact sparse linear algebra over a prime field F_p.
//!
//! Matrices arising from monomial complexes have one or two entries per
//! column (signs times a structure constant 1), so elimination is done
//! sparsely with a Markowitz-style pivot choice: among the remaining nonzero
//! entries, pick one minimizing (row_nnz - 1)·(col_nnz - 1), breaking ties by
//! position so runs are deterministic.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a % self.p * (b % self.p) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        base %= self.p;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Sparse matrix over F_p in row-major form.  Rows hold strictly increasing
/// column indices with nonzero values; this canonical form makes equality
/// structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, u64)>>,
    field: PrimeField,
}

impl SparseMatrix {
    /// Build from (row, col, value) triplets.  Values are reduced mod p,
    /// duplicate positions are summed, and zeros are dropped.
    pub fn from_triplets(
        field: PrimeField,
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, i64)],
    ) -> Result<Self> {
        let mut data: Vec<Vec<(usize, u64)>> = vec![Vec::new(); rows];
        let mut sorted = triplets.to_vec();
        sorted.sort_by_key(|&(r, c, _)| (r, c));
        for &(r, c, v) in &sorted {
            if r >= rows || c >= cols {
                return Err(Error::ShapeMismatch(format!(
                    "entry ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            let v = field.reduce_i64(v);
            let row = &mut data[r];
            match row.last_mut() {
                Some((lc, lv)) if *lc == c => *lv = field.add(*lv, v),
                _ => row.push((c, v)),
            }
        }
        for row in &mut data {
            row.retain(|&(_, v)| v != 0);
        }
        Ok(SparseMatrix { rows, cols, data, field })
    }

    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows], field }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut data: Vec<Vec<(usize, u64)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            data[c].push((r, v));
        }
        SparseMatrix { rows: self.cols, cols: self.rows, data, field: self.field }
    }

    /// self · rhs, for self.cols == rhs.rows.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.field;
        let mut data: Vec<Vec<(usize, u64)>> = Vec::with_capacity(self.rows);
        let mut acc: Vec<u64> = vec![0; rhs.cols];
        let mut touched: Vec<usize> = Vec::new();
        for row in &self.data {
            for &(k, v) in row {
                for &(j, w) in &rhs.data[k] {
                    if acc[j] == 0 {
                        touched.push(j);
                    }
                    acc[j] = f.add(acc[j], f.mul(v, w));
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                if acc[j] != 0 {
                    out.push((j, acc[j]));
                }
                acc[j] = 0;
            }
            touched.clear();
            data.push(out);
        }
        Ok(SparseMatrix { rows: self.rows, cols: rhs.cols, data, field: f })
    }

    /// Apply to a dense column vector.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        debug_assert_eq!(v.len(), self.cols);
        let f = self.field;
        self.data
            .iter()
            .map(|row| {
                let mut s = 0u64;
                for &(c, w) in row {
                    s = f.add(s, f.mul(w, v[c]));
                }
                s
            })
            .collect()
    }

    /// Glue columns of `right` after the columns of self (same row count).
    pub fn augment(&self, right: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != right.rows {
            return Err(Error::ShapeMismatch(format!(
                "augment {}x{} with {}x{}",
                self.rows, self.cols, right.rows, right.cols
            )));
        }
        let mut data = self.data.clone();
        for (r, row) in right.data.iter().enumerate() {
            data[r].extend(row.iter().map(|&(c, v)| (c + self.cols, v)));
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols: self.cols + right.cols,
            data,
            field: self.field,
        })
    }

    /// Pack dense column vectors into a sparse matrix.
    pub fn from_dense_columns(field: PrimeField, rows: usize, cols: &[Vec<u64>]) -> SparseMatrix {
        let mut data: Vec<Vec<(usize, u64)>> = vec![Vec::new(); rows];
        for (j, col) in cols.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                if v % field.p != 0 {
                    data[i].push((j, v % field.p));
                }
            }
        }
        SparseMatrix { rows, cols: cols.len(), data, field }
    }

    /// Rank by fraction-free sparse elimination (everything is exact mod p).
    pub fn rank(&self) -> usize {
        let f = self.field;
        let mut rows: Vec<Vec<(usize, u64)>> = self.data.clone();
        let mut row_active = vec![true; self.rows];
        let mut col_active = vec![true; self.cols];
        let mut col_nnz = vec![0usize; self.cols];
        for row in &rows {
            for &(c, _) in row {
                col_nnz[c] += 1;
            }
        }
        let mut rank = 0usize;
        loop {
            // Markowitz-style pivot: minimize (row_nnz-1)(col_nnz-1) over the
            // remaining nonzero entries, ties broken by (row, col).
            let mut best: Option<(usize, usize, usize)> = None;
            for (r, row) in rows.iter().enumerate() {
                if !row_active[r] || row.is_empty() {
                    continue;
                }
                let rn = row.len();
                for &(c, _) in row {
                    let score = (rn - 1) * (col_nnz[c].max(1) - 1);
                    if best.map_or(true, |(s, br, bc)| {
                        (score, r, c) < (s, br, bc)
                    }) {
                        best = Some((score, r, c));
                    }
                }
            }
            let Some((_, pr, pc)) = best else { break };
            rank += 1;
            row_active[pr] = false;
            col_active[pc] = false;
            let piv_row = std::mem::take(&mut rows[pr]);
            let piv_val = piv_row.iter().find(|&&(c, _)| c == pc).unwrap().1;
            let piv_inv = f.inv(piv_val);
            for &(c, _) in &piv_row {
                col_nnz[c] -= 1;
            }
            for (r, row) in rows.iter_mut().enumerate() {
                if !row_active[r] || row.is_empty() {
                    continue;
                }
                let Some(&(_, val)) = row.iter().find(|&&(c, _)| c == pc) else {
                    continue;
                };
                let factor = f.mul(val, piv_inv);
                // row -= factor * piv_row, merging sorted column lists.
                let mut merged = Vec::with_capacity(row.len() + piv_row.len());
                let (mut i, mut j) = (0, 0);
                while i < row.len() || j < piv_row.len() {
                    match (row.get(i), piv_row.get(j)) {
                        (Some(&(c1, v1)), Some(&(c2, v2))) if c1 == c2 => {
                            let v = f.sub(v1, f.mul(factor, v2));
                            if v != 0 {
                                merged.push((c1, v));
                            } else if col_active[c1] {
                                col_nnz[c1] -= 1;
                            }
                            i += 1;
                            j += 1;
                        }
                        (Some(&(c1, v1)), Some(&(c2, _))) if c1 < c2 => {
                            merged.push((c1, v1));
                            i += 1;
                        }
                        (Some(&(c1, v1)), None) => {
                            merged.push((c1, v1));
                            i += 1;
                        }
                        (_, Some(&(c2, v2))) => {
                            let v = f.neg(f.mul(factor, v2));
                            if v != 0 {
                                merged.push((c2, v));
                                if col_active[c2] {
                                    col_nnz[c2] += 1;
                                }
                            }
                            j += 1;
                        }
                        (None, None) => unreachable!(),
                    }
                }
                // The pivot column entry always cancels; drop it if the merge
                // kept a zero there (it cannot, values at pc cancel exactly).
                *row = merged;
            }
        }
        rank
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the null space as dense column vectors, via reduced row
    /// echelon form.  Deterministic: free columns in increasing order.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let mut dense: Vec<Vec<u64>> = vec![vec![0; self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            dense[r][c] = v;
        }
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; self.cols];
        let mut rank = 0usize;
        for c in 0..self.cols {
            let Some(pr) = (rank..self.rows).find(|&r| dense[r][c] != 0) else {
                continue;
            };
            dense.swap(rank, pr);
            let inv = f.inv(dense[rank][c]);
            for j in c..self.cols {
                dense[rank][j] = f.mul(dense[rank][j], inv);
            }
            for r in 0..self.rows {
                if r != rank && dense[r][c] != 0 {
                    let factor = dense[r][c];
                    for j in c..self.cols {
                        let t = f.mul(factor, dense[rank][j]);
                        dense[r][j] = f.sub(dense[r][j], t);
                    }
                }
            }
            pivot_of_col[c] = Some(rank);
            rank += 1;
            if rank == self.rows {
                // Remaining columns are all free.
            }
        }
        let mut basis = Vec::new();
        for c in 0..self.cols {
            if pivot_of_col[c].is_some() {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[c] = 1;
            for (j, piv) in pivot_of_col.iter().enumerate() {
                if let Some(r) = piv {
                    v[j] = f.neg(dense[*r][c]);
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// rank(B·A): the rank of the composite map when A is applied first.
pub fn image_rank_through(a: &SparseMatrix, b: &SparseMatrix) -> Result<usize> {
    Ok(b.mul(a)?.rank())
}
