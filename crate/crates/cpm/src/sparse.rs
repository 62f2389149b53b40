//! Compressed sparse row matrices over band indices.
//!
//! Rows are stored with sorted column indices and no explicit zeros.  The
//! operator assembly needs exact sparse-sparse products (`E_p · L`) and row
//! merges, both implemented with a dense scatter accumulator, so duplicate
//! entries are summed and the resulting sparsity counts are reproducible.

use crate::error::{Error, Result};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Build from per-row `(col, value)` lists. Duplicates are summed,
    /// columns sorted, exact zeros dropped.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<(usize, f64)>>) -> Self {
        let nrows = rows.len();
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        let mut buf: Vec<(usize, f64)> = Vec::new();
        for row in rows {
            buf.clear();
            buf.extend(row);
            buf.sort_unstable_by_key(|e| e.0);
            let mut i = 0;
            while i < buf.len() {
                let col = buf[i].0;
                assert!(col < ncols, "column {col} out of bounds {ncols}");
                let mut v = buf[i].1;
                let mut j = i + 1;
                while j < buf.len() && buf[j].0 == col {
                    v += buf[j].1;
                    j += 1;
                }
                if v != 0.0 {
                    indices.push(col);
                    values.push(v);
                }
                i = j;
            }
            indptr.push(indices.len());
        }
        Self { nrows, ncols, indptr, indices, values }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.nrows).map(|i| self.row(i).1.iter().sum()).collect()
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.ncols);
        let mut y = vec![0.0; self.nrows];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            let mut s = 0.0;
            for (c, v) in cols.iter().zip(vals) {
                s += v * x[*c];
            }
            y[i] = s;
        }
        y
    }

    /// Sparse-sparse product `self · other` with exact index merging.
    pub fn matmul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols != other.nrows {
            return Err(Error::DimMismatch(format!(
                "matmul {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut acc = Accumulator::new(other.ncols);
        let mut rows = Vec::with_capacity(self.nrows);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                let (ocols, ovals) = other.row(*c);
                for (oc, ov) in ocols.iter().zip(ovals) {
                    acc.add(*oc, v * ov);
                }
            }
            rows.push(acc.drain());
        }
        Ok(SparseMatrix::from_rows(other.ncols, rows))
    }

    /// `alpha·self + beta·other`.
    pub fn add_scaled(&self, alpha: f64, other: &SparseMatrix, beta: f64) -> Result<SparseMatrix> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::DimMismatch(format!(
                "add {}x{} and {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut acc = Accumulator::new(self.ncols);
        let mut rows = Vec::with_capacity(self.nrows);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                acc.add(*c, alpha * v);
            }
            let (cols, vals) = other.row(i);
            for (c, v) in cols.iter().zip(vals) {
                acc.add(*c, beta * v);
            }
            rows.push(acc.drain());
        }
        Ok(SparseMatrix::from_rows(self.ncols, rows))
    }

    /// `self + alpha·I`.
    pub fn add_diag(&self, alpha: f64) -> SparseMatrix {
        let mut rows = Vec::with_capacity(self.nrows);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            let mut row: Vec<(usize, f64)> =
                cols.iter().copied().zip(vals.iter().copied()).collect();
            row.push((i, alpha));
            rows.push(row);
        }
        SparseMatrix::from_rows(self.ncols, rows)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                d[i][*c] = *v;
            }
        }
        d
    }

    /// MatrixMarket coordinate format (1-based indices).
    pub fn write_matrix_market(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(f, "{} {} {}", self.nrows, self.ncols, self.nnz())?;
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                writeln!(f, "{} {} {:.16e}", i + 1, c + 1, v)?;
            }
        }
        Ok(())
    }
}

/// Dense scatter accumulator for one output row at a time.
struct Accumulator {
    values: Vec<f64>,
    occupied: Vec<bool>,
    touched: Vec<usize>,
}

impl Accumulator {
    fn new(ncols: usize) -> Self {
        Self { values: vec![0.0; ncols], occupied: vec![false; ncols], touched: Vec::new() }
    }

    fn add(&mut self, col: usize, v: f64) {
        if !self.occupied[col] {
            self.occupied[col] = true;
            self.touched.push(col);
        }
        self.values[col] += v;
    }

    fn drain(&mut self) -> Vec<(usize, f64)> {
        let mut row: Vec<(usize, f64)> = Vec::with_capacity(self.touched.len());
        for &c in &self.touched {
            row.push((c, self.values[c]));
            self.values[c] = 0.0;
            self.occupied[c] = false;
        }
        self.touched.clear();
        row
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let (n, k, m) = (a.len(), b.len(), b[0].len());
        let mut c = vec![vec![0.0; m]; n];
        for i in 0..n {
            for l in 0..k {
                for j in 0..m {
                    c[i][j] += a[i][l] * b[l][j];
                }
            }
        }
        c
    }

    fn from_dense(d: &[Vec<f64>]) -> SparseMatrix {
        SparseMatrix::from_rows(
            d[0].len(),
            d.iter()
                .map(|r| {
                    r.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, v)| (j, *v)).collect()
                })
                .collect(),
        )
    }

    #[test]
    fn identity_apply() {
        let a = SparseMatrix::identity(4);
        let x = vec![1.0, -2.0, 3.0, 0.5];
        assert_eq!(a.apply(&x), x);
    }

    #[test]
    fn duplicate_entries_are_summed_and_zeros_dropped() {
        let a = SparseMatrix::from_rows(3, vec![vec![(1, 2.0), (1, 3.0), (0, 1.0), (2, 0.0)]]);
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.row(0), (&[0usize, 1][..], &[1.0, 5.0][..]));
    }

    proptest! {
        #[test]
        fn matmul_matches_dense(seed in 0u64..200) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 5;
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Vec<f64>> {
                (0..n).map(|_| (0..n).map(|_| {
                    if rng.gen_bool(0.5) { rng.gen_range(-2.0..2.0) } else { 0.0 }
                }).collect()).collect()
            };
            let (da, db) = (mk(&mut rng), mk(&mut rng));
            let prod = from_dense(&da).matmul(&from_dense(&db)).unwrap().to_dense();
            let expect = dense_mul(&da, &db);
            for i in 0..n {
                for j in 0..n {
                    prop_assert!((prod[i][j] - expect[i][j]).abs() < 1e-14);
                }
            }
        }

        #[test]
        fn apply_matches_dense(seed in 0u64..200) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 5;
            let d: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| {
                if rng.gen_bool(0.6) { rng.gen_range(-2.0..2.0) } else { 0.0 }
            }).collect()).collect();
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let y = from_dense(&d).apply(&x);
            for i in 0..n {
                let expect: f64 = (0..n).map(|j| d[i][j] * x[j]).sum();
                prop_assert!((y[i] - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn add_scaled_and_diag() {
        let a = SparseMatrix::from_rows(2, vec![vec![(0, 1.0), (1, 2.0)], vec![(1, -1.0)]]);
        let b = SparseMatrix::identity(2);
        let c = a.add_scaled(2.0, &b, -1.0).unwrap();
        assert_eq!(c.get(0, 0), 1.0);
        assert_eq!(c.get(0, 1), 4.0);
        assert_eq!(c.get(1, 1), -3.0);
        let d = a.add_diag(5.0);
        assert_eq!(d.get(1, 1), 4.0);
    }

    #[test]
    fn matrix_market_roundtrip() {
        let a = SparseMatrix::from_rows(2, vec![vec![(0, 1.5)], vec![(0, -2.0), (1, 3.25)]]);
        let dir = std::env::temp_dir().join("cpm_mm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("a.mtx");
        a.write_matrix_market(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "%%MatrixMarket matrix coordinate real general");
        assert_eq!(lines.next().unwrap(), "2 2 3");
        let entries: Vec<(usize, usize, f64)> = lines
            .map(|l| {
                let mut it = l.split_whitespace();
                (
                    it.next().unwrap().parse().unwrap(),
                    it.next().unwrap().parse().unwrap(),
                    it.next().unwrap().parse().unwrap(),
                )
            })
            .collect();
        assert_eq!(entries, vec![(1, 1, 1.5), (2, 1, -2.0), (2, 2, 3.25)]);
    }
}
