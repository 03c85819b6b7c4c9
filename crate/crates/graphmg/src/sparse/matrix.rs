//! Compressed sparse row storage generic over the entry type.
//!
//! Entries are kept sorted by `(row, col)` with no duplicate coordinates.
//! Matrices over `f64` store no explicit zeros except where an algorithm
//! works on a pattern with attached values (strength-of-connection matrices);
//! those are built through [`SparseMatrix::from_entries`], which keeps
//! whatever values it is given.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Row count below which the parallel kernels fall back to the sequential
/// path; scheduling overhead dominates under this size.
#[cfg(feature = "parallel")]
const PAR_MIN_ROWS: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<E> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<E>,
}

impl<E> SparseMatrix<E> {
    /// Matrix with no stored entries.
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            row_ptr: vec![0; nrows + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    /// Builds from coordinate triplets. Entries are sorted internally;
    /// duplicate coordinates and out-of-range indices are errors. Values are
    /// stored as given, including zeros.
    pub fn from_entries(
        nrows: usize,
        ncols: usize,
        mut entries: Vec<(usize, usize, E)>,
    ) -> Result<Self> {
        for &(r, c, _) in &entries {
            if r >= nrows || c >= ncols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    nrows,
                    ncols,
                });
            }
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::DuplicateEntry {
                    row: w[0].0,
                    col: w[0].1,
                });
            }
        }
        let mut row_ptr = vec![0usize; nrows + 1];
        for &(r, _, _) in &entries {
            row_ptr[r + 1] += 1;
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals = Vec::with_capacity(entries.len());
        for (_, c, v) in entries {
            cols.push(c);
            vals.push(v);
        }
        Ok(SparseMatrix {
            nrows,
            ncols,
            row_ptr,
            cols,
            vals,
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[E]) {
        let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
        (&self.cols[lo..hi], &self.vals[lo..hi])
    }

    /// Stored value at `(r, c)`, if present.
    pub fn get(&self, r: usize, c: usize) -> Option<&E> {
        let (cols, vals) = self.row(r);
        cols.binary_search(&c).ok().map(|k| &vals[k])
    }

    /// Iterates stored entries as `(row, col, &value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &E)> {
        (0..self.nrows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, v)| (r, c, v))
        })
    }

    /// Number of stored off-diagonal entries per row.
    pub fn offdiag_degrees(&self) -> Vec<usize> {
        (0..self.nrows)
            .map(|r| self.row(r).0.iter().filter(|&&c| c != r).count())
            .collect()
    }
}

impl<E: Clone> SparseMatrix<E> {
    pub fn transpose(&self) -> SparseMatrix<E> {
        let mut row_ptr = vec![0usize; self.ncols + 1];
        for &c in &self.cols {
            row_ptr[c + 1] += 1;
        }
        for i in 0..self.ncols {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut next = row_ptr.clone();
        let mut cols = vec![0usize; self.nnz()];
        let mut vals: Vec<E> = Vec::with_capacity(self.nnz());
        // SAFETY-free version: fill with placeholder clones by two passes.
        // Simpler: collect into Option slots.
        let mut slots: Vec<Option<E>> = vec![None; self.nnz()];
        for r in 0..self.nrows {
            let (rc, rv) = self.row(r);
            for (&c, v) in rc.iter().zip(rv) {
                let k = next[c];
                next[c] += 1;
                cols[k] = r;
                slots[k] = Some(v.clone());
            }
        }
        vals.extend(slots.into_iter().map(|s| s.expect("slot filled")));
        SparseMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            row_ptr,
            cols,
            vals,
        }
    }
}

impl SparseMatrix<f64> {
    /// Builds from triplets, summing duplicates. Entries whose final value is
    /// exactly zero are dropped.
    pub fn from_entries_sum(
        nrows: usize,
        ncols: usize,
        mut entries: Vec<(usize, usize, f64)>,
    ) -> Result<Self> {
        for &(r, c, _) in &entries {
            if r >= nrows || c >= ncols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    nrows,
                    ncols,
                });
            }
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != 0.0);
        SparseMatrix::from_entries(nrows, ncols, merged)
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n).map(|i| (i, i, 1.0)).collect();
        SparseMatrix::from_entries(n, n, entries).expect("identity entries are valid")
    }

    fn row_dot(&self, r: usize, x: &[f64]) -> f64 {
        let (cols, vals) = self.row(r);
        let mut acc = 0.0;
        for (&c, &v) in cols.iter().zip(vals) {
            acc += v * x[c];
        }
        acc
    }

    /// Matrix-vector product, sequential path.
    pub fn matvec_seq(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols, "matvec dimension mismatch");
        (0..self.nrows).map(|r| self.row_dot(r, x)).collect()
    }

    /// Matrix-vector product over the rayon pool. Each row is an independent
    /// task, so the result is bitwise identical to the sequential path.
    #[cfg(feature = "parallel")]
    pub fn matvec_par(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols, "matvec dimension mismatch");
        (0..self.nrows)
            .into_par_iter()
            .with_min_len(512)
            .map(|r| self.row_dot(r, x))
            .collect()
    }

    /// Matrix-vector product. Dispatches to the parallel kernel when the
    /// `parallel` feature is enabled and the matrix is large enough for the
    /// scheduling overhead to pay off.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        #[cfg(feature = "parallel")]
        if self.nrows >= PAR_MIN_ROWS {
            return self.matvec_par(x);
        }
        self.matvec_seq(x)
    }

    /// Transposed matrix-vector product `A^T x` without materializing the
    /// transpose. Sequential; used on transfer operators whose row counts are
    /// small compared to the solve kernels.
    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.nrows, "matvec_transpose dimension mismatch");
        let mut out = vec![0.0; self.ncols];
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                out[c] += v * x[r];
            }
        }
        out
    }

    fn spgemm_row(&self, other: &SparseMatrix<f64>, r: usize) -> Vec<(usize, f64)> {
        let mut acc: HashMap<usize, f64> = HashMap::new();
        let (cols, vals) = self.row(r);
        for (&k, &a) in cols.iter().zip(vals) {
            let (bc, bv) = other.row(k);
            for (&j, &b) in bc.iter().zip(bv) {
                *acc.entry(j).or_insert(0.0) += a * b;
            }
        }
        let mut row: Vec<(usize, f64)> = acc.into_iter().filter(|&(_, v)| v != 0.0).collect();
        row.sort_by_key(|&(j, _)| j);
        row
    }

    fn assemble_rows(nrows: usize, ncols: usize, rows: Vec<Vec<(usize, f64)>>) -> SparseMatrix<f64> {
        let mut row_ptr = vec![0usize; nrows + 1];
        for (r, row) in rows.iter().enumerate() {
            row_ptr[r + 1] = row_ptr[r] + row.len();
        }
        let nnz = row_ptr[nrows];
        let mut cols = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        for row in rows {
            for (j, v) in row {
                cols.push(j);
                vals.push(v);
            }
        }
        SparseMatrix {
            nrows,
            ncols,
            row_ptr,
            cols,
            vals,
        }
    }

    /// Sparse matrix-matrix product over standard `(+, *)` arithmetic,
    /// sequential path. Entries that come out exactly zero are dropped.
    pub fn spgemm_seq(&self, other: &SparseMatrix<f64>) -> Result<SparseMatrix<f64>> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "spgemm: {}x{} times {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let rows: Vec<Vec<(usize, f64)>> = (0..self.nrows)
            .map(|r| self.spgemm_row(other, r))
            .collect();
        Ok(Self::assemble_rows(self.nrows, other.ncols, rows))
    }

    /// Sparse matrix-matrix product, parallel over output rows.
    #[cfg(feature = "parallel")]
    pub fn spgemm_par(&self, other: &SparseMatrix<f64>) -> Result<SparseMatrix<f64>> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "spgemm: {}x{} times {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let rows: Vec<Vec<(usize, f64)>> = (0..self.nrows)
            .into_par_iter()
            .with_min_len(64)
            .map(|r| self.spgemm_row(other, r))
            .collect();
        Ok(Self::assemble_rows(self.nrows, other.ncols, rows))
    }

    /// Sparse matrix-matrix product; parallel when available and worthwhile.
    pub fn spgemm(&self, other: &SparseMatrix<f64>) -> Result<SparseMatrix<f64>> {
        #[cfg(feature = "parallel")]
        if self.nrows >= 1024 {
            return self.spgemm_par(other);
        }
        self.spgemm_seq(other)
    }

    /// Dense copy, row-major. Debugging and test-oracle helper.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for (r, c, &v) in self.entries() {
            d[r][c] = v;
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SparseMatrix<f64> {
        SparseMatrix::from_entries(2, 3, vec![(0, 0, 1.0), (0, 2, 2.0), (1, 1, -3.0)]).unwrap()
    }

    #[test]
    fn from_entries_sorts_and_indexes() {
        let m = SparseMatrix::from_entries(2, 2, vec![(1, 0, 5.0), (0, 1, 2.0)]).unwrap();
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(0, 1), Some(&2.0));
        assert_eq!(m.get(1, 0), Some(&5.0));
        assert_eq!(m.get(0, 0), None);
    }

    #[test]
    fn from_entries_rejects_duplicates_and_out_of_range() {
        let dup = SparseMatrix::from_entries(2, 2, vec![(0, 1, 1.0), (0, 1, 2.0)]);
        assert!(matches!(dup, Err(Error::DuplicateEntry { row: 0, col: 1 })));
        let oob = SparseMatrix::from_entries(2, 2, vec![(0, 2, 1.0)]);
        assert!(matches!(oob, Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn from_entries_sum_merges_and_drops_zeros() {
        let m = SparseMatrix::from_entries_sum(
            2,
            2,
            vec![(0, 1, 1.5), (0, 1, 0.5), (1, 0, 1.0), (1, 0, -1.0)],
        )
        .unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), Some(&2.0));
    }

    #[test]
    fn matvec_matches_dense() {
        let m = small();
        let x = [1.0, 2.0, 3.0];
        let y = m.matvec_seq(&x);
        assert_eq!(y, vec![1.0 * 1.0 + 2.0 * 3.0, -3.0 * 2.0]);
        assert_eq!(m.matvec(&x), y);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn matvec_par_matches_seq_exactly() {
        let mut entries = Vec::new();
        let n = 5000;
        for i in 0..n {
            entries.push((i, i, 2.0 + (i % 7) as f64));
            if i + 1 < n {
                entries.push((i, i + 1, -1.0));
                entries.push((i + 1, i, -1.0));
            }
        }
        let m = SparseMatrix::from_entries(n, n, entries).unwrap();
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        assert_eq!(m.matvec_seq(&x), m.matvec_par(&x));
    }

    #[test]
    fn transpose_is_involutive() {
        let m = small();
        let t = m.transpose();
        assert_eq!(t.nrows(), 3);
        assert_eq!(t.get(2, 0), Some(&2.0));
        assert_eq!(t.transpose(), m);
    }

    #[test]
    fn matvec_transpose_matches_explicit_transpose() {
        let m = small();
        let x = [1.0, -2.0];
        assert_eq!(m.matvec_transpose(&x), m.transpose().matvec_seq(&x));
    }

    #[test]
    fn spgemm_matches_dense_product() {
        let a = SparseMatrix::from_entries(2, 2, vec![(0, 0, 1.0), (0, 1, 2.0), (1, 1, 3.0)])
            .unwrap();
        let b = SparseMatrix::from_entries(2, 2, vec![(0, 0, -1.0), (1, 0, 4.0), (1, 1, 1.0)])
            .unwrap();
        let c = a.spgemm(&b).unwrap();
        let ad = a.to_dense();
        let bd = b.to_dense();
        let cd = c.to_dense();
        for i in 0..2 {
            for j in 0..2 {
                let want: f64 = (0..2).map(|k| ad[i][k] * bd[k][j]).sum();
                assert!((cd[i][j] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn spgemm_drops_exact_zeros() {
        // a*b has an exact cancellation at (0,0)
        let a = SparseMatrix::from_entries(1, 2, vec![(0, 0, 1.0), (0, 1, -1.0)]).unwrap();
        let b = SparseMatrix::from_entries(2, 1, vec![(0, 0, 3.0), (1, 0, 3.0)]).unwrap();
        let c = a.spgemm(&b).unwrap();
        assert_eq!(c.nnz(), 0);
    }

    #[test]
    fn offdiag_degrees_ignore_diagonal() {
        let m = SparseMatrix::from_entries(
            3,
            3,
            vec![(0, 0, 1.0), (0, 1, -1.0), (1, 1, 1.0), (2, 0, -1.0)],
        )
        .unwrap();
        assert_eq!(m.offdiag_degrees(), vec![1, 0, 1]);
    }
}
