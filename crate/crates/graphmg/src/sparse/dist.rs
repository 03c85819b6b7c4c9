//! Two-dimensional block distribution of a sparse matrix.
//!
//! A [`DistMatrix`] models the edge layout of a process grid inside one
//! address space: entries are assigned to an `R x C` grid of blocks by their
//! coordinates under a vertex permutation, with each dimension split as
//! evenly as possible (remainder going to the earlier blocks). Vectors stay
//! plain global arrays indexed by logical vertex id; the permutation is a
//! storage layout only and never changes what a product computes.
//!
//! [`spmv_semiring`] runs a generalized product over the blocks. Because the
//! reduction is commutative (see [`super::semiring::Semiring`]), the result
//! is independent of the grid shape and of the permutation: exactly so for
//! discrete selection payloads, up to roundoff reassociation for
//! floating-point accumulation.

use crate::error::{Error, Result};
use crate::sparse::matrix::SparseMatrix;
use crate::sparse::perm::Permutation;
use crate::sparse::semiring::Semiring;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Grid shape plus the vertex permutation that scatters entries over it.
#[derive(Debug, Clone)]
pub struct BlockLayout {
    pub grid_rows: usize,
    pub grid_cols: usize,
    pub perm: Permutation,
}

impl BlockLayout {
    pub fn identity(grid_rows: usize, grid_cols: usize, n: usize) -> Self {
        BlockLayout {
            grid_rows,
            grid_cols,
            perm: Permutation::identity(n),
        }
    }

    pub fn partition<E: Clone>(&self, a: &SparseMatrix<E>) -> Result<DistMatrix<E>> {
        block_partition(a, self.grid_rows, self.grid_cols, self.perm.clone())
    }
}

/// Boundaries of an as-even-as-possible split of `0..n` into `parts` ranges,
/// sizes differing by at most one with larger ranges first.
fn split_offsets(n: usize, parts: usize) -> Vec<usize> {
    let base = n / parts;
    let rem = n % parts;
    let mut offs = Vec::with_capacity(parts + 1);
    let mut at = 0;
    offs.push(0);
    for i in 0..parts {
        at += base + usize::from(i < rem);
        offs.push(at);
    }
    offs
}

fn block_of(offsets: &[usize], p: usize) -> usize {
    offsets.partition_point(|&o| o <= p) - 1
}

/// Sparse matrix scattered over a block grid. Built by [`block_partition`].
#[derive(Debug, Clone)]
pub struct DistMatrix<E> {
    nrows: usize,
    ncols: usize,
    grid_rows: usize,
    grid_cols: usize,
    row_offsets: Vec<usize>,
    col_offsets: Vec<usize>,
    perm: Permutation,
    /// Row-major `grid_rows * grid_cols` blocks in local coordinates.
    blocks: Vec<SparseMatrix<E>>,
}

impl<E> DistMatrix<E> {
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn grid(&self) -> (usize, usize) {
        (self.grid_rows, self.grid_cols)
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn block(&self, bi: usize, bj: usize) -> &SparseMatrix<E> {
        &self.blocks[bi * self.grid_cols + bj]
    }

    pub fn nnz(&self) -> usize {
        self.blocks.iter().map(|b| b.nnz()).sum()
    }

    /// Iterates entries in logical coordinates, block by block.
    pub fn logical_entries(&self) -> impl Iterator<Item = (usize, usize, &E)> {
        (0..self.grid_rows).flat_map(move |bi| {
            (0..self.grid_cols).flat_map(move |bj| {
                let b = self.block(bi, bj);
                let roff = self.row_offsets[bi];
                let coff = self.col_offsets[bj];
                b.entries().map(move |(r, c, v)| {
                    (self.perm.inverse(roff + r), self.perm.inverse(coff + c), v)
                })
            })
        })
    }

    /// Off-diagonal entry count per logical row.
    pub fn offdiag_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.nrows];
        for (i, j, _) in self.logical_entries() {
            if i != j {
                deg[i] += 1;
            }
        }
        deg
    }
}

impl<E: Clone> DistMatrix<E> {
    /// Rebuilds the logical matrix from the blocks.
    pub fn reassemble(&self) -> SparseMatrix<E> {
        let entries: Vec<(usize, usize, E)> = self
            .logical_entries()
            .map(|(i, j, v)| (i, j, v.clone()))
            .collect();
        SparseMatrix::from_entries(self.nrows, self.ncols, entries)
            .expect("partition preserves coordinates")
    }
}

/// Scatters `a` over a `grid_rows x grid_cols` block grid. The permutation is
/// applied to rows and columns alike, so it must have length `a.nrows()` and
/// the matrix must be square unless the permutation is trivial for both
/// dimensions.
pub fn block_partition<E: Clone>(
    a: &SparseMatrix<E>,
    grid_rows: usize,
    grid_cols: usize,
    perm: Permutation,
) -> Result<DistMatrix<E>> {
    if grid_rows == 0 || grid_cols == 0 {
        return Err(Error::InvalidParameter(
            "block grid dimensions must be at least 1".into(),
        ));
    }
    if !a.is_square() || perm.len() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "block_partition: permutation of length {} on a {}x{} matrix",
            perm.len(),
            a.nrows(),
            a.ncols()
        )));
    }
    let row_offsets = split_offsets(a.nrows(), grid_rows);
    let col_offsets = split_offsets(a.ncols(), grid_cols);
    let mut per_block: Vec<Vec<(usize, usize, E)>> = vec![Vec::new(); grid_rows * grid_cols];
    for (i, j, v) in a.entries() {
        let pi = perm.forward(i);
        let pj = perm.forward(j);
        let bi = block_of(&row_offsets, pi);
        let bj = block_of(&col_offsets, pj);
        per_block[bi * grid_cols + bj].push((pi - row_offsets[bi], pj - col_offsets[bj], v.clone()));
    }
    let mut blocks = Vec::with_capacity(per_block.len());
    for (k, entries) in per_block.into_iter().enumerate() {
        let bi = k / grid_cols;
        let bj = k % grid_cols;
        let br = row_offsets[bi + 1] - row_offsets[bi];
        let bc = col_offsets[bj + 1] - col_offsets[bj];
        blocks.push(SparseMatrix::from_entries(br, bc, entries)?);
    }
    Ok(DistMatrix {
        nrows: a.nrows(),
        ncols: a.ncols(),
        grid_rows,
        grid_cols,
        row_offsets,
        col_offsets,
        perm,
        blocks,
    })
}

fn spmv_block_row<SR, E>(
    a: &DistMatrix<E>,
    sr: &SR,
    vperm: &[SR::Input],
    bi: usize,
) -> Vec<SR::Output>
where
    SR: Semiring<MatrixElem = E>,
{
    let rows = a.row_offsets[bi + 1] - a.row_offsets[bi];
    let mut out: Vec<SR::Output> = (0..rows).map(|_| sr.identity()).collect();
    for bj in 0..a.grid_cols {
        let block = a.block(bi, bj);
        let coff = a.col_offsets[bj];
        for r in 0..block.nrows() {
            let (cols, vals) = block.row(r);
            for (&c, e) in cols.iter().zip(vals) {
                let contrib = sr.combine(e, &vperm[coff + c]);
                let prev = std::mem::replace(&mut out[r], sr.identity());
                out[r] = sr.reduce(prev, contrib);
            }
        }
    }
    out
}

fn spmv_finish<E, T: Clone>(a: &DistMatrix<E>, partials: Vec<Vec<T>>) -> Vec<T> {
    let mut permuted: Vec<T> = Vec::with_capacity(a.nrows);
    for p in partials {
        permuted.extend(p);
    }
    (0..a.nrows)
        .map(|i| permuted[a.perm.forward(i)].clone())
        .collect()
}

fn permute_input<E, T: Clone>(a: &DistMatrix<E>, v: &[T]) -> Vec<T> {
    let mut vperm: Vec<T> = Vec::with_capacity(v.len());
    for p in 0..v.len() {
        vperm.push(v[a.perm.inverse(p)].clone());
    }
    vperm
}

/// Generalized matrix-vector product over the block distribution, sequential
/// path. Rows with no stored entries yield `sr.identity()`.
pub fn spmv_semiring_seq<SR, E>(a: &DistMatrix<E>, v: &[SR::Input], sr: &SR) -> Result<Vec<SR::Output>>
where
    SR: Semiring<MatrixElem = E>,
    SR::Input: Clone,
{
    if v.len() != a.ncols {
        return Err(Error::DimensionMismatch(format!(
            "spmv_semiring: vector of length {} against {} columns",
            v.len(),
            a.ncols
        )));
    }
    let vperm = permute_input(a, v);
    let partials: Vec<Vec<SR::Output>> = (0..a.grid_rows)
        .map(|bi| spmv_block_row(a, sr, &vperm, bi))
        .collect();
    Ok(spmv_finish(a, partials))
}

/// Generalized matrix-vector product, parallel across block rows. Identical
/// output to the sequential path: every output element folds the same
/// contributions in the same order.
#[cfg(feature = "parallel")]
pub fn spmv_semiring_par<SR, E>(a: &DistMatrix<E>, v: &[SR::Input], sr: &SR) -> Result<Vec<SR::Output>>
where
    SR: Semiring<MatrixElem = E> + Sync,
    SR::Input: Clone + Sync,
    SR::Output: Send,
    E: Sync,
{
    if v.len() != a.ncols {
        return Err(Error::DimensionMismatch(format!(
            "spmv_semiring: vector of length {} against {} columns",
            v.len(),
            a.ncols
        )));
    }
    let vperm = permute_input(a, v);
    let partials: Vec<Vec<SR::Output>> = (0..a.grid_rows)
        .into_par_iter()
        .map(|bi| spmv_block_row(a, sr, &vperm, bi))
        .collect();
    Ok(spmv_finish(a, partials))
}

/// Generalized matrix-vector product; dispatches to the parallel kernel when
/// the layout actually has parallelism to offer.
pub fn spmv_semiring<SR, E>(a: &DistMatrix<E>, v: &[SR::Input], sr: &SR) -> Result<Vec<SR::Output>>
where
    SR: Semiring<MatrixElem = E> + Sync,
    SR::Input: Clone + Sync,
    SR::Output: Send,
    E: Sync,
{
    #[cfg(feature = "parallel")]
    if a.grid_rows > 1 && a.nrows >= 2048 {
        return spmv_semiring_par(a, v, sr);
    }
    spmv_semiring_seq(a, v, sr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::perm::random_permutation;
    use crate::sparse::semiring::{MinPlus, PlusTimes};

    fn p3() -> SparseMatrix<f64> {
        SparseMatrix::from_entries(
            3,
            3,
            vec![
                (0, 0, 1.0),
                (0, 1, -1.0),
                (1, 0, -1.0),
                (1, 1, 2.0),
                (1, 2, -1.0),
                (2, 1, -1.0),
                (2, 2, 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn split_puts_remainder_first() {
        assert_eq!(split_offsets(3, 2), vec![0, 2, 3]);
        assert_eq!(split_offsets(10, 4), vec![0, 3, 6, 8, 10]);
        assert_eq!(split_offsets(2, 4), vec![0, 1, 2, 2, 2]);
    }

    #[test]
    fn p3_block_shapes_on_2x2_identity() {
        let d = block_partition(&p3(), 2, 2, Permutation::identity(3)).unwrap();
        assert_eq!(
            (d.block(0, 0).nrows(), d.block(0, 0).ncols()),
            (2, 2)
        );
        assert_eq!(
            (d.block(0, 1).nrows(), d.block(0, 1).ncols()),
            (2, 1)
        );
        assert_eq!(
            (d.block(1, 0).nrows(), d.block(1, 0).ncols()),
            (1, 2)
        );
        assert_eq!(
            (d.block(1, 1).nrows(), d.block(1, 1).ncols()),
            (1, 1)
        );
        assert_eq!(d.nnz(), 7);
    }

    #[test]
    fn reassembly_reproduces_the_matrix() {
        let a = p3();
        for (gr, gc) in [(1, 1), (2, 2), (3, 2), (1, 4)] {
            for seed in [1u64, 2, 3] {
                let d = block_partition(&a, gr, gc, random_permutation(3, seed)).unwrap();
                assert_eq!(d.reassemble(), a);
            }
        }
    }

    #[test]
    fn one_by_one_identity_holds_whole_matrix() {
        let a = p3();
        let d = block_partition(&a, 1, 1, Permutation::identity(3)).unwrap();
        assert_eq!(d.block(0, 0), &a);
    }

    #[test]
    fn plus_times_matches_plain_matvec() {
        let a = p3();
        let x = vec![1.0, 2.0, 3.0];
        let want = a.matvec_seq(&x);
        for (gr, gc) in [(1, 1), (2, 2), (3, 2)] {
            let d = block_partition(&a, gr, gc, random_permutation(3, 17)).unwrap();
            let got = spmv_semiring(&d, &x, &PlusTimes).unwrap();
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() <= 1e-13 * w.abs().max(1.0));
            }
        }
    }

    #[test]
    fn min_plus_relaxes_one_hop() {
        // single edge 0-1 with weight 5; distances from vertex 1
        let a = SparseMatrix::from_entries(2, 2, vec![(0, 1, 5.0), (1, 0, 5.0)]).unwrap();
        let d = block_partition(&a, 1, 1, Permutation::identity(2)).unwrap();
        let v = vec![0.0, f64::INFINITY];
        let out = spmv_semiring(&d, &v, &MinPlus).unwrap();
        assert_eq!(out, vec![f64::INFINITY, 5.0]);
    }

    #[test]
    fn min_plus_is_exact_across_grids() {
        // weighted cycle plus chords
        let n = 12;
        let mut entries = Vec::new();
        for i in 0..n {
            let j = (i + 1) % n;
            entries.push((i, j, 1.0 + i as f64));
            entries.push((j, i, 1.0 + i as f64));
        }
        entries.push((0, 6, 0.5));
        entries.push((6, 0, 0.5));
        let a = SparseMatrix::from_entries_sum(n, n, entries).unwrap();
        let v: Vec<f64> = (0..n).map(|i| if i == 0 { 0.0 } else { f64::INFINITY }).collect();
        let base = {
            let d = block_partition(&a, 1, 1, Permutation::identity(n)).unwrap();
            spmv_semiring(&d, &v, &MinPlus).unwrap()
        };
        for (gr, gc) in [(1, 4), (2, 2), (3, 2)] {
            let d = block_partition(&a, gr, gc, random_permutation(n, 23)).unwrap();
            assert_eq!(spmv_semiring(&d, &v, &MinPlus).unwrap(), base);
        }
    }

    #[test]
    fn empty_rows_yield_identity() {
        let a = SparseMatrix::from_entries(3, 3, vec![(0, 1, 2.0), (1, 0, 2.0)]).unwrap();
        let d = block_partition(&a, 2, 2, Permutation::identity(3)).unwrap();
        let out = spmv_semiring(&d, &[1.0, 1.0, 1.0], &MinPlus).unwrap();
        assert_eq!(out[2], f64::INFINITY);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_path_matches_sequential() {
        let n = 60;
        let mut entries = Vec::new();
        for i in 0..n - 1 {
            entries.push((i, i + 1, -1.0));
            entries.push((i + 1, i, -1.0));
            entries.push((i, i, 2.0));
        }
        entries.push((n - 1, n - 1, 1.0));
        let a = SparseMatrix::from_entries_sum(n, n, entries).unwrap();
        let d = block_partition(&a, 3, 2, random_permutation(n, 4)).unwrap();
        let x: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
        let s = spmv_semiring_seq(&d, &x, &PlusTimes).unwrap();
        let p = spmv_semiring_par(&d, &x, &PlusTimes).unwrap();
        assert_eq!(s, p);
    }

    #[test]
    fn partition_rejects_bad_grids() {
        assert!(block_partition(&p3(), 0, 1, Permutation::identity(3)).is_err());
        assert!(block_partition(&p3(), 1, 1, Permutation::identity(2)).is_err());
    }
}
