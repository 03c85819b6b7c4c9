//! Low-degree elimination.
//!
//! Vertices of degree at most 4 can be removed exactly: ordering the chosen
//! set F first, the Laplacian factors as a block system whose F-block is
//! diagonal (F is independent), and the remaining vertices see the Schur
//! complement `L_CC - L_FC^T L_FF^{-1} L_FC`, itself a graph Laplacian.
//!
//! F is selected with one generalized product: every vertex proposes itself
//! when its degree qualifies, and each row keeps the candidate with the
//! smallest hash over its closed neighborhood. A vertex that wins its own
//! neighborhood joins F, which makes F independent by construction and
//! invariant under how the matrix is distributed. Hashing the (randomly
//! hashed) vertex id rather than comparing raw indices avoids biased picks on
//! structured orderings.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::laplacian::LaplacianMatrix;
use crate::rng::mix64;
use crate::sparse::dist::{spmv_semiring, DistMatrix};
use crate::sparse::semiring::Semiring;
use crate::sparse::{Permutation, SparseMatrix};

/// Hash of a vertex id: the SplitMix64 finalizer applied to
/// `id + 0x9E3779B97F4A7C15`. A bijection on `u64`, so distinct vertices
/// never collide. The empty candidate compares as `+infinity`, i.e. worse
/// than every real hash.
#[inline]
pub fn hash64(i: usize) -> u64 {
    mix64((i as u64).wrapping_add(0x9E3779B97F4A7C15))
}

/// Candidate payload carried through the selection product: a proposing
/// vertex id, or nothing.
pub type ElimCandidate = Option<usize>;

/// Keeps the candidate with the smaller `(hash, index)` key; `None` loses to
/// everything. Associative and commutative, so block layout cannot change
/// the winner.
struct MinHash<H> {
    hash: H,
}

impl<H: Fn(usize) -> u64> MinHash<H> {
    fn key(&self, c: &ElimCandidate) -> (u64, u64) {
        match c {
            Some(i) => ((self.hash)(*i), *i as u64),
            None => (u64::MAX, u64::MAX),
        }
    }
}

impl<H: Fn(usize) -> u64> Semiring for MinHash<H> {
    type MatrixElem = f64;
    type Input = ElimCandidate;
    type Output = ElimCandidate;

    fn combine(&self, _e: &f64, x: &ElimCandidate) -> ElimCandidate {
        *x
    }

    fn reduce(&self, a: ElimCandidate, b: ElimCandidate) -> ElimCandidate {
        if self.key(&a) <= self.key(&b) {
            a
        } else {
            b
        }
    }

    fn identity(&self) -> ElimCandidate {
        None
    }
}

/// Like [`select_elimination`] but with a caller-supplied vertex hash.
/// Exposed so experiments and tests can fix the outcome.
pub fn select_elimination_with_hash<H>(
    dist: &DistMatrix<f64>,
    max_degree: usize,
    hash: H,
) -> Result<Vec<usize>>
where
    H: Fn(usize) -> u64 + Sync,
{
    let degrees = dist.offdiag_degrees();
    let candidates: Vec<ElimCandidate> = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| (d <= max_degree).then_some(i))
        .collect();
    let sr = MinHash { hash };
    let z = spmv_semiring(dist, &candidates, &sr)?;
    Ok(z.iter()
        .enumerate()
        .filter_map(|(i, &zi)| (zi == Some(i)).then_some(i))
        .collect())
}

/// Selects an independent set of vertices with degree at most `max_degree`,
/// sorted ascending. The Laplacian's stored diagonal puts every vertex in its
/// own closed neighborhood, so a vertex joins exactly when it carries the
/// smallest hash among itself and all qualifying neighbors.
pub fn select_elimination(dist: &DistMatrix<f64>, max_degree: usize) -> Result<Vec<usize>> {
    select_elimination_with_hash(dist, max_degree, hash64)
}

/// One level of exact elimination: the fine-to-coarse map and the Schur
/// complement.
#[derive(Debug, Clone)]
pub struct EliminationLevel {
    /// Eliminated vertices, ascending.
    pub f: Vec<usize>,
    /// Kept vertices, ascending.
    pub c: Vec<usize>,
    /// Vertex permutation placing F first (logical id to position).
    pub perm: Permutation,
    /// Inverse of the diagonal F-block, indexed like `f`.
    pub dinv_ff: Vec<f64>,
    /// Coupling block `L_FC`, `|F| x |C|`.
    pub l_fc: SparseMatrix<f64>,
    /// Prolongation `[ -L_FF^{-1} L_FC ; I ]` in original vertex order,
    /// `n x |C|`.
    pub p: SparseMatrix<f64>,
    /// Schur complement `L_CC - L_FC^T L_FF^{-1} L_FC`.
    pub l_next: LaplacianMatrix,
}

/// Builds the elimination level for an independent set `f` (any order;
/// duplicates rejected by the permutation check). The Schur complement is
/// accumulated directly on the F/C blocks: each eliminated vertex touches at
/// most `max_degree^2` coarse pairs. Its diagonal is set to the negated
/// off-diagonal row sums, which the exact result equals.
pub fn build_elimination_level(l: &LaplacianMatrix, f: &[usize]) -> Result<EliminationLevel> {
    let n = l.nrows();
    let mut in_f = vec![false; n];
    for &v in f {
        if v >= n {
            return Err(Error::IndexOutOfRange {
                row: v,
                col: v,
                nrows: n,
                ncols: n,
            });
        }
        in_f[v] = true;
    }
    let mut f_sorted: Vec<usize> = f.to_vec();
    f_sorted.sort_unstable();
    f_sorted.dedup();
    if f_sorted.len() != f.len() {
        return Err(Error::InvalidParameter("elimination set has duplicates".into()));
    }
    let c_sorted: Vec<usize> = (0..n).filter(|&v| !in_f[v]).collect();

    // position of each vertex within its side
    let mut side_index = vec![0usize; n];
    for (k, &v) in f_sorted.iter().enumerate() {
        side_index[v] = k;
    }
    for (k, &v) in c_sorted.iter().enumerate() {
        side_index[v] = k;
    }
    let nf = f_sorted.len();
    let nc = c_sorted.len();

    let mut forward = vec![0usize; n];
    for (k, &v) in f_sorted.iter().enumerate() {
        forward[v] = k;
    }
    for (k, &v) in c_sorted.iter().enumerate() {
        forward[v] = nf + k;
    }
    let perm = Permutation::from_forward(forward)?;

    let mut dinv_ff = vec![0.0; nf];
    let mut fc_entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut schur: HashMap<(usize, usize), f64> = HashMap::new();

    for (fi, &v) in f_sorted.iter().enumerate() {
        let (cols, vals) = l.row(v);
        let mut d = 0.0;
        for (&j, &w) in cols.iter().zip(vals) {
            if j == v {
                d = w;
            } else if in_f[j] {
                return Err(Error::DependentEliminationSet { u: v, v: j });
            } else {
                fc_entries.push((fi, side_index[j], w));
            }
        }
        if d == 0.0 {
            return Err(Error::ZeroDiagonal(v));
        }
        dinv_ff[fi] = 1.0 / d;
    }

    // L_CC off-diagonals
    for &v in &c_sorted {
        let (cols, vals) = l.row(v);
        for (&j, &w) in cols.iter().zip(vals) {
            if j != v && !in_f[j] {
                *schur.entry((side_index[v], side_index[j])).or_insert(0.0) += w;
            }
        }
    }
    // fill-in from each eliminated vertex
    for (fi, &v) in f_sorted.iter().enumerate() {
        let (cols, vals) = l.row(v);
        let nbrs: Vec<(usize, f64)> = cols
            .iter()
            .zip(vals)
            .filter(|&(&j, _)| j != v)
            .map(|(&j, &w)| (side_index[j], w))
            .collect();
        let dinv = dinv_ff[fi];
        for &(ca, wa) in &nbrs {
            for &(cb, wb) in &nbrs {
                if ca != cb {
                    *schur.entry((ca, cb)).or_insert(0.0) -= wa * wb * dinv;
                }
            }
        }
    }
    // sort before the row-sum pass so the diagonal is accumulated in a fixed
    // order regardless of hash-map iteration
    let mut offdiag: Vec<(usize, usize, f64)> = schur
        .into_iter()
        .filter(|&(_, w)| w != 0.0)
        .map(|((a, b), w)| (a, b, w))
        .collect();
    offdiag.sort_unstable_by_key(|&(a, b, _)| (a, b));
    let mut rowsum = vec![0.0f64; nc];
    let mut next_entries: Vec<(usize, usize, f64)> = Vec::with_capacity(offdiag.len() + nc);
    for &(a, b, w) in &offdiag {
        debug_assert_ne!(a, b);
        next_entries.push((a, b, w));
        rowsum[a] += w;
    }
    for (a, &s) in rowsum.iter().enumerate() {
        if s != 0.0 {
            next_entries.push((a, a, -s));
        }
    }
    let l_next = LaplacianMatrix::new(SparseMatrix::from_entries(nc, nc, next_entries)?)?;

    let mut p_entries: Vec<(usize, usize, f64)> = Vec::with_capacity(fc_entries.len() + nc);
    for &(fi, ci, w) in &fc_entries {
        p_entries.push((f_sorted[fi], ci, -dinv_ff[fi] * w));
    }
    for (ci, &v) in c_sorted.iter().enumerate() {
        p_entries.push((v, ci, 1.0));
    }
    let p = SparseMatrix::from_entries(n, nc, p_entries)?;
    let l_fc = SparseMatrix::from_entries(nf, nc, fc_entries)?;

    Ok(EliminationLevel {
        f: f_sorted,
        c: c_sorted,
        perm,
        dinv_ff,
        l_fc,
        p,
        l_next,
    })
}

/// Restricts a right-hand side to the kept vertices: `b_next = P^T b`.
pub fn elim_restrict(level: &EliminationLevel, b: &[f64]) -> Vec<f64> {
    level.p.matvec_transpose(b)
}

/// Prolongs a coarse solution and recovers the eliminated vertices exactly:
/// `x_C = x_next`, `x_F = L_FF^{-1} (b_F - L_FC x_next)`.
pub fn elim_prolong(level: &EliminationLevel, x_next: &[f64], b: &[f64]) -> Vec<f64> {
    let mut x = level.p.matvec(x_next);
    for (fi, &v) in level.f.iter().enumerate() {
        x[v] += level.dinv_ff[fi] * b[v];
    }
    x
}
