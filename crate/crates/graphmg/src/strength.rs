//! Strength of connection from smoothed test vectors.
//!
//! A handful of random vectors relaxed on `Lx = 0` reveal which neighbors
//! vary together: after a few damped Jacobi sweeps the vectors are locally
//! smooth, so strongly coupled vertices carry similar values. The affinity of
//! an edge measures the correlation of the two endpoint rows, and the
//! normalized strength rescales each affinity by the strongest affinity
//! incident to either endpoint.

use crate::error::{Error, Result};
use crate::laplacian::LaplacianMatrix;
use crate::rng::SplitMix64;
use crate::sparse::SparseMatrix;

/// Dense `n x m` block of test vectors, row-major (row = vertex).
#[derive(Debug, Clone)]
pub struct TestVectors {
    n: usize,
    m: usize,
    data: Vec<f64>,
}

impl TestVectors {
    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_vectors(&self) -> usize {
        self.m
    }

    /// Values of all vectors at vertex `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.m..(i + 1) * self.m]
    }

    /// Copy of vector `k`.
    pub fn column(&self, k: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.data[i * self.m + k]).collect()
    }

    fn set_column(&mut self, k: usize, col: &[f64]) {
        for i in 0..self.n {
            self.data[i * self.m + k] = col[i];
        }
    }
}

/// One damped Jacobi sweep on `Lx = 0`: `x <- x - omega * Dinv * (L x)`.
fn jacobi_sweep(l: &SparseMatrix<f64>, dinv: &[f64], omega: f64, x: &mut [f64]) {
    let lx = l.matvec(x);
    for ((xi, di), lxi) in x.iter_mut().zip(dinv).zip(&lx) {
        *xi -= omega * di * lxi;
    }
}

/// Draws `m` uniform `(-1, 1)` vectors and relaxes each with `sweeps` damped
/// Jacobi sweeps on `Lx = 0`. A column that comes out identically zero is
/// redrawn from the continuing random stream; vertices with a zero diagonal
/// are rejected up front.
pub fn test_vectors(
    l: &LaplacianMatrix,
    m: usize,
    sweeps: usize,
    omega: f64,
    seed: u64,
) -> Result<TestVectors> {
    let n = l.nrows();
    if m == 0 {
        return Err(Error::InvalidParameter("need at least one test vector".into()));
    }
    let diag = l.diagonal();
    let mut dinv = vec![0.0; n];
    for (i, &d) in diag.iter().enumerate() {
        if d == 0.0 {
            return Err(Error::ZeroDiagonal(i));
        }
        dinv[i] = 1.0 / d;
    }
    let mut rng = SplitMix64::new(seed);
    let mut tv = TestVectors {
        n,
        m,
        data: vec![0.0; n * m],
    };
    for k in 0..m {
        let mut attempts = 0;
        loop {
            let mut col: Vec<f64> = (0..n).map(|_| rng.next_uniform()).collect();
            for _ in 0..sweeps {
                jacobi_sweep(l.matrix(), &dinv, omega, &mut col);
            }
            if col.iter().any(|&v| v != 0.0) {
                tv.set_column(k, &col);
                break;
            }
            attempts += 1;
            if attempts > 8 {
                return Err(Error::DegenerateTestVectors(k));
            }
        }
    }
    Ok(tv)
}

/// Affinity of every adjacent pair: `C_ij = (x_i . x_j)^2 / (|x_i|^2 |x_j|^2)`
/// over the off-diagonal pattern of `l`. Values lie in `[0, 1]`; exact zeros
/// (orthogonal rows) are kept as pattern entries. A vertex whose test-vector
/// row is identically zero is an error.
pub fn affinity(l: &LaplacianMatrix, x: &TestVectors) -> Result<SparseMatrix<f64>> {
    let n = l.nrows();
    if x.num_vertices() != n {
        return Err(Error::DimensionMismatch(format!(
            "affinity: {} test-vector rows against {} vertices",
            x.num_vertices(),
            n
        )));
    }
    let norms: Vec<f64> = (0..n)
        .map(|i| x.row(i).iter().map(|v| v * v).sum::<f64>())
        .collect();
    let mut entries = Vec::with_capacity(l.nnz());
    for (i, j, _) in l.entries() {
        if i == j {
            continue;
        }
        if norms[i] == 0.0 {
            return Err(Error::DegenerateTestVectors(i));
        }
        if norms[j] == 0.0 {
            return Err(Error::DegenerateTestVectors(j));
        }
        let dot: f64 = x.row(i).iter().zip(x.row(j)).map(|(a, b)| a * b).sum();
        entries.push((i, j, dot * dot / (norms[i] * norms[j])));
    }
    SparseMatrix::from_entries(n, n, entries)
}

/// Rescales affinities to strengths: `S_ij = C_ij / max(rowmax_i, rowmax_j)`
/// where `rowmax_i` is the largest affinity in row `i`. Every surviving entry
/// lies in `(0, 1]` and the globally strongest affinity maps to exactly 1.
/// Zero affinities drop out.
pub fn normalize_strength(c: &SparseMatrix<f64>) -> Result<SparseMatrix<f64>> {
    let n = c.nrows();
    let mut rowmax = vec![0.0f64; n];
    for (i, _, &v) in c.entries() {
        rowmax[i] = rowmax[i].max(v);
    }
    let mut entries = Vec::with_capacity(c.nnz());
    for (i, j, &v) in c.entries() {
        let denom = rowmax[i].max(rowmax[j]);
        if v > 0.0 && denom > 0.0 {
            entries.push((i, j, v / denom));
        }
    }
    SparseMatrix::from_entries(n, n, entries)
}
