//! Weighted undirected graphs and their Laplacian matrices.
//!
//! The Laplacian of a graph with adjacency `A` and degree matrix `D` is
//! `L = D - A`: positive diagonal (weighted degrees), nonpositive
//! off-diagonals (negated edge weights), and zero row and column sums. The
//! constant vector spans its kernel exactly when the graph is connected,
//! which is what the solver assumes throughout.

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// One undirected edge with a positive weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Weighted undirected graph. Each edge is stored once with `u < v`;
/// duplicates passed to the constructor are merged by summing weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut canon: Vec<(usize, usize, f64)> = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::IndexOutOfRange {
                    row: u,
                    col: v,
                    nrows: n,
                    ncols: n,
                });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !(w > 0.0) {
                return Err(Error::NonpositiveWeight { u, v, w });
            }
            canon.push((u.min(v), u.max(v), w));
        }
        canon.sort_by_key(|&(u, v, _)| (u, v));
        let mut edges: Vec<Edge> = Vec::with_capacity(canon.len());
        for (u, v, w) in canon {
            match edges.last_mut() {
                Some(last) if last.u == u && last.v == v => last.w += w,
                _ => edges.push(Edge { u, v, w }),
            }
        }
        Ok(Graph { n, edges })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        adj
    }

    /// Vertex sets of the connected components, each sorted ascending. The
    /// list is ordered by smallest contained vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency_lists();
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Subgraph induced by the largest connected component, vertices
    /// renumbered in ascending order of their original ids. Ties between
    /// equally sized components go to the one containing the smallest vertex.
    pub fn largest_component(&self) -> Graph {
        let comps = self.components();
        let Some(comp) = comps.iter().max_by_key(|c| (c.len(), std::cmp::Reverse(c[0]))) else {
            return Graph { n: 0, edges: Vec::new() };
        };
        let mut newid = vec![usize::MAX; self.n];
        for (k, &v) in comp.iter().enumerate() {
            newid[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| newid[e.u] != usize::MAX && newid[e.v] != usize::MAX)
            .map(|e| (newid[e.u], newid[e.v], e.w))
            .collect();
        Graph::new(comp.len(), edges).expect("component edges stay valid")
    }
}

/// One way a matrix fails to be a graph Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NotSquare { nrows: usize, ncols: usize },
    RowSum { row: usize, sum: f64 },
    NegativeDiagonal { row: usize, value: f64 },
    PositiveOffDiagonal { row: usize, col: usize, value: f64 },
    Asymmetric { row: usize, col: usize, diff: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotSquare { nrows, ncols } => write!(f, "matrix is {nrows}x{ncols}"),
            Violation::RowSum { row, sum } => write!(f, "row {row} sums to {sum:e}"),
            Violation::NegativeDiagonal { row, value } => {
                write!(f, "diagonal entry ({row}, {row}) = {value:e} is negative")
            }
            Violation::PositiveOffDiagonal { row, col, value } => {
                write!(f, "off-diagonal entry ({row}, {col}) = {value:e} is positive")
            }
            Violation::Asymmetric { row, col, diff } => {
                write!(f, "entries ({row}, {col}) and ({col}, {row}) differ by {diff:e}")
            }
        }
    }
}

/// Checks the Laplacian invariants: square, symmetric, nonpositive
/// off-diagonals, nonnegative diagonal, zero row sums. All numeric checks use
/// the tolerance `1e-12 * max diagonal entry`; column sums follow from row
/// sums plus symmetry and are not checked separately.
pub fn validate_laplacian(a: &SparseMatrix<f64>) -> Vec<Violation> {
    let mut out = Vec::new();
    if !a.is_square() {
        out.push(Violation::NotSquare {
            nrows: a.nrows(),
            ncols: a.ncols(),
        });
        return out;
    }
    let maxdiag = (0..a.nrows())
        .filter_map(|i| a.get(i, i).copied())
        .fold(0.0f64, f64::max);
    let tol = 1e-12 * maxdiag;
    for r in 0..a.nrows() {
        let (cols, vals) = a.row(r);
        let mut sum = 0.0;
        for (&c, &v) in cols.iter().zip(vals) {
            sum += v;
            if c == r {
                if v < -tol {
                    out.push(Violation::NegativeDiagonal { row: r, value: v });
                }
            } else {
                if v > tol {
                    out.push(Violation::PositiveOffDiagonal {
                        row: r,
                        col: c,
                        value: v,
                    });
                }
                if c > r {
                    let mirror = a.get(c, r).copied().unwrap_or(0.0);
                    let diff = (v - mirror).abs();
                    if diff > tol {
                        out.push(Violation::Asymmetric {
                            row: r,
                            col: c,
                            diff,
                        });
                    }
                } else if a.get(c, r).is_none() && v.abs() > tol {
                    out.push(Violation::Asymmetric {
                        row: r,
                        col: c,
                        diff: v.abs(),
                    });
                }
            }
        }
        if sum.abs() > tol {
            out.push(Violation::RowSum { row: r, sum });
        }
    }
    out
}

/// Graph Laplacian. Wraps a sparse matrix that passed [`validate_laplacian`].
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    matrix: SparseMatrix<f64>,
}

impl LaplacianMatrix {
    /// Validates and wraps a matrix.
    pub fn new(matrix: SparseMatrix<f64>) -> Result<Self> {
        let violations = validate_laplacian(&matrix);
        if violations.is_empty() {
            Ok(LaplacianMatrix { matrix })
        } else {
            Err(Error::InvalidLaplacian(violations))
        }
    }

    pub fn matrix(&self) -> &SparseMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> SparseMatrix<f64> {
        self.matrix
    }

    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }

    /// Diagonal as a dense vector.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows())
            .map(|i| self.matrix.get(i, i).copied().unwrap_or(0.0))
            .collect()
    }
}

impl std::ops::Deref for LaplacianMatrix {
    type Target = SparseMatrix<f64>;

    fn deref(&self) -> &SparseMatrix<f64> {
        &self.matrix
    }
}

/// Builds `L = D - A`. Vertices with no incident edges get an empty row.
pub fn laplacian_from_graph(g: &Graph) -> LaplacianMatrix {
    let n = g.num_vertices();
    let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(g.num_edges() * 2 + n);
    let mut degree = vec![0.0f64; n];
    for e in g.edges() {
        entries.push((e.u, e.v, -e.w));
        entries.push((e.v, e.u, -e.w));
        degree[e.u] += e.w;
        degree[e.v] += e.w;
    }
    for (i, &d) in degree.iter().enumerate() {
        if d != 0.0 {
            entries.push((i, i, d));
        }
    }
    let matrix =
        SparseMatrix::from_entries(n, n, entries).expect("graph invariants produce valid entries");
    debug_assert!(validate_laplacian(&matrix).is_empty());
    LaplacianMatrix { matrix }
}

/// True when the matrix's off-diagonal pattern forms one connected component.
/// Implemented as frontier expansion from vertex 0 (each step is equivalent
/// to one `(or, and)` pattern product; see [`crate::sparse::semiring::OrPattern`]).
pub fn is_connected(a: &SparseMatrix<f64>) -> bool {
    let n = a.nrows();
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        let (cols, _) = a.row(u);
        for &v in cols {
            if v != u && !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == n
}
