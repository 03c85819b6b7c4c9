//! Algebraic multigrid for weighted graph Laplacians.
//!
//! The solver coarsens a Laplacian with two interleaved mechanisms — exact
//! elimination of low-degree vertices and unsmoothed aggregation driven by
//! smoothed test vectors — and wraps the resulting hierarchy in a Krylov
//! iteration (CG with a V-cycle preconditioner, or a recursively
//! accelerated K-cycle). Both coarsening decisions are phrased as sparse
//! matrix-vector products over pluggable semirings, evaluated on a 2D block
//! edge distribution, so the outcome is independent of how the matrix is
//! laid out across blocks.
//!
//! ```
//! use graphmg::{generate, laplacian_from_graph, solve, SolverParams};
//!
//! let g = generate::grid2d(16, 16).unwrap();
//! let l = laplacian_from_graph(&g);
//! let b: Vec<f64> = (0..l.nrows())
//!     .map(|i| if i == 0 { 1.0 } else if i == 255 { -1.0 } else { 0.0 })
//!     .collect();
//! let (x, report) = solve(&l, &b, &SolverParams::default(), "grid").unwrap();
//! assert!(report.converged);
//! assert_eq!(x.len(), 256);
//! ```

// `!(x > 0.0)` and friends deliberately treat NaN as a failure; rewriting
// them with inverted operators would silently accept NaN. Indexed loops are
// kept where the index ties several arrays to the same matrix row, the usual
// shape of factorization and CSR code.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod aggregation;
pub mod elimination;
pub mod error;
pub mod generate;
pub mod io;
pub mod laplacian;
pub mod metrics;
pub mod rng;
pub mod solver;
pub mod sparse;
pub mod strength;

pub use error::{Error, Result};
pub use laplacian::{
    is_connected, laplacian_from_graph, validate_laplacian, Graph, LaplacianMatrix,
};
pub use metrics::{SolveReport, WorkCounter};
pub use solver::krylov::{kcycle_solve, pcg_solve, solve, SolveOutcome};
pub use solver::{setup_hierarchy, CycleKind, Hierarchy, SolverParams};
pub use sparse::{BlockLayout, SparseMatrix};
