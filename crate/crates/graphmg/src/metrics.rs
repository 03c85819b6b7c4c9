//! Work accounting and solve reports.
//!
//! Solver cost is tracked in work units of "one nonzero visited", normalized
//! by the nonzero count of the finest operator, so one fine-level residual
//! costs exactly one unit. Dividing the total by the number of digits of
//! residual reduction gives work per digit of accuracy (WDA), a
//! machine-independent efficiency figure; the wall-clock analogue (TDA)
//! divides seconds instead.

use serde::{Deserialize, Serialize};

use crate::solver::SolverParams;

/// Per-level work tallies, in units of finest-level nonzeros.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LevelWork {
    /// Applications of the level operator outside the smoother.
    pub operator: f64,
    /// Smoother matrix-vector products.
    pub smoother: f64,
    /// Restriction and prolongation applications.
    pub transfer: f64,
}

/// Accumulates normalized work during one solve.
#[derive(Clone, Debug)]
pub struct WorkCounter {
    baseline: f64,
    per_level: Vec<LevelWork>,
    coarse: f64,
    vector_ops: f64,
}

impl WorkCounter {
    /// `baseline_nnz` is the finest operator's nonzero count; `num_operators`
    /// is the number of hierarchy operators including the finest.
    pub fn new(baseline_nnz: usize, num_operators: usize) -> Self {
        WorkCounter {
            baseline: (baseline_nnz.max(1)) as f64,
            per_level: vec![LevelWork::default(); num_operators],
            coarse: 0.0,
            vector_ops: 0.0,
        }
    }

    pub fn count_operator(&mut self, level: usize, nnz: usize) {
        self.per_level[level].operator += nnz as f64 / self.baseline;
    }

    pub fn count_smoother(&mut self, level: usize, nnz: usize) {
        self.per_level[level].smoother += nnz as f64 / self.baseline;
    }

    pub fn count_transfer(&mut self, level: usize, nnz: usize) {
        self.per_level[level].transfer += nnz as f64 / self.baseline;
    }

    pub fn count_coarse(&mut self, flops: usize) {
        self.coarse += flops as f64 / self.baseline;
    }

    /// One length-`n` vector operation (dot, axpy, norm, mean shift) in the
    /// outer Krylov loop.
    pub fn count_vector(&mut self, n: usize) {
        self.vector_ops += n as f64 / self.baseline;
    }

    pub fn per_level(&self) -> &[LevelWork] {
        &self.per_level
    }

    pub fn coarse(&self) -> f64 {
        self.coarse
    }

    pub fn vector_ops(&self) -> f64 {
        self.vector_ops
    }

    pub fn total(&self) -> f64 {
        self.per_level
            .iter()
            .map(|lw| lw.operator + lw.smoother + lw.transfer)
            .sum::<f64>()
            + self.coarse
            + self.vector_ops
    }
}

/// Work per digit of accuracy: `-work / log10(r_final / r_initial)`. `None`
/// when the residual did not drop (no digits gained) or the inputs are
/// degenerate.
pub fn wda(r_initial: f64, r_final: f64, work: f64) -> Option<f64> {
    digits_gained(r_initial, r_final).map(|d| work / d)
}

/// Time per digit of accuracy, seconds instead of work units.
pub fn tda(r_initial: f64, r_final: f64, seconds: f64) -> Option<f64> {
    digits_gained(r_initial, r_final).map(|d| seconds / d)
}

fn digits_gained(r_initial: f64, r_final: f64) -> Option<f64> {
    if !(r_initial > 0.0) || !(r_final >= 0.0) || r_final >= r_initial {
        return None;
    }
    // +inf when the residual hit exactly zero; callers divide by it
    Some(-(r_final / r_initial).log10())
}

/// One row of the hierarchy table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelInfo {
    /// "finest", "elimination", or "aggregation" (how the operator was produced).
    pub kind: String,
    pub n: usize,
    pub nnz: usize,
}

/// Everything a solve run reports; serializes to the documented JSON schema.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub graph: String,
    pub n: usize,
    pub nnz: usize,
    pub params: SolverParams,
    pub levels: Vec<LevelInfo>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub work_units: f64,
    pub wda: Option<f64>,
    pub tda: Option<f64>,
    pub setup_seconds: f64,
    pub solve_seconds: f64,
    pub operator_complexity: f64,
}
