//! Multigrid hierarchy construction and solve drivers.
//!
//! Setup interleaves two coarsening mechanisms: exact elimination of
//! low-degree vertices (accepted whenever it removes more than a small
//! fraction of the level) and vote-based aggregation driven by smoothed
//! test vectors. Coarsening stops when the operator is small enough to
//! factor densely, when the level budget runs out, or when aggregation
//! stops making progress. The resulting [`Hierarchy`] is immutable and can
//! back any number of concurrent solves.
//!
//! Solve drivers live in the submodules: [`cycle`] implements the multigrid
//! cycle and work-counted kernels, [`krylov`] the outer iterations (CG
//! preconditioned by a V-cycle, or the recursively accelerated K-cycle),
//! and [`smooth`] the Chebyshev smoother and eigenvalue estimation.

pub mod cycle;
pub mod krylov;
pub mod smooth;

use serde::{Deserialize, Serialize};

use crate::aggregation::{aggregate, build_restriction, galerkin_coarse};
use crate::elimination::{build_elimination_level, select_elimination, EliminationLevel};
use crate::error::{Error, Result};
use crate::laplacian::{is_connected, LaplacianMatrix};
use crate::metrics::LevelInfo;
use crate::rng::mix64;
use crate::sparse::{random_permutation, BlockLayout, Permutation, SparseMatrix};
use crate::strength::{affinity, normalize_strength, test_vectors};
use smooth::{chebyshev_smooth, estimate_lmax};

/// Lanczos steps used for every largest-eigenvalue estimate.
const LANCZOS_ITERS: usize = 10;

/// Largest coarsest-level size that still gets a dense factorization. A
/// stalled hierarchy can leave a big coarsest operator; beyond this cap the
/// bottom solve falls back to polynomial iteration instead of an `n^2`
/// factor.
const DENSE_CAP: usize = 2048;

/// Chebyshev degree of the fallback bottom solver.
const FALLBACK_DEGREE: usize = 8;

/// Outer iteration style.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleKind {
    /// Conjugate gradient preconditioned by one V-cycle.
    V,
    /// Flexible conjugate gradient with recursive Krylov acceleration.
    K,
}

/// Everything configurable about setup and solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverParams {
    /// Relative residual target.
    pub tol: f64,
    pub cycle: CycleKind,
    /// Chebyshev smoother degree.
    pub cheby_degree: usize,
    pub pre_sweeps: usize,
    pub post_sweeps: usize,
    /// Elimination is accepted when it removes more than this fraction of
    /// the level's vertices.
    pub elim_gate: f64,
    /// Vertices with off-diagonal degree at most this are elimination
    /// candidates.
    pub elim_max_degree: usize,
    /// Elimination attempts before each aggregation step.
    pub elim_rounds: usize,
    /// Votes needed to become an aggregation seed.
    pub vote_threshold: u32,
    pub voting_rounds: usize,
    pub max_levels: usize,
    /// Coarsening target: stop once the operator has at most this many
    /// stored nonzeros.
    pub coarse_nnz: usize,
    pub max_iters: usize,
    /// Damping for the test-vector Jacobi sweeps.
    pub omega: f64,
    /// Number of smoothed test vectors for strength of connection.
    pub test_vectors: usize,
    pub test_vector_sweeps: usize,
    pub seed: u64,
    /// Simulated block grid shape for the distributed kernels.
    pub grid_rows: usize,
    pub grid_cols: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            tol: 1e-8,
            cycle: CycleKind::V,
            cheby_degree: 2,
            pre_sweeps: 1,
            post_sweeps: 1,
            elim_gate: 0.05,
            elim_max_degree: 4,
            elim_rounds: 1,
            vote_threshold: 8,
            voting_rounds: 10,
            max_levels: 40,
            coarse_nnz: 1000,
            max_iters: 500,
            omega: 2.0 / 3.0,
            test_vectors: 4,
            test_vector_sweeps: 3,
            seed: 0,
            grid_rows: 1,
            grid_cols: 1,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        fn bad(msg: String) -> Result<()> {
            Err(Error::InvalidParameter(msg))
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad(format!("tol must lie in (0, 1), got {}", self.tol));
        }
        if self.cheby_degree == 0 {
            return bad("cheby_degree must be positive".into());
        }
        if self.pre_sweeps == 0 || self.post_sweeps == 0 {
            return bad("smoothing sweep counts must be positive".into());
        }
        if !(self.elim_gate >= 0.0 && self.elim_gate < 1.0) {
            return bad(format!("elim_gate must lie in [0, 1), got {}", self.elim_gate));
        }
        if self.elim_max_degree == 0 || self.elim_rounds == 0 {
            return bad("elimination degree bound and round count must be positive".into());
        }
        if self.vote_threshold == 0 || self.voting_rounds == 0 {
            return bad("voting parameters must be positive".into());
        }
        if self.max_levels == 0 || self.coarse_nnz == 0 || self.max_iters == 0 {
            return bad("level, nonzero, and iteration budgets must be positive".into());
        }
        if !(self.omega > 0.0 && self.omega < 2.0) {
            return bad(format!("omega must lie in (0, 2), got {}", self.omega));
        }
        if self.test_vectors == 0 {
            return bad("need at least one test vector".into());
        }
        if self.grid_rows == 0 || self.grid_cols == 0 {
            return bad("grid dimensions must be positive".into());
        }
        Ok(())
    }
}

/// Aggregation level: 0/1 transfer pair, the Galerkin coarse operator, and
/// the smoothing interval for the operator this level coarsens.
#[derive(Debug, Clone)]
pub struct AggregationLevel {
    pub r: SparseMatrix<f64>,
    pub p: SparseMatrix<f64>,
    pub l_next: LaplacianMatrix,
    /// Lanczos estimate of the largest eigenvalue of the level operator.
    pub lmax: f64,
    /// Chebyshev interval, `[0.3, 1.1] * lmax`.
    pub lo: f64,
    pub hi: f64,
}

/// One coarsening step of either kind.
#[derive(Debug, Clone)]
pub enum Level {
    Elimination(EliminationLevel),
    Aggregation(AggregationLevel),
}

impl Level {
    pub fn l_next(&self) -> &LaplacianMatrix {
        match self {
            Level::Elimination(e) => &e.l_next,
            Level::Aggregation(a) => &a.l_next,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Level::Elimination(_) => "elimination",
            Level::Aggregation(_) => "aggregation",
        }
    }
}

/// Dense LU of the grounded coarsest operator. The Laplacian is singular
/// with nullspace `span{1}`; replacing the last row and column by the
/// identity pins that mode, and shifting each solution to zero mean makes
/// the result agree with the minimum-norm solution for right-hand sides
/// orthogonal to the constant vector.
#[derive(Debug, Clone)]
pub struct GroundedLu {
    n: usize,
    lu: Vec<f64>,
    piv: Vec<usize>,
}

impl GroundedLu {
    pub fn factor(l: &LaplacianMatrix) -> Result<Self> {
        let n = l.nrows();
        let mut a = vec![0.0f64; n * n];
        for (i, j, &v) in l.matrix().entries() {
            a[i * n + j] = v;
        }
        for k in 0..n {
            a[(n - 1) * n + k] = 0.0;
            a[k * n + (n - 1)] = 0.0;
        }
        a[(n - 1) * n + (n - 1)] = 1.0;

        let mut piv = vec![0usize; n];
        for k in 0..n {
            let mut p = k;
            let mut best = a[k * n + k].abs();
            for i in k + 1..n {
                let cand = a[i * n + k].abs();
                if cand > best {
                    best = cand;
                    p = i;
                }
            }
            if best == 0.0 {
                // grounded Laplacians of connected graphs are nonsingular;
                // reaching this means the input was disconnected
                return Err(Error::Disconnected);
            }
            piv[k] = p;
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
            }
            let akk = a[k * n + k];
            for i in k + 1..n {
                let m = a[i * n + k] / akk;
                a[i * n + k] = m;
                if m != 0.0 {
                    for j in k + 1..n {
                        a[i * n + j] -= m * a[k * n + j];
                    }
                }
            }
        }
        Ok(GroundedLu { n, lu: a, piv })
    }

    pub fn nrows(&self) -> usize {
        self.n
    }

    /// Solves the grounded system and returns the zero-mean representative.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = b.to_vec();
        x[n - 1] = 0.0;
        for k in 0..n {
            x.swap(k, self.piv[k]);
        }
        for i in 1..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        let mean = x.iter().sum::<f64>() / n as f64;
        x.iter_mut().for_each(|v| *v -= mean);
        x
    }
}

/// Bottom-level solver.
#[derive(Debug, Clone)]
pub enum CoarseSolver {
    Direct(GroundedLu),
    /// Polynomial fallback for a stalled hierarchy whose coarsest operator
    /// is too large to factor densely.
    Chebyshev { lo: f64, hi: f64, degree: usize },
}

impl CoarseSolver {
    pub fn apply(&self, l: &LaplacianMatrix, b: &[f64]) -> Vec<f64> {
        match self {
            CoarseSolver::Direct(lu) => lu.solve(b),
            CoarseSolver::Chebyshev { lo, hi, degree } => {
                let mut x = vec![0.0; b.len()];
                chebyshev_smooth(l.matrix(), b, &mut x, *degree, *lo, *hi)
                    .expect("interval validated at setup");
                let mean = x.iter().sum::<f64>() / x.len().max(1) as f64;
                x.iter_mut().for_each(|v| *v -= mean);
                x
            }
        }
    }

    /// Approximate flop count of one application, for work accounting.
    pub fn flops(&self, l: &LaplacianMatrix) -> usize {
        match self {
            CoarseSolver::Direct(lu) => lu.n * lu.n,
            CoarseSolver::Chebyshev { degree, .. } => degree * l.nnz(),
        }
    }
}

/// The immutable product of setup: the finest operator, the coarsening
/// levels, and a bottom solver.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    pub finest: LaplacianMatrix,
    pub levels: Vec<Level>,
    pub coarse: CoarseSolver,
    pub params: SolverParams,
    /// True when coarsening stopped early because aggregation made no
    /// progress twice in a row.
    pub stalled: bool,
}

impl Hierarchy {
    /// Operator at level `l`; level 0 is the finest.
    pub fn matrix_at(&self, l: usize) -> &LaplacianMatrix {
        if l == 0 {
            &self.finest
        } else {
            self.levels[l - 1].l_next()
        }
    }

    /// Number of operators, including the finest.
    pub fn num_operators(&self) -> usize {
        self.levels.len() + 1
    }

    pub fn coarsest(&self) -> &LaplacianMatrix {
        self.matrix_at(self.levels.len())
    }

    pub fn level_summaries(&self) -> Vec<LevelInfo> {
        let mut rows = vec![LevelInfo {
            kind: "finest".into(),
            n: self.finest.nrows(),
            nnz: self.finest.nnz(),
        }];
        for level in &self.levels {
            rows.push(LevelInfo {
                kind: level.kind_name().into(),
                n: level.l_next().nrows(),
                nnz: level.l_next().nnz(),
            });
        }
        rows
    }

    /// Total stored nonzeros across all operators over the finest count.
    pub fn operator_complexity(&self) -> f64 {
        let base = self.finest.nnz();
        if base == 0 {
            return 1.0;
        }
        let total: usize = (0..self.num_operators())
            .map(|l| self.matrix_at(l).nnz())
            .sum();
        total as f64 / base as f64
    }
}

/// Builds the multigrid hierarchy for a connected Laplacian.
///
/// Each round first attempts low-degree elimination (accepted when the
/// selected set beats the gate fraction), then one aggregation step from
/// freshly smoothed test vectors. The random vertex permutation that
/// scatters entries across the simulated block grid is applied to the input
/// operator only; coarser levels use the natural order. Setup stops at the
/// nonzero target, the level cap, or after aggregation returns as many
/// aggregates as vertices twice in a row (a stall, reported on the result).
pub fn setup_hierarchy(l0: &LaplacianMatrix, params: &SolverParams) -> Result<Hierarchy> {
    params.validate()?;
    if l0.nrows() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if !is_connected(l0.matrix()) {
        return Err(Error::Disconnected);
    }

    let mut levels: Vec<Level> = Vec::new();
    let mut current = l0.clone();
    let mut agg_stall = 0u32;
    let mut stalled = false;
    let mut attempt: u64 = 0;

    while current.nnz() > params.coarse_nnz && levels.len() < params.max_levels && !stalled {
        // layout for the distributed selection products at this level
        let layout_for = |n: usize, first: bool, seed: u64| BlockLayout {
            grid_rows: params.grid_rows,
            grid_cols: params.grid_cols,
            perm: if first {
                random_permutation(n, seed)
            } else {
                Permutation::identity(n)
            },
        };

        for _ in 0..params.elim_rounds {
            if current.nnz() <= params.coarse_nnz || levels.len() >= params.max_levels {
                break;
            }
            let n = current.nrows();
            let layout = layout_for(n, levels.is_empty(), params.seed);
            let dist = layout.partition(current.matrix())?;
            let f = select_elimination(&dist, params.elim_max_degree)?;
            if (f.len() as f64) > params.elim_gate * n as f64 {
                let level = build_elimination_level(&current, &f)?;
                current = level.l_next.clone();
                levels.push(Level::Elimination(level));
            } else {
                break;
            }
        }
        if current.nnz() <= params.coarse_nnz || levels.len() >= params.max_levels {
            break;
        }

        let n = current.nrows();
        attempt += 1;
        let tv_seed = mix64(params.seed.wrapping_add(attempt));
        let tv = test_vectors(
            &current,
            params.test_vectors,
            params.test_vector_sweeps,
            params.omega,
            tv_seed,
        )?;
        let s = normalize_strength(&affinity(&current, &tv)?)?;
        let layout = layout_for(n, levels.is_empty(), params.seed);
        let assignment = aggregate(&s, &layout, params.voting_rounds, params.vote_threshold)?;

        if assignment.num_aggregates() < n {
            agg_stall = 0;
            let r = build_restriction(&assignment);
            let p = r.transpose();
            let l_next = galerkin_coarse(&r, &current, &p)?;
            let lmax = positive_lmax(&current, params.seed);
            levels.push(Level::Aggregation(AggregationLevel {
                r,
                p,
                l_next: l_next.clone(),
                lmax,
                lo: 0.3 * lmax,
                hi: 1.1 * lmax,
            }));
            current = l_next;
        } else {
            agg_stall += 1;
            if agg_stall >= 2 {
                stalled = true;
            }
        }
    }

    let coarse = if current.nrows() <= DENSE_CAP {
        CoarseSolver::Direct(GroundedLu::factor(&current)?)
    } else {
        let lmax = positive_lmax(&current, params.seed);
        CoarseSolver::Chebyshev {
            lo: 0.3 * lmax,
            hi: 1.1 * lmax,
            degree: FALLBACK_DEGREE,
        }
    };

    Ok(Hierarchy {
        finest: l0.clone(),
        levels,
        coarse,
        params: params.clone(),
        stalled,
    })
}

/// Largest-eigenvalue estimate with a Gershgorin fallback so smoothing
/// intervals stay valid even if the Krylov start degenerates.
fn positive_lmax(l: &LaplacianMatrix, seed: u64) -> f64 {
    let est = estimate_lmax(l.matrix(), LANCZOS_ITERS, seed);
    if est > 0.0 {
        est
    } else {
        2.0 * l
            .diagonal()
            .iter()
            .cloned()
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE)
    }
}
