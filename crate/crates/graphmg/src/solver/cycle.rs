//! The multigrid cycle and its work-accounted kernel wrappers.
//!
//! [`SolveCtx`] pairs an immutable hierarchy with a [`WorkCounter`]; every
//! operator, smoother, transfer, and bottom-solve application goes through
//! it so two identical solves always report identical work. Aggregation
//! levels follow the classic pattern (pre-smooth, restrict the residual,
//! `gamma` coarse solves, prolong-correct, post-smooth). Elimination levels
//! are exact transfers: no smoothing, no use of the incoming iterate, and a
//! single recursive call regardless of the cycle index, because repeating an
//! exact step buys nothing.

use crate::elimination::{elim_prolong, elim_restrict};
use crate::metrics::WorkCounter;
use crate::solver::smooth::{chebyshev_smooth, chebyshev_smooth_from_zero};
use crate::solver::{AggregationLevel, Hierarchy, Level};

/// One solve's mutable state: the hierarchy it runs on plus work tallies.
pub struct SolveCtx<'a> {
    h: &'a Hierarchy,
    pub work: WorkCounter,
    coarse_visits: usize,
}

impl<'a> SolveCtx<'a> {
    pub fn new(h: &'a Hierarchy) -> Self {
        SolveCtx {
            h,
            work: WorkCounter::new(h.finest.nnz(), h.num_operators()),
            coarse_visits: 0,
        }
    }

    pub fn hierarchy(&self) -> &'a Hierarchy {
        self.h
    }

    /// Times the coarsest solver was invoked (cycle-shape diagnostics).
    pub fn coarse_visits(&self) -> usize {
        self.coarse_visits
    }

    /// `L_l x`, counted.
    pub fn apply_operator(&mut self, l: usize, x: &[f64]) -> Vec<f64> {
        let op = self.h.matrix_at(l);
        self.work.count_operator(l, op.nnz());
        op.matvec(x)
    }

    /// `b - L_l x`, counted as one operator application.
    pub fn residual(&mut self, l: usize, x: &[f64], b: &[f64]) -> Vec<f64> {
        let lx = self.apply_operator(l, x);
        b.iter().zip(&lx).map(|(bi, li)| bi - li).collect()
    }

    /// One length-n vector operation in the outer Krylov iteration.
    pub fn count_vector_op(&mut self) {
        self.work.count_vector(self.h.finest.nrows());
    }

    /// `sweeps` Chebyshev sweeps on the interval fixed at setup, counted.
    /// A zero iterate takes the from-zero fast path (identical output, one
    /// matrix-vector product fewer).
    pub(crate) fn smooth(
        &mut self,
        l: usize,
        agg: &AggregationLevel,
        x: &mut [f64],
        b: &[f64],
        sweeps: usize,
    ) {
        let degree = self.h.params.cheby_degree;
        let op = self.h.matrix_at(l);
        for sweep in 0..sweeps {
            if sweep == 0 && x.iter().all(|&v| v == 0.0) {
                chebyshev_smooth_from_zero(op.matrix(), b, x, degree, agg.lo, agg.hi)
                    .expect("smoothing interval fixed at setup");
                self.work.count_smoother(l, (degree - 1) * op.nnz());
            } else {
                chebyshev_smooth(op.matrix(), b, x, degree, agg.lo, agg.hi)
                    .expect("smoothing interval fixed at setup");
                self.work.count_smoother(l, degree * op.nnz());
            }
        }
    }

    /// Grounded bottom solve, counted.
    pub fn coarse_solve(&mut self, b: &[f64]) -> Vec<f64> {
        let op = self.h.coarsest();
        self.coarse_visits += 1;
        self.work.count_coarse(self.h.coarse.flops(op));
        self.h.coarse.apply(op, b)
    }

    /// One multigrid cycle at level `l` with cycle index `gamma`, updating
    /// `x` toward the solution of `L_l x = b`.
    pub fn mgcycle(&mut self, l: usize, x: &mut Vec<f64>, b: &[f64], gamma: usize) {
        let h = self.h;
        if l == h.levels.len() {
            *x = self.coarse_solve(b);
            return;
        }
        match &h.levels[l] {
            Level::Elimination(e) => {
                let bc = elim_restrict(e, b);
                self.work.count_transfer(l, e.p.nnz());
                let mut xc = vec![0.0; e.c.len()];
                self.mgcycle(l + 1, &mut xc, &bc, gamma);
                *x = elim_prolong(e, &xc, b);
                self.work.count_transfer(l, e.p.nnz() + e.f.len());
            }
            Level::Aggregation(a) => {
                self.smooth(l, a, x, b, h.params.pre_sweeps);
                let r = self.residual(l, x, b);
                let bc = a.r.matvec(&r);
                self.work.count_transfer(l, a.r.nnz());
                let mut xc = vec![0.0; a.r.nrows()];
                for _ in 0..gamma {
                    self.mgcycle(l + 1, &mut xc, &bc, gamma);
                }
                let correction = a.p.matvec(&xc);
                self.work.count_transfer(l, a.p.nnz());
                for (xi, ci) in x.iter_mut().zip(&correction) {
                    *xi += ci;
                }
                self.smooth(l, a, x, b, h.params.post_sweeps);
            }
        }
    }
}
