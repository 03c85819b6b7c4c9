//! Outer Krylov iterations.
//!
//! Two drivers share the hierarchy: conjugate gradient preconditioned by
//! one V-cycle, and a K-cycle — flexible conjugate gradient on the finest
//! level where each aggregation level below runs two inner FCG iterations
//! preconditioned by the remaining hierarchy. Elimination levels are exact
//! and get no acceleration. Laplacian systems are singular with nullspace
//! `span{1}`, so the right-hand side is projected against the constant
//! vector up front and the iterate and residual are re-centered every
//! iteration to stop roundoff drift along the nullspace.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::laplacian::LaplacianMatrix;
use crate::metrics::{tda, wda, SolveReport, WorkCounter};
use crate::solver::cycle::SolveCtx;
use crate::solver::{setup_hierarchy, CycleKind, Hierarchy, Level, SolverParams};

/// Inner FCG iterations per aggregation level in a K-cycle.
const KCYCLE_INNER: usize = 2;

/// Raw result of one Krylov run.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub x: Vec<f64>,
    /// Residual norms, starting with `‖b‖`.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub work: WorkCounter,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn zero_mean(v: &mut [f64]) {
    if v.is_empty() {
        return;
    }
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= m);
}

fn check_rhs(h: &Hierarchy, b: &[f64]) -> Result<()> {
    if b.len() != h.finest.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "rhs has {} entries for a {}-vertex operator",
            b.len(),
            h.finest.nrows()
        )));
    }
    Ok(())
}

/// Conjugate gradient on `L x = b` preconditioned by one V-cycle per
/// iteration. Stops at `‖r‖ ≤ tol · ‖b‖` or the iteration cap; hitting the
/// cap is reported, not an error.
pub fn pcg_solve(h: &Hierarchy, b: &[f64]) -> Result<SolveOutcome> {
    check_rhs(h, b)?;
    let n = b.len();
    let mut ctx = SolveCtx::new(h);

    let mut r = b.to_vec();
    zero_mean(&mut r);
    ctx.count_vector_op();
    let r0 = norm(&r);
    ctx.count_vector_op();
    let mut residuals = vec![r0];
    let mut x = vec![0.0; n];
    if r0 == 0.0 {
        return Ok(SolveOutcome {
            x,
            residuals,
            iterations: 0,
            converged: true,
            work: ctx.work,
        });
    }

    let tol = h.params.tol * r0;
    let mut p: Vec<f64> = Vec::new();
    let mut rho_prev = 0.0;
    let mut converged = false;

    for it in 1..=h.params.max_iters {
        // no need to project z: r is mean-free, so (r, z) ignores any
        // constant component, and L annihilates it in q = L p
        let mut z = vec![0.0; n];
        ctx.mgcycle(0, &mut z, &r, 1);

        let rho = dot(&r, &z);
        ctx.count_vector_op();
        if !(rho > 0.0) {
            break;
        }
        if it == 1 {
            p = z;
        } else {
            let beta = rho / rho_prev;
            for (pi, zi) in p.iter_mut().zip(&z) {
                *pi = zi + beta * *pi;
            }
            ctx.count_vector_op();
        }
        rho_prev = rho;

        let q = ctx.apply_operator(0, &p);
        let pq = dot(&p, &q);
        ctx.count_vector_op();
        if !(pq > 0.0) {
            break;
        }
        let alpha = rho / pq;
        for (xi, pi) in x.iter_mut().zip(&p) {
            *xi += alpha * pi;
        }
        for (ri, qi) in r.iter_mut().zip(&q) {
            *ri -= alpha * qi;
        }
        zero_mean(&mut x);
        zero_mean(&mut r);
        let rn = norm(&r);
        for _ in 0..5 {
            ctx.count_vector_op();
        }
        residuals.push(rn);
        if rn <= tol {
            converged = true;
            break;
        }
    }

    Ok(SolveOutcome {
        x,
        iterations: residuals.len() - 1,
        residuals,
        converged,
        work: ctx.work,
    })
}

/// One K-cycle preconditioner application at level `l`: smooth, restrict,
/// solve the coarse level (recursively accelerated), prolong, smooth.
fn kcycle_step(ctx: &mut SolveCtx, l: usize, b: &[f64]) -> Vec<f64> {
    let h = ctx.hierarchy();
    if l == h.levels.len() {
        return ctx.coarse_solve(b);
    }
    match &h.levels[l] {
        Level::Elimination(e) => {
            let bc = crate::elimination::elim_restrict(e, b);
            ctx.work.count_transfer(l, e.p.nnz());
            let zc = ksolve(ctx, l + 1, &bc);
            let z = crate::elimination::elim_prolong(e, &zc, b);
            ctx.work.count_transfer(l, e.p.nnz() + e.f.len());
            z
        }
        Level::Aggregation(a) => {
            let n = h.matrix_at(l).nrows();
            let mut x = vec![0.0; n];
            ctx.smooth(l, a, &mut x, b, h.params.pre_sweeps);
            let r = ctx.residual(l, &x, b);
            let bc = a.r.matvec(&r);
            ctx.work.count_transfer(l, a.r.nnz());
            let zc = ksolve(ctx, l + 1, &bc);
            let correction = a.p.matvec(&zc);
            ctx.work.count_transfer(l, a.p.nnz());
            for (xi, ci) in x.iter_mut().zip(&correction) {
                *xi += ci;
            }
            ctx.smooth(l, a, &mut x, b, h.params.post_sweeps);
            x
        }
    }
}

/// Approximate solve of `L_l z = b` inside a K-cycle: direct at the bottom,
/// pass-through at elimination levels, a short preconditioned FCG run at
/// aggregation levels.
fn ksolve(ctx: &mut SolveCtx, l: usize, b: &[f64]) -> Vec<f64> {
    let h = ctx.hierarchy();
    if l == h.levels.len() {
        return ctx.coarse_solve(b);
    }
    if matches!(h.levels[l], Level::Elimination(_)) {
        return kcycle_step(ctx, l, b);
    }
    let n = h.matrix_at(l).nrows();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut prev: Option<(Vec<f64>, Vec<f64>, f64)> = None;
    for _ in 0..KCYCLE_INNER {
        let z = kcycle_step(ctx, l, &r);
        let d = match &prev {
            None => z,
            Some((dp, ldp, dpldp)) => {
                let beta = dot(&z, ldp) / dpldp;
                z.iter().zip(dp).map(|(zi, di)| zi - beta * di).collect()
            }
        };
        let ld = ctx.apply_operator(l, &d);
        let dld = dot(&d, &ld);
        if !(dld > 0.0) {
            break;
        }
        let alpha = dot(&r, &d) / dld;
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += alpha * di;
        }
        for (ri, ldi) in r.iter_mut().zip(&ld) {
            *ri -= alpha * ldi;
        }
        prev = Some((d, ld, dld));
    }
    x
}

/// Flexible conjugate gradient on the finest level with the K-cycle as a
/// (variable) preconditioner. Directions keep one step of history.
pub fn kcycle_solve(h: &Hierarchy, b: &[f64]) -> Result<SolveOutcome> {
    check_rhs(h, b)?;
    let n = b.len();
    let mut ctx = SolveCtx::new(h);

    let mut r = b.to_vec();
    zero_mean(&mut r);
    ctx.count_vector_op();
    let r0 = norm(&r);
    ctx.count_vector_op();
    let mut residuals = vec![r0];
    let mut x = vec![0.0; n];
    if r0 == 0.0 {
        return Ok(SolveOutcome {
            x,
            residuals,
            iterations: 0,
            converged: true,
            work: ctx.work,
        });
    }

    let tol = h.params.tol * r0;
    let mut prev: Option<(Vec<f64>, Vec<f64>, f64)> = None;
    let mut converged = false;

    for _ in 1..=h.params.max_iters {
        let z = kcycle_step(&mut ctx, 0, &r);

        let d = match &prev {
            None => z,
            Some((dp, ldp, dpldp)) => {
                let beta = dot(&z, ldp) / dpldp;
                ctx.count_vector_op();
                z.iter().zip(dp).map(|(zi, di)| zi - beta * di).collect()
            }
        };
        let ld = ctx.apply_operator(0, &d);
        let dld = dot(&d, &ld);
        ctx.count_vector_op();
        if !(dld > 0.0) {
            break;
        }
        let alpha = dot(&r, &d) / dld;
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += alpha * di;
        }
        for (ri, ldi) in r.iter_mut().zip(&ld) {
            *ri -= alpha * ldi;
        }
        zero_mean(&mut x);
        zero_mean(&mut r);
        let rn = norm(&r);
        for _ in 0..5 {
            ctx.count_vector_op();
        }
        residuals.push(rn);
        prev = Some((d, ld, dld));
        if rn <= tol {
            converged = true;
            break;
        }
    }

    Ok(SolveOutcome {
        x,
        iterations: residuals.len() - 1,
        residuals,
        converged,
        work: ctx.work,
    })
}

/// Builds the hierarchy and runs the configured outer iteration, reporting
/// residual history, work, WDA/TDA, and timing.
pub fn solve(
    l: &LaplacianMatrix,
    b: &[f64],
    params: &SolverParams,
    name: &str,
) -> Result<(Vec<f64>, SolveReport)> {
    let t_setup = Instant::now();
    let h = setup_hierarchy(l, params)?;
    let setup_seconds = t_setup.elapsed().as_secs_f64();

    let t_solve = Instant::now();
    let outcome = match params.cycle {
        CycleKind::V => pcg_solve(&h, b)?,
        CycleKind::K => kcycle_solve(&h, b)?,
    };
    let solve_seconds = t_solve.elapsed().as_secs_f64();

    let r_first = outcome.residuals[0];
    let r_last = *outcome.residuals.last().expect("history non-empty");
    let work_units = outcome.work.total();
    let report = SolveReport {
        graph: name.to_string(),
        n: l.nrows(),
        nnz: l.nnz(),
        params: params.clone(),
        levels: h.level_summaries(),
        residuals: outcome.residuals.clone(),
        iterations: outcome.iterations,
        converged: outcome.converged,
        work_units,
        wda: wda(r_first, r_last, work_units),
        tda: tda(r_first, r_last, solve_seconds),
        setup_seconds,
        solve_seconds,
        operator_complexity: h.operator_complexity(),
    };
    Ok((outcome.x, report))
}
