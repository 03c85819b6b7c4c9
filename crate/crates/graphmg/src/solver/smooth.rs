//! Chebyshev smoothing and spectral-bound estimation.
//!
//! The smoother runs the classic Chebyshev semi-iteration on a target
//! interval `[lo, hi]`, chosen as `[0.3, 1.1]` times a Lanczos estimate of
//! the largest eigenvalue. Jacobi-style fixed-point sweeps can stall on the
//! smooth end of the spectrum; the Chebyshev polynomial damps every mode in
//! the interval at a rate that only depends on `hi/lo`, which makes it a
//! reliable parallel smoother (each step is just matrix-vector products and
//! axpys).

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::sparse::SparseMatrix;

fn check_smoother_args(
    l: &SparseMatrix<f64>,
    b: &[f64],
    x: &[f64],
    degree: usize,
    lo: f64,
    hi: f64,
) -> Result<()> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidInterval { lo, hi });
    }
    if degree == 0 {
        return Err(Error::InvalidParameter("smoother degree must be positive".into()));
    }
    let n = l.nrows();
    if b.len() != n || x.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "smoother: operator is {}x{}, rhs has {} entries, iterate has {}",
            n,
            l.ncols(),
            b.len(),
            x.len()
        )));
    }
    Ok(())
}

/// Shared Chebyshev recurrence; `r` must hold `b - L x` on entry.
fn cheby_core(
    l: &SparseMatrix<f64>,
    x: &mut [f64],
    mut r: Vec<f64>,
    degree: usize,
    lo: f64,
    hi: f64,
) {
    let theta = (hi + lo) / 2.0;
    let delta = (hi - lo) / 2.0;
    let sigma = theta / delta;
    let mut rho = 1.0 / sigma;

    let mut d: Vec<f64> = r.iter().map(|ri| ri / theta).collect();
    for (xi, di) in x.iter_mut().zip(&d) {
        *xi += di;
    }
    for _ in 1..degree {
        let ld = l.matvec(&d);
        for (ri, ldi) in r.iter_mut().zip(&ld) {
            *ri -= ldi;
        }
        let rho_next = 1.0 / (2.0 * sigma - rho);
        let dir = rho_next * rho;
        let res = 2.0 * rho_next / delta;
        for (di, ri) in d.iter_mut().zip(&r) {
            *di = dir * *di + res * ri;
        }
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += di;
        }
        rho = rho_next;
    }
}

/// One application of degree-`degree` Chebyshev smoothing for `L x = b` on
/// the eigenvalue interval `[lo, hi]`, updating `x` in place. Performs
/// exactly `degree` matrix-vector products. Degree 1 reduces to a Richardson
/// step `x + (2 / (lo + hi)) (b - L x)`.
pub fn chebyshev_smooth(
    l: &SparseMatrix<f64>,
    b: &[f64],
    x: &mut [f64],
    degree: usize,
    lo: f64,
    hi: f64,
) -> Result<()> {
    check_smoother_args(l, b, x, degree, lo, hi)?;
    let lx = l.matvec(x);
    let r: Vec<f64> = b.iter().zip(&lx).map(|(bi, li)| bi - li).collect();
    cheby_core(l, x, r, degree, lo, hi);
    Ok(())
}

/// [`chebyshev_smooth`] specialized to a zero initial iterate: the first
/// residual is `b` itself, saving one matrix-vector product (`degree - 1`
/// remain). Overwrites `x`. Bitwise identical to calling the general smoother
/// on a zero `x`.
pub fn chebyshev_smooth_from_zero(
    l: &SparseMatrix<f64>,
    b: &[f64],
    x: &mut [f64],
    degree: usize,
    lo: f64,
    hi: f64,
) -> Result<()> {
    check_smoother_args(l, b, x, degree, lo, hi)?;
    x.fill(0.0);
    cheby_core(l, x, b.to_vec(), degree, lo, hi);
    Ok(())
}

/// Largest-eigenvalue estimate from `iters` Lanczos steps with a seeded
/// random start and full reorthogonalization, followed by a bisection
/// eigensolve of the small tridiagonal matrix. The estimate approaches the
/// true value from below, so smoothing intervals derived from it get a
/// safety factor above 1. Returns 0 for an empty or zero matrix.
pub fn estimate_lmax(l: &SparseMatrix<f64>, iters: usize, seed: u64) -> f64 {
    let n = l.nrows();
    if n == 0 || l.nnz() == 0 || iters == 0 {
        return 0.0;
    }
    let mut rng = SplitMix64::new(seed);
    let mut v = vec![0.0f64; n];
    loop {
        for vi in v.iter_mut() {
            *vi = rng.next_normal();
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|vi| *vi /= norm);
            break;
        }
    }

    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alphas: Vec<f64> = Vec::with_capacity(iters);
    let mut betas: Vec<f64> = Vec::new();
    for j in 0..iters.min(n) {
        let vj = basis[j].clone();
        let mut w = l.matvec(&vj);
        let alpha = dot(&w, &vj);
        alphas.push(alpha);
        for (wi, vi) in w.iter_mut().zip(&vj) {
            *wi -= alpha * vi;
        }
        if j > 0 {
            let beta_prev = betas[j - 1];
            for (wi, vi) in w.iter_mut().zip(&basis[j - 1]) {
                *wi -= beta_prev * vi;
            }
        }
        // full reorthogonalization keeps the basis usable past the point
        // where three-term recurrence orthogonality decays
        for u in &basis {
            let c = dot(&w, u);
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= c * ui;
            }
        }
        let beta = dot(&w, &w).sqrt();
        if !(beta > 1e-14 * alpha.abs().max(1.0)) {
            break;
        }
        if j + 1 < iters.min(n) {
            betas.push(beta);
            w.iter_mut().for_each(|wi| *wi /= beta);
            basis.push(w);
        }
    }
    tridiag_lmax(&alphas, &betas)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest eigenvalue of a symmetric tridiagonal matrix by Sturm-count
/// bisection inside its Gershgorin interval.
fn tridiag_lmax(alphas: &[f64], betas: &[f64]) -> f64 {
    let k = alphas.len();
    if k == 0 {
        return 0.0;
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..k {
        let left = if i > 0 { betas[i - 1].abs() } else { 0.0 };
        let right = if i < betas.len() { betas[i].abs() } else { 0.0 };
        lo = lo.min(alphas[i] - left - right);
        hi = hi.max(alphas[i] + left + right);
    }
    if lo == hi {
        return hi;
    }
    // count of eigenvalues below x, from the signs of the LDL^T pivots
    let count_below = |x: f64| -> usize {
        let mut cnt = 0;
        let mut d = 1.0f64;
        for i in 0..k {
            let off = if i > 0 { betas[i - 1] * betas[i - 1] } else { 0.0 };
            d = alphas[i] - x - off / d;
            if d == 0.0 {
                d = f64::MIN_POSITIVE;
            }
            if d < 0.0 {
                cnt += 1;
            }
        }
        cnt
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(mid) >= k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
