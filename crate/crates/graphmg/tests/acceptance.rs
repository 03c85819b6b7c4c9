//! Acceptance suite: one test that pins the solver's behavioral contracts.
//!
//! Each criterion prints a single `PASS`/`FAIL` line with a measured detail,
//! and the test panics at the end if any criterion failed. The criteria
//! cover exactness of elimination, agreement of the semiring selection with
//! a brute-force oracle, validity of every coarse operator, independence
//! from the simulated block grid, convergence and work budgets on reference
//! fixtures, smoother identities, and the V/K cycle trade-off.
//!
//! Run `cargo test --test acceptance -- --nocapture` to see the table.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};

use graphmg::aggregation::{aggregate, Assignment};
use graphmg::elimination::{
    build_elimination_level, elim_prolong, elim_restrict, hash64, select_elimination,
};
use graphmg::generate;
use graphmg::rng::SplitMix64;
use graphmg::solver::smooth::{chebyshev_smooth, estimate_lmax};
use graphmg::solver::{GroundedLu, Level};
use graphmg::strength::{affinity, normalize_strength, test_vectors};
use graphmg::{
    kcycle_solve, laplacian_from_graph, pcg_solve, setup_hierarchy, validate_laplacian,
    BlockLayout, Graph, Hierarchy, LaplacianMatrix, SolverParams, SparseMatrix,
};

// ---------------------------------------------------------------------------
// shared helpers

fn rand_rhs(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = SplitMix64::new(seed);
    let mut b: Vec<f64> = (0..n).map(|_| rng.next_normal()).collect();
    let mean = b.iter().sum::<f64>() / n as f64;
    b.iter_mut().for_each(|v| *v -= mean);
    b
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn zero_mean(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len().max(1) as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

fn dense_of(l: &LaplacianMatrix) -> DMatrix<f64> {
    let n = l.nrows();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (i, j, &v) in l.matrix().entries() {
        a[(i, j)] = v;
    }
    a
}

/// Minimum-norm solution of the singular system via a dense SVD
/// pseudo-inverse; the reference the multigrid results are compared against.
fn min_norm_solve(l: &LaplacianMatrix, b: &[f64]) -> Vec<f64> {
    let a = dense_of(l);
    let svd = a.svd(true, true);
    let cutoff = 1e-10 * svd.singular_values.max();
    let x = svd
        .solve(&DVector::from_column_slice(b), cutoff)
        .expect("svd solve cannot fail with both factors computed");
    x.iter().copied().collect()
}

fn true_residual(l: &LaplacianMatrix, x: &[f64], b: &[f64]) -> f64 {
    let lx = l.matrix().matvec(x);
    norm2(&b.iter().zip(&lx).map(|(bi, li)| bi - li).collect::<Vec<_>>())
}

/// Twenty small fixtures (all `n <= 200`, so dense spectral oracles stay
/// cheap) spanning the structures the solver is expected to face: chains,
/// rings, hubs, cliques, lattices, scale-free and small-world graphs, and
/// random connected graphs of varying density.
fn corpus() -> Vec<(&'static str, Graph)> {
    vec![
        ("path40", generate::path(40).unwrap()),
        ("path193", generate::path(193).unwrap()),
        ("cycle60", generate::cycle(60).unwrap()),
        ("cycle97", generate::cycle(97).unwrap()),
        ("star50", generate::star(50).unwrap()),
        ("star120", generate::star(120).unwrap()),
        ("complete24", generate::complete(24).unwrap()),
        ("grid8x8", generate::grid2d(8, 8).unwrap()),
        ("grid13x9", generate::grid2d(13, 9).unwrap()),
        ("grid5x5x5", generate::grid3d(5, 5, 5).unwrap()),
        ("grid6x4x3", generate::grid3d(6, 4, 3).unwrap()),
        ("pa120", generate::preferential_attachment(120, 4, 17).unwrap()),
        ("pa150", generate::preferential_attachment(150, 3, 5).unwrap()),
        ("pa200", generate::preferential_attachment(200, 2, 9).unwrap()),
        ("sw120", generate::small_world(120, 3, 0.1, 3).unwrap()),
        ("sw160", generate::small_world(160, 2, 0.05, 11).unwrap()),
        ("rc60", generate::random_connected(60, 140, 1).unwrap()),
        ("rc80", generate::random_connected(80, 20, 4).unwrap()),
        ("rc120", generate::random_connected(120, 300, 2).unwrap()),
        ("rc200", generate::random_connected(200, 420, 3).unwrap()),
    ]
}

/// Forces real coarsening on the small fixtures: the default nonzero target
/// would leave them as single-level direct solves.
fn deep_params() -> SolverParams {
    SolverParams {
        coarse_nnz: 30,
        ..SolverParams::default()
    }
}

/// The large reference fixtures and their pinned V-cycle iteration counts.
/// The counts are deterministic; the +2 slack in the convergence criterion
/// only absorbs future rounding-level changes.
fn reference_fixtures() -> Vec<(&'static str, Graph, usize)> {
    vec![
        ("path10000", generate::path(10000).unwrap(), 48),
        ("grid64x64", generate::grid2d(64, 64).unwrap(), 31),
        ("grid16x16x16", generate::grid3d(16, 16, 16).unwrap(), 25),
        (
            "pa20000",
            generate::preferential_attachment(20000, 4, 8).unwrap(),
            43,
        ),
        (
            "smallworld20000",
            generate::small_world(20000, 4, 0.1, 8).unwrap(),
            15,
        ),
    ]
}

// ---------------------------------------------------------------------------
// criterion 1: two-level elimination is exact

/// Eliminating an independent low-degree set transfers the system to the
/// Schur complement exactly, so a direct coarse solve prolonged back must
/// solve the fine system to rounding accuracy and agree with the dense
/// minimum-norm solution.
fn elimination_is_exact() -> Result<String, String> {
    let start = Instant::now();
    let mut worst_residual = 0.0f64;
    let mut worst_deviation = 0.0f64;
    for trial in 0..50u64 {
        let n = 8 + (trial as usize % 53);
        let extra = (trial as usize * 3) % (n + 1);
        let g = generate::random_connected(n, extra, 1000 + trial)
            .map_err(|e| format!("trial {trial}: generator failed: {e}"))?;
        let l = laplacian_from_graph(&g);

        let dist = BlockLayout::identity(1, 1, n)
            .partition(l.matrix())
            .map_err(|e| format!("trial {trial}: partition failed: {e}"))?;
        let f = select_elimination(&dist, 4).map_err(|e| format!("trial {trial}: {e}"))?;
        if f.is_empty() {
            return Err(format!("trial {trial} (n={n}): no vertices selected"));
        }
        let level = build_elimination_level(&l, &f).map_err(|e| format!("trial {trial}: {e}"))?;

        let b = rand_rhs(n, 77 + trial);
        let bc = elim_restrict(&level, &b);
        let lu =
            GroundedLu::factor(&level.l_next).map_err(|e| format!("trial {trial}: {e}"))?;
        let xc = lu.solve(&bc);
        let mut x = elim_prolong(&level, &xc, &b);

        let rel_res = true_residual(&l, &x, &b) / norm2(&b);
        worst_residual = worst_residual.max(rel_res);
        if rel_res > 1e-10 {
            return Err(format!(
                "trial {trial} (n={n}, |f|={}): relative residual {rel_res:.3e} exceeds 1e-10",
                f.len()
            ));
        }

        let reference = min_norm_solve(&l, &b);
        zero_mean(&mut x);
        let dev: f64 = x
            .iter()
            .zip(&reference)
            .map(|(a, r)| (a - r) * (a - r))
            .sum::<f64>()
            .sqrt()
            / norm2(&reference).max(1e-300);
        worst_deviation = worst_deviation.max(dev);
        if dev > 1e-7 {
            return Err(format!(
                "trial {trial} (n={n}): solution deviates from dense minimum-norm by {dev:.3e}"
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(10) {
        return Err(format!("50 graphs took {elapsed:.2?}, budget is 10s"));
    }
    Ok(format!(
        "50 graphs, worst residual {worst_residual:.2e}, worst deviation {worst_deviation:.2e}, {elapsed:.2?}"
    ))
}

// ---------------------------------------------------------------------------
// criterion 2: semiring selection matches a brute-force oracle

/// Direct restatement of the selection rule: a vertex is selected exactly
/// when it qualifies by degree and carries the smallest `(hash, index)` key
/// among the qualifying vertices of its closed neighborhood.
fn brute_force_selection(m: &SparseMatrix<f64>, max_degree: usize) -> Vec<usize> {
    let degrees = m.offdiag_degrees();
    let qualifies: Vec<bool> = degrees.iter().map(|&d| d <= max_degree).collect();
    let key = |i: usize| (hash64(i), i as u64);
    (0..m.nrows())
        .filter(|&i| {
            if !qualifies[i] {
                return false;
            }
            let mut best = key(i);
            let (cols, _) = m.row(i);
            for &j in cols {
                if qualifies[j] {
                    best = best.min(key(j));
                }
            }
            best == key(i)
        })
        .collect()
}

fn selection_matches_brute_force(corpus: &[(&'static str, Graph)]) -> Result<String, String> {
    let grids = [(1usize, 1usize), (2, 2), (3, 2)];
    let mut checked = 0usize;
    for (name, g) in corpus {
        let l = laplacian_from_graph(g);
        let n = l.nrows();
        let expected = brute_force_selection(l.matrix(), 4);
        for &(r, c) in &grids {
            let dist = BlockLayout::identity(r, c, n)
                .partition(l.matrix())
                .map_err(|e| format!("{name}: partition {r}x{c} failed: {e}"))?;
            let got = select_elimination(&dist, 4).map_err(|e| format!("{name}: {e}"))?;
            if got != expected {
                return Err(format!(
                    "{name}: {r}x{c} grid selected {} vertices, oracle selected {}",
                    got.len(),
                    expected.len()
                ));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} selections over {} fixtures and {} grid shapes agree exactly",
        corpus.len(),
        grids.len()
    ))
}

// ---------------------------------------------------------------------------
// criterion 3: every operator in every hierarchy is a valid Laplacian

fn coarse_operators_stay_laplacian(
    corpus: &[(&'static str, Graph)],
    references: &[(&'static str, LaplacianMatrix, Hierarchy)],
) -> Result<String, String> {
    let mut operators = 0usize;
    let mut hierarchies = 0usize;
    let mut check = |name: &str, h: &Hierarchy| -> Result<(), String> {
        hierarchies += 1;
        for lvl in 0..h.num_operators() {
            let violations = validate_laplacian(h.matrix_at(lvl).matrix());
            if let Some(first) = violations.first() {
                return Err(format!(
                    "{name}: level {lvl} has {} violations, first: {first}",
                    violations.len()
                ));
            }
            operators += 1;
        }
        Ok(())
    };
    for (name, g) in corpus {
        let l = laplacian_from_graph(g);
        let h = setup_hierarchy(&l, &deep_params()).map_err(|e| format!("{name}: {e}"))?;
        check(name, &h)?;
    }
    for (name, _, h) in references {
        check(name, h)?;
    }
    Ok(format!(
        "{operators} operators across {hierarchies} hierarchies pass validation"
    ))
}

// ---------------------------------------------------------------------------
// criterion 4: nothing depends on the simulated block grid

fn results_ignore_block_grid(corpus: &[(&'static str, Graph)]) -> Result<String, String> {
    let grids = [(1usize, 1usize), (1, 4), (2, 2), (3, 2)];
    for (name, g) in corpus {
        let l = laplacian_from_graph(g);
        let n = l.nrows();

        // raw selection on the natural ordering
        let mut selections: Vec<Vec<usize>> = Vec::new();
        for &(r, c) in &grids {
            let dist = BlockLayout::identity(r, c, n)
                .partition(l.matrix())
                .map_err(|e| format!("{name}: {e}"))?;
            selections.push(select_elimination(&dist, 4).map_err(|e| format!("{name}: {e}"))?);
        }
        if selections.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("{name}: elimination set differs across grids"));
        }

        // aggregation from one shared strength matrix
        let tv = test_vectors(&l, 4, 3, 2.0 / 3.0, 42).map_err(|e| format!("{name}: {e}"))?;
        let s = normalize_strength(&affinity(&l, &tv).map_err(|e| format!("{name}: {e}"))?)
            .map_err(|e| format!("{name}: {e}"))?;
        let mut assignments: Vec<Assignment> = Vec::new();
        for &(r, c) in &grids {
            let layout = BlockLayout::identity(r, c, n);
            assignments.push(
                aggregate(&s, &layout, 10, 8).map_err(|e| format!("{name}: {e}"))?,
            );
        }
        if assignments.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("{name}: aggregation assignment differs across grids"));
        }

        // full setup, including the seeded scatter permutation on the finest level
        type Shape = (bool, Vec<(String, usize, usize)>);
        let mut shapes: Vec<Shape> = Vec::new();
        for &(r, c) in &grids {
            let params = SolverParams {
                grid_rows: r,
                grid_cols: c,
                ..deep_params()
            };
            let h = setup_hierarchy(&l, &params).map_err(|e| format!("{name}: {e}"))?;
            let summary = h
                .level_summaries()
                .into_iter()
                .map(|info| (info.kind, info.n, info.nnz))
                .collect();
            shapes.push((h.stalled, summary));
        }
        if shapes.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("{name}: hierarchy shapes differ across grids"));
        }
    }
    Ok(format!(
        "{} fixtures produce identical selections, assignments, and hierarchies on 1x1, 1x4, 2x2, 3x2 grids",
        corpus.len()
    ))
}

// ---------------------------------------------------------------------------
// criterion 5: convergence on the reference fixtures

fn reference_fixtures_converge(
    references: &[(&'static str, LaplacianMatrix, Hierarchy)],
    baselines: &[(&'static str, usize)],
) -> Result<String, String> {
    let start = Instant::now();
    let mut details = Vec::new();
    for ((name, l, h), &(bname, baseline)) in references.iter().zip(baselines) {
        assert_eq!(*name, bname);
        let b = rand_rhs(l.nrows(), 42);
        let out = pcg_solve(h, &b).map_err(|e| format!("{name}: {e}"))?;
        if !out.converged {
            return Err(format!(
                "{name}: no convergence in {} iterations",
                out.iterations
            ));
        }
        let rel = true_residual(l, &out.x, &b) / norm2(&b);
        if rel > 2e-8 {
            return Err(format!(
                "{name}: true relative residual {rel:.3e} exceeds 2e-8"
            ));
        }
        if out.iterations > baseline + 2 {
            return Err(format!(
                "{name}: {} iterations exceeds pinned baseline {baseline} + 2",
                out.iterations
            ));
        }
        details.push(format!("{name} {}it", out.iterations));
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        return Err(format!("fixtures took {elapsed:.2?}, budget is 120s"));
    }
    Ok(format!("{} ({elapsed:.2?})", details.join(", ")))
}

// ---------------------------------------------------------------------------
// criterion 6: work per digit of accuracy on the scale-free fixture

fn scale_free_work_budget(
    references: &[(&'static str, LaplacianMatrix, Hierarchy)],
) -> Result<String, String> {
    let (name, l, h) = references
        .iter()
        .find(|(name, _, _)| *name == "pa20000")
        .expect("fixture list contains pa20000");
    let b = rand_rhs(l.nrows(), 42);
    let out = pcg_solve(h, &b).map_err(|e| format!("{name}: {e}"))?;
    if !out.converged {
        return Err(format!("{name}: did not converge"));
    }
    let r0 = *out.residuals.first().unwrap();
    let rf = *out.residuals.last().unwrap();
    let digits = (r0 / rf).log10();
    let wda = out.work.total() / digits;
    if wda > 50.0 {
        return Err(format!("{name}: work per digit {wda:.1} exceeds 50"));
    }
    Ok(format!(
        "{name}: work per digit {wda:.1} (<= 50), {} iterations for {digits:.1} digits",
        out.iterations
    ))
}

// ---------------------------------------------------------------------------
// criterion 7: smoother identities

fn smoother_contracts(corpus: &[(&'static str, Graph)]) -> Result<String, String> {
    // degree-1 Chebyshev collapses to a Richardson step
    let mut worst_gap = 0.0f64;
    for trial in 0..10u64 {
        let n = 25 + 15 * trial as usize;
        let g = generate::random_connected(n, (trial as usize * 13) % 60, 900 + trial)
            .map_err(|e| format!("trial {trial}: {e}"))?;
        let l = laplacian_from_graph(&g);
        let lmax = estimate_lmax(l.matrix(), 10, 5 + trial);
        let (lo, hi) = (0.3 * lmax, 1.1 * lmax);

        let b = rand_rhs(n, 31 + trial);
        let x0 = rand_rhs(n, 63 + trial);
        let mut cheb = x0.clone();
        chebyshev_smooth(l.matrix(), &b, &mut cheb, 1, lo, hi)
            .map_err(|e| format!("trial {trial}: {e}"))?;

        let omega = 2.0 / (lo + hi);
        let lx = l.matrix().matvec(&x0);
        let rich: Vec<f64> = x0
            .iter()
            .zip(b.iter().zip(&lx))
            .map(|(xi, (bi, li))| xi + omega * (bi - li))
            .collect();

        let scale = rich.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let gap = cheb
            .iter()
            .zip(&rich)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            / scale;
        worst_gap = worst_gap.max(gap);
        if gap > 1e-14 {
            return Err(format!(
                "trial {trial} (n={n}): degree-1 step differs from Richardson by {gap:.3e}"
            ));
        }
    }

    // the Lanczos bound lands inside [0.9, 1.0] of the true largest eigenvalue
    let mut worst_ratio = 1.0f64;
    for (name, g) in corpus {
        let l = laplacian_from_graph(g);
        let exact = dense_of(&l)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(0.0f64, |m, &v| m.max(v));
        let est = estimate_lmax(l.matrix(), 10, 0);
        let ratio = est / exact;
        worst_ratio = worst_ratio.min(ratio);
        if !(0.9..=1.0 + 1e-9).contains(&ratio) {
            return Err(format!(
                "{name}: estimate {est:.6} vs exact {exact:.6}, ratio {ratio:.4} outside [0.9, 1.0]"
            ));
        }
    }
    Ok(format!(
        "degree-1 matches Richardson to {worst_gap:.1e}; eigenvalue estimates within [{worst_ratio:.3}, 1.0] of exact on {} fixtures",
        corpus.len()
    ))
}

// ---------------------------------------------------------------------------
// criterion 8: the K-cycle buys fewer iterations with more work per iteration

fn cycle_tradeoff() -> Result<String, String> {
    let g = generate::path(10000).map_err(|e| e.to_string())?;
    let l = laplacian_from_graph(&g);
    let b = rand_rhs(10000, 42);

    // a hierarchy dominated by aggregation levels: disable elimination via the
    // gate and coarsen further down
    let params = SolverParams {
        elim_gate: 0.9,
        coarse_nnz: 200,
        ..SolverParams::default()
    };
    let h = setup_hierarchy(&l, &params).map_err(|e| e.to_string())?;
    let agg_levels = h
        .levels
        .iter()
        .filter(|lvl| matches!(lvl, Level::Aggregation(_)))
        .count();
    if agg_levels < 4 {
        return Err(format!(
            "test hierarchy has only {agg_levels} aggregation levels, need at least 4"
        ));
    }
    let v = pcg_solve(&h, &b).map_err(|e| e.to_string())?;
    let k = kcycle_solve(&h, &b).map_err(|e| e.to_string())?;
    if !(v.converged && k.converged) {
        return Err("cycle comparison run did not converge".into());
    }
    let v_cost = v.work.total() / v.iterations as f64;
    let k_cost = k.work.total() / k.iterations as f64;
    if k_cost <= v_cost {
        return Err(format!(
            "K-cycle cost/iteration {k_cost:.2} not above V-cycle {v_cost:.2}"
        ));
    }

    // on the same graph with default setup, the extra work must buy iterations
    let hd = setup_hierarchy(&l, &SolverParams::default()).map_err(|e| e.to_string())?;
    let vd = pcg_solve(&hd, &b).map_err(|e| e.to_string())?;
    let kd = kcycle_solve(&hd, &b).map_err(|e| e.to_string())?;
    if !(vd.converged && kd.converged) {
        return Err("default-setup comparison run did not converge".into());
    }
    if kd.iterations > vd.iterations {
        return Err(format!(
            "K-cycle took {} iterations, V-cycle {}",
            kd.iterations, vd.iterations
        ));
    }
    Ok(format!(
        "{agg_levels} aggregation levels: {k_cost:.1} vs {v_cost:.1} work/iteration; defaults: {} vs {} iterations",
        kd.iterations, vd.iterations
    ))
}

// ---------------------------------------------------------------------------
// criterion 9: hierarchy shape budgets

fn hierarchy_budgets(
    corpus: &[(&'static str, Graph)],
    references: &[(&'static str, LaplacianMatrix, Hierarchy)],
) -> Result<String, String> {
    let mut max_levels = 0usize;
    let mut max_complexity = 0.0f64;
    let mut stalls = 0usize;
    let mut check = |name: &str, h: &Hierarchy| -> Result<(), String> {
        if h.levels.len() > 40 {
            return Err(format!("{name}: {} levels exceeds 40", h.levels.len()));
        }
        let coarsest_nnz = h.coarsest().nnz();
        if coarsest_nnz > 1000 && !h.stalled {
            return Err(format!(
                "{name}: coarsest operator has {coarsest_nnz} nonzeros without a recorded stall"
            ));
        }
        let complexity = h.operator_complexity();
        if complexity > 3.0 {
            return Err(format!(
                "{name}: operator complexity {complexity:.2} exceeds 3.0"
            ));
        }
        max_levels = max_levels.max(h.levels.len());
        max_complexity = max_complexity.max(complexity);
        stalls += usize::from(h.stalled);
        Ok(())
    };
    for (name, g) in corpus {
        let l = laplacian_from_graph(g);
        let h = setup_hierarchy(&l, &deep_params()).map_err(|e| format!("{name}: {e}"))?;
        check(name, &h)?;
    }
    for (name, _, h) in references {
        check(name, h)?;
    }
    Ok(format!(
        "max {max_levels} levels, max operator complexity {max_complexity:.2}, {stalls} recorded stalls"
    ))
}

// ---------------------------------------------------------------------------

#[test]
fn acceptance() {
    let corpus = corpus();
    let baselines: Vec<(&'static str, usize)> = reference_fixtures()
        .iter()
        .map(|(name, _, iters)| (*name, *iters))
        .collect();
    let references: Vec<(&'static str, LaplacianMatrix, Hierarchy)> = reference_fixtures()
        .into_iter()
        .map(|(name, g, _)| {
            let l = laplacian_from_graph(&g);
            let h = setup_hierarchy(&l, &SolverParams::default())
                .unwrap_or_else(|e| panic!("{name}: setup failed: {e}"));
            (name, l, h)
        })
        .collect();

    let mut failed = Vec::new();
    let mut run = |idx: usize, name: &str, outcome: Result<String, String>| match outcome {
        Ok(detail) => println!("criterion {idx} ({name}): PASS — {detail}"),
        Err(reason) => {
            println!("criterion {idx} ({name}): FAIL — {reason}");
            failed.push(idx);
        }
    };

    run(1, "two-level elimination is exact", elimination_is_exact());
    run(
        2,
        "selection matches brute force",
        selection_matches_brute_force(&corpus),
    );
    run(
        3,
        "coarse operators stay Laplacian",
        coarse_operators_stay_laplacian(&corpus, &references),
    );
    run(
        4,
        "results ignore the block grid",
        results_ignore_block_grid(&corpus),
    );
    run(
        5,
        "reference fixtures converge",
        reference_fixtures_converge(&references, &baselines),
    );
    run(
        6,
        "scale-free work budget",
        scale_free_work_budget(&references),
    );
    run(7, "smoother contracts", smoother_contracts(&corpus));
    run(8, "cycle trade-off", cycle_tradeoff());
    run(
        9,
        "hierarchy shape budgets",
        hierarchy_budgets(&corpus, &references),
    );

    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
