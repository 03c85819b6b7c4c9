//! Command-line front end for the graphmg solver.
//!
//! Three subcommands: `solve` runs the full setup-and-solve pipeline on a
//! graph file and optionally writes the JSON report, `hierarchy` prints the
//! per-level coarsening table without solving, and `bench` runs a named
//! fixture suite and emits one CSV row per graph.
//!
//! Exit codes: 0 on success, 1 on any parse or validation error, 2 when the
//! solver ran but did not reach the requested tolerance.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use graphmg::generate;
use graphmg::io::{load_graph, GraphFormat};
use graphmg::rng::SplitMix64;
use graphmg::solver::CoarseSolver;
use graphmg::{
    laplacian_from_graph, setup_hierarchy, solve, CycleKind, Graph, SolverParams,
};

#[derive(Parser)]
#[command(name = "graphmg", version, about = "Multigrid solver for graph Laplacians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve L x = b for a graph file and report convergence.
    Solve(SolveArgs),
    /// Build the hierarchy and print the per-level table, without solving.
    Hierarchy(HierarchyArgs),
    /// Solve a fixture suite and emit per-graph metrics as CSV.
    Bench(BenchArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    /// Matrix Market coordinate file.
    MatrixMarket,
    /// Whitespace-separated `u v [w]` lines.
    EdgeList,
}

impl From<FormatArg> for GraphFormat {
    fn from(f: FormatArg) -> GraphFormat {
        match f {
            FormatArg::MatrixMarket => GraphFormat::MatrixMarket,
            FormatArg::EdgeList => GraphFormat::EdgeList,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum CycleArg {
    V,
    K,
}

impl From<CycleArg> for CycleKind {
    fn from(c: CycleArg) -> CycleKind {
        match c {
            CycleArg::V => CycleKind::V,
            CycleArg::K => CycleKind::K,
        }
    }
}

/// `RxC`, e.g. `2x2`.
fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected RxC, e.g. 2x2, got '{s}'"))?;
    let rows: usize = r.trim().parse().map_err(|_| format!("bad grid rows '{r}'"))?;
    let cols: usize = c.trim().parse().map_err(|_| format!("bad grid cols '{c}'"))?;
    if rows == 0 || cols == 0 {
        return Err("grid dimensions must be positive".into());
    }
    Ok((rows, cols))
}

#[derive(Args)]
struct InputArgs {
    /// Graph file to read.
    graph: PathBuf,
    /// Input format; inferred from the extension when omitted (`.mtx`/`.mm`
    /// mean Matrix Market, anything else an edge list).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Keep only the largest connected component instead of failing on
    /// disconnected input.
    #[arg(long)]
    largest_component: bool,
}

#[derive(Args)]
struct SetupArgs {
    /// Maximum number of coarsening levels.
    #[arg(long, default_value_t = 40)]
    max_levels: usize,
    /// Chebyshev smoother degree.
    #[arg(long, default_value_t = 2)]
    cheby_degree: usize,
    /// Seed for setup randomness (test vectors, scatter permutation) and the
    /// random right-hand side.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Simulated block grid for the distributed kernels, as RxC.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
}

impl SetupArgs {
    fn apply(&self, params: &mut SolverParams) {
        params.max_levels = self.max_levels;
        params.cheby_degree = self.cheby_degree;
        params.seed = self.seed;
        if let Some((r, c)) = self.grid {
            params.grid_rows = r;
            params.grid_cols = c;
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Relative residual tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Outer iteration: v for CG with a V-cycle preconditioner, k for the
    /// recursively accelerated K-cycle.
    #[arg(long, value_enum, default_value_t = CycleArg::V)]
    cycle: CycleArg,
    /// Right-hand side: `random` (seeded unit normals, mean removed) or a
    /// file with one value per vertex.
    #[arg(long, default_value = "random")]
    rhs: String,
    /// Iteration cap.
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    /// Write the full JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    #[command(flatten)]
    setup: SetupArgs,
}

#[derive(Args)]
struct HierarchyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    setup: SetupArgs,
}

#[derive(Copy, Clone, ValueEnum)]
enum Suite {
    /// Generated graphs around a few thousand vertices; runs in seconds.
    Small,
    /// The large regression fixtures (10k-20k vertices).
    Reference,
}

#[derive(Args)]
struct BenchArgs {
    /// Fixture suite to run.
    #[arg(long, value_enum, default_value_t = Suite::Small)]
    suite: Suite,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Outer iteration used for every fixture.
    #[arg(long, value_enum, default_value_t = CycleArg::V)]
    cycle: CycleArg,
    /// Seed for setup randomness and right-hand sides.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`graphmg ... | head`) instead of
    // panicking in println!.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Hierarchy(args) => run_hierarchy(args),
        Command::Bench(args) => run_bench(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Loads, validates, and optionally trims the input graph. Returns the graph
/// and a display name derived from the file name.
fn read_graph(input: &InputArgs) -> Result<(Graph, String), String> {
    let loaded = load_graph(&input.graph, input.format.map(Into::into))
        .map_err(|e| format!("{}: {e}", input.graph.display()))?;
    if loaded.self_loops_dropped > 0 {
        eprintln!("note: dropped {} self-loop(s)", loaded.self_loops_dropped);
    }
    let mut graph = loaded.graph;
    let components = graph.components().len();
    if components > 1 {
        if input.largest_component {
            let full = graph.num_vertices();
            graph = graph.largest_component();
            eprintln!(
                "note: keeping largest of {components} components ({} of {full} vertices)",
                graph.num_vertices()
            );
        } else {
            return Err(format!(
                "{}: graph is disconnected ({components} components); pass --largest-component to solve the largest one",
                input.graph.display()
            ));
        }
    }
    let name = input
        .graph
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| input.graph.display().to_string());
    Ok((graph, name))
}

fn random_rhs(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = SplitMix64::new(seed);
    let mut b: Vec<f64> = (0..n).map(|_| rng.next_normal()).collect();
    let mean = b.iter().sum::<f64>() / n.max(1) as f64;
    b.iter_mut().for_each(|v| *v -= mean);
    b
}

fn rhs_from_file(path: &Path, n: usize) -> Result<Vec<f64>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let values: Result<Vec<f64>, String> = text
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| format!("{}: bad value '{t}'", path.display()))
        })
        .collect();
    let values = values?;
    if values.len() != n {
        return Err(format!(
            "{}: right-hand side has {} values, graph has {n} vertices",
            path.display(),
            values.len()
        ));
    }
    Ok(values)
}

fn run_solve(args: SolveArgs) -> Result<ExitCode, String> {
    let (graph, name) = read_graph(&args.input)?;
    let l = laplacian_from_graph(&graph);

    let mut params = SolverParams {
        tol: args.tol,
        cycle: args.cycle.into(),
        max_iters: args.max_iters,
        ..SolverParams::default()
    };
    args.setup.apply(&mut params);

    let b = if args.rhs == "random" {
        random_rhs(l.nrows(), params.seed.wrapping_add(1))
    } else {
        rhs_from_file(Path::new(&args.rhs), l.nrows())?
    };

    let (_, report) = solve(&l, &b, &params, &name).map_err(|e| e.to_string())?;

    println!(
        "{name}: {} vertices, {} edges, {} operators (complexity {:.2})",
        report.n,
        graph.num_edges(),
        report.levels.len(),
        report.operator_complexity
    );
    let rel = report
        .residuals
        .last()
        .copied()
        .unwrap_or(0.0)
        / report.residuals.first().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);
    if report.converged {
        println!(
            "converged in {} iterations to relative residual {rel:.2e}",
            report.iterations
        );
        match (report.wda, report.tda) {
            (Some(wda), Some(tda)) => {
                println!("work {:.1} units, wda {wda:.1}, tda {tda:.3e} s/digit", report.work_units)
            }
            _ => println!("work {:.1} units", report.work_units),
        }
    } else {
        println!(
            "did not converge within {} iterations (relative residual {rel:.2e})",
            report.iterations
        );
    }
    println!(
        "setup {:.3}s, solve {:.3}s",
        report.setup_seconds, report.solve_seconds
    );

    if let Some(path) = &args.json {
        let text = serde_json::to_string_pretty(&report)
            .map_err(|e| format!("serializing report: {e}"))?;
        fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?;
        println!("wrote {}", path.display());
    }

    Ok(if report.converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn run_hierarchy(args: HierarchyArgs) -> Result<ExitCode, String> {
    let (graph, name) = read_graph(&args.input)?;
    let l = laplacian_from_graph(&graph);
    let mut params = SolverParams::default();
    args.setup.apply(&mut params);

    let h = setup_hierarchy(&l, &params).map_err(|e| e.to_string())?;

    println!("{name}: hierarchy with {} operators", h.num_operators());
    println!("{:>5}  {:<12} {:>10} {:>12}", "level", "kind", "n", "nnz");
    for (i, info) in h.level_summaries().iter().enumerate() {
        println!("{:>5}  {:<12} {:>10} {:>12}", i, info.kind, info.n, info.nnz);
    }
    let bottom = match &h.coarse {
        CoarseSolver::Direct(lu) => format!("dense LU on {} vertices", lu.nrows()),
        CoarseSolver::Chebyshev { degree, .. } => {
            format!("degree-{degree} Chebyshev fallback")
        }
    };
    println!(
        "operator complexity {:.2}, bottom solver: {bottom}",
        h.operator_complexity()
    );
    if h.stalled {
        println!("note: coarsening stalled before reaching the size target");
    }
    Ok(ExitCode::SUCCESS)
}

fn bench_fixtures(suite: Suite) -> Vec<(&'static str, Graph)> {
    let build = |res: Result<Graph, graphmg::Error>| res.expect("fixture parameters are valid");
    match suite {
        Suite::Small => vec![
            ("path1000", build(generate::path(1000))),
            ("cycle1000", build(generate::cycle(1000))),
            ("star500", build(generate::star(500))),
            ("grid32x32", build(generate::grid2d(32, 32))),
            ("grid8x8x8", build(generate::grid3d(8, 8, 8))),
            ("pa2000", build(generate::preferential_attachment(2000, 4, 8))),
            ("smallworld2000", build(generate::small_world(2000, 4, 0.1, 8))),
        ],
        Suite::Reference => vec![
            ("path10000", build(generate::path(10000))),
            ("grid64x64", build(generate::grid2d(64, 64))),
            ("grid16x16x16", build(generate::grid3d(16, 16, 16))),
            ("pa20000", build(generate::preferential_attachment(20000, 4, 8))),
            ("smallworld20000", build(generate::small_world(20000, 4, 0.1, 8))),
        ],
    }
}

fn run_bench(args: BenchArgs) -> Result<ExitCode, String> {
    let params = SolverParams {
        cycle: args.cycle.into(),
        seed: args.seed,
        ..SolverParams::default()
    };

    let mut csv = String::from("graph,n,nnz,levels,iters,wda,tda,opcx\n");
    let mut all_converged = true;
    for (name, graph) in bench_fixtures(args.suite) {
        let l = laplacian_from_graph(&graph);
        let b = random_rhs(l.nrows(), params.seed.wrapping_add(1));
        let (_, report) = solve(&l, &b, &params, name).map_err(|e| format!("{name}: {e}"))?;
        all_converged &= report.converged;
        let wda = report.wda.map(|v| format!("{v:.2}")).unwrap_or_default();
        let tda = report.tda.map(|v| format!("{v:.4e}")).unwrap_or_default();
        writeln!(
            csv,
            "{name},{},{},{},{},{wda},{tda},{:.3}",
            report.n,
            report.nnz,
            report.levels.len(),
            report.iterations,
            report.operator_complexity
        )
        .expect("writing to a string cannot fail");
        eprintln!(
            "{name}: {} iterations, converged={}",
            report.iterations, report.converged
        );
    }

    match &args.csv {
        Some(path) => {
            fs::write(path, &csv).map_err(|e| format!("{}: {e}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(if all_converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
