//! Command-line front end: build graphs, solve, compute Cheeger constants,
//! run verification suites and exponent sweeps.
//!
//! Exit codes: 0 success / all checks pass, 1 a check failed or a solve did
//! not converge, 2 usage or input error.

use std::fs;
use std::io::{self, Read, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use plap::cheeger::dirichlet_cheeger;
use plap::graph::{make_cycle, make_path, make_star, make_tadpole, parse_graph, write_edge_list, Graph, TadpoleSpec};
use plap::spectral::{first_eigenpair, EigenResult};
use plap::verify::{self, reports_to_csv, Claim, VerificationReport, VerifyConfig, DEFAULT_P_GRID};
use plap::Error;

#[derive(Parser)]
#[command(name = "plap", version, about = "Dirichlet p-Laplacian eigenvalues and tadpole extremality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a named graph as an edge list or JSON.
    Make {
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Head cycle length (tadpole only).
        #[arg(long)]
        i: Option<usize>,
        #[arg(long, value_enum, default_value_t = GraphFormat::Edges)]
        format: GraphFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First Dirichlet eigenpair of a graph file ("-" for stdin).
    Eig {
        graph: String,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Dirichlet Cheeger constant of a graph file ("-" for stdin).
    Cheeger {
        graph: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite; exits 0 only if every report passes.
    Verify(VerifyArgs),
    /// λ_{1,p} over a grid of exponents as CSV (p, lambda, residual_inf,
    /// iterations, converged).
    Sweep {
        graph: String,
        /// Comma-separated exponents.
        #[arg(long = "p-grid", alias = "p", value_delimiter = ',', num_args = 0..)]
        p_grid: Vec<f64>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Tadpole,
    Path,
    Cycle,
    Star,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum GraphFormat {
    Edges,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol_residual: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Random starts in addition to the linear ground state.
    #[arg(long)]
    starts: Option<usize>,
}

impl SolverArgs {
    fn config(&self, parallel: bool) -> VerifyConfig {
        VerifyConfig {
            seed: self.seed,
            tol_residual: self.tol_residual,
            tol_lambda_rel: None,
            max_iterations: self.max_iters,
            random_starts: self.starts,
            parallel,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// thm-vertices, thm-edges, thm-p1, lem-head-max, lem-tadpole,
    /// lem-path, p-limit, cheeger-upper-bound, or all (every claim over its
    /// default ranges).
    claim: String,
    /// Vertex count or range `a..b` (inclusive).
    #[arg(long)]
    n: Option<String>,
    /// Edge count or range `a..b` (inclusive).
    #[arg(long)]
    m: Option<String>,
    /// Head length or range for lem-head-max (default: every valid i).
    #[arg(long)]
    i: Option<String>,
    /// Comma-separated exponents.
    #[arg(long = "p", alias = "p-grid", value_delimiter = ',', num_args = 0..)]
    p: Option<Vec<f64>>,
    /// Graph file for p-limit (default T_{6,3}).
    #[arg(long)]
    graph: Option<String>,
    #[command(flatten)]
    solver: SolverArgs,
    /// Solve family members in parallel; output is unchanged.
    #[arg(long)]
    parallel: bool,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::NotConverged { .. }) { 1 } else { 2 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Make { kind, n, i, format, out } => {
            let g = match kind {
                Kind::Tadpole => {
                    let i = i.ok_or_else(|| usage("tadpole needs --i"))?;
                    make_tadpole(TadpoleSpec::new(n, i)?)?
                }
                Kind::Path => make_path(n)?,
                Kind::Cycle => make_cycle(n)?,
                Kind::Star => make_star(n)?,
            };
            let text = match format {
                GraphFormat::Edges => write_edge_list(&g),
                GraphFormat::Json => to_json(&g),
            };
            emit(out.as_ref(), &text)?;
            Ok(0)
        }
        Command::Eig { graph, p, solver, out } => {
            let g = read_graph(&graph)?;
            let opts = solver.config(false).solver(p);
            match first_eigenpair(&g, &opts) {
                Ok(r) => {
                    emit(out.as_ref(), &to_json(&r))?;
                    Ok(0)
                }
                Err(Error::NotConverged { best }) => {
                    emit(out.as_ref(), &to_json(&best))?;
                    eprintln!("error: solver did not converge (best residual {:.3e})", best.residual_inf);
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Cheeger { graph, out } => {
            let g = read_graph(&graph)?;
            emit(out.as_ref(), &to_json(&dirichlet_cheeger(&g)?))?;
            Ok(0)
        }
        Command::Verify(args) => run_verify(args),
        Command::Sweep {
            graph,
            p_grid,
            solver,
            format,
            out,
        } => {
            if p_grid.is_empty() {
                return Err(usage("empty p grid"));
            }
            let g = read_graph(&graph)?;
            let cfg = solver.config(false);
            let mut rows = Vec::with_capacity(p_grid.len());
            for &p in &p_grid {
                let r = match first_eigenpair(&g, &cfg.solver(p)) {
                    Ok(r) => r,
                    Err(Error::NotConverged { best }) => *best,
                    Err(e) => return Err(e.into()),
                };
                rows.push(SweepRow::new(p, &r));
            }
            let text = match format {
                ReportFormat::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for row in &rows {
                        w.serialize(row).map_err(|e| usage(e.to_string()))?;
                    }
                    String::from_utf8(w.into_inner().map_err(|e| usage(e.to_string()))?).expect("utf-8")
                }
                ReportFormat::Json => to_json(&rows),
            };
            emit(out.as_ref(), &text)?;
            Ok(if rows.iter().all(|r| r.converged) { 0 } else { 1 })
        }
    }
}

#[derive(Serialize)]
struct SweepRow {
    p: f64,
    lambda: f64,
    residual_inf: f64,
    iterations: usize,
    converged: bool,
}

impl SweepRow {
    fn new(p: f64, r: &EigenResult) -> Self {
        SweepRow {
            p,
            lambda: r.lambda,
            residual_inf: r.residual_inf,
            iterations: r.iterations,
            converged: r.converged,
        }
    }
}

fn run_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let claims: Vec<Claim> = if args.claim == "all" {
        if args.n.is_some() || args.m.is_some() || args.i.is_some() || args.graph.is_some() {
            return Err(usage("'all' runs every claim over its default ranges; only --p and solver options apply"));
        }
        Claim::ALL.to_vec()
    } else {
        vec![args.claim.parse()?]
    };
    let cfg = args.solver.config(args.parallel);
    let grid = match &args.p {
        Some(ps) if ps.is_empty() => return Err(usage("empty p grid")),
        Some(ps) => ps.clone(),
        None => DEFAULT_P_GRID.to_vec(),
    };

    // every report is computed before anything is written, so a
    // precondition failure in a later report still leaves no output
    let mut reports: Vec<VerificationReport> = Vec::new();
    for claim in claims {
        claim_reports(claim, &args, &grid, &cfg, &mut reports)?;
    }

    let pass = reports.iter().all(|r| r.pass);
    let text = match args.format {
        ReportFormat::Json => to_json(&json!({ "pass": pass, "reports": reports })),
        ReportFormat::Csv => reports_to_csv(&reports)?,
    };
    emit(args.out.as_ref(), &text)?;
    for r in reports.iter().filter(|r| !r.pass) {
        eprintln!("{} {} {:?}: {}", r.claim, r.params, r.status, r.notes.join("; "));
    }
    Ok(if pass { 0 } else { 1 })
}

fn claim_reports(
    claim: Claim,
    args: &VerifyArgs,
    grid: &[f64],
    cfg: &VerifyConfig,
    reports: &mut Vec<VerificationReport>,
) -> Result<(), Failure> {
    let n = |default| parse_range(args.n.as_deref(), default);
    let m = |default| parse_range(args.m.as_deref(), default);
    match claim {
        Claim::FkVertices => {
            for n in n(4..=8)? {
                for &p in grid {
                    reports.push(verify::verify_fk_vertices(n, p, cfg)?);
                }
            }
        }
        Claim::FkEdges => {
            for m in m(4..=8)? {
                for &p in grid {
                    reports.push(verify::verify_fk_edges(m, p, cfg)?);
                }
            }
        }
        Claim::FkP1 => {
            for m in m(4..=9)? {
                reports.push(verify::verify_fk_p1(m)?);
            }
        }
        Claim::HeadMax => {
            for n in n(4..=10)? {
                let heads = match args.i.as_deref() {
                    Some(text) => parse_range(Some(text), 3..=3)?,
                    None => 3..=n.saturating_sub(1),
                };
                for i in heads {
                    for &p in grid {
                        reports.push(verify::verify_lemma_head_max(n, i, p, cfg)?);
                    }
                }
            }
        }
        Claim::TadpoleComparison => {
            for n in n(5..=12)? {
                for &p in grid {
                    reports.push(verify::verify_tadpole_comparison(n, p, cfg)?);
                }
            }
        }
        Claim::PathChain => {
            for n in n(4..=12)? {
                for &p in grid {
                    reports.push(verify::verify_path_chain(n, p, cfg)?);
                }
            }
        }
        Claim::PLimit => {
            let g = match &args.graph {
                Some(path) => read_graph(path)?,
                None => make_tadpole(TadpoleSpec { n: 6, i: 3 })?,
            };
            let p_limit_grid = args.p.clone().unwrap_or_else(|| vec![2.0, 1.5, 1.25, 1.1, 1.05]);
            reports.push(verify::verify_p_limit(&g, &p_limit_grid, cfg)?);
        }
        Claim::CheegerUpperBound => {
            let n_max = n(7..=7)?;
            reports.push(verify::verify_cheeger_upper_bound(*n_max.end(), grid, cfg)?);
        }
    }
    Ok(())
}

/// `a` or `a..b` / `a..=b`, both inclusive.
fn parse_range(text: Option<&str>, default: RangeInclusive<usize>) -> Result<RangeInclusive<usize>, Failure> {
    let Some(text) = text else { return Ok(default) };
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| usage(format!("bad range '{text}'")));
    let range = match text.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?,
        None => {
            let v = num(text)?;
            v..=v
        }
    };
    if range.is_empty() {
        return Err(usage(format!("empty range '{text}'")));
    }
    Ok(range)
}

fn read_graph(path: &str) -> Result<Graph, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(Error::from)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?
    };
    Ok(parse_graph(&text)?)
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Error::from(e).into()),
    }
}
