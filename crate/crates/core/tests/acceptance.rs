//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Tolerances are pinned below.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use plap::graph::*;
use plap::spectral::*;
use plap::verify::*;

const LINEAR_TOL: f64 = 1e-8;
const ANALYTIC_TOL: f64 = 1e-8;
const GAP_MIN: f64 = 1e-6;
const CHAIN_VALUES_TOL: f64 = 1e-5;
const GRADIENT_REL_TOL: f64 = 1e-5;
const LINEAR_BUDGET: Duration = Duration::from_secs(120);
const SCAN_BUDGET: Duration = Duration::from_secs(600);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn serial() -> VerifyConfig {
    VerifyConfig::default()
}

fn tadpole(n: usize, i: usize) -> Graph {
    make_tadpole(TadpoleSpec { n, i }).unwrap()
}

fn lambda(g: &Graph, p: f64) -> f64 {
    first_eigenpair(g, &SolverOptions::new(p)).unwrap().lambda
}

fn linear_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in 3..=7 {
        for g in enumerate_connected_by_vertices(n, true).unwrap() {
            let solved = lambda(&g, 2.0);
            worst = worst.max((solved - linear_first_dirichlet(&g).unwrap()).abs());
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= LINEAR_TOL && elapsed < LINEAR_BUDGET,
        format!("{count} graphs, max |solver - linear| = {worst:.2e} <= {LINEAR_TOL:e}, {elapsed:.1?} < {LINEAR_BUDGET:?}"),
    )
}

fn analytic_values() -> Outcome {
    let mut worst = 0.0f64;
    for n in 4..=12 {
        let exact = 4.0 * (PI / (2.0 * (n as f64 - 1.0))).sin().powi(2);
        worst = worst.max((lambda(&make_path(n).unwrap(), 2.0) - exact).abs());
    }
    let paw = (lambda(&tadpole(4, 3), 2.0) - (2.0 - 3f64.sqrt())).abs();
    worst = worst.max(paw);
    outcome(
        worst <= ANALYTIC_TOL,
        format!("P_4..P_12 and T_4,3 at p=2, max error {worst:.2e} <= {ANALYTIC_TOL:e}"),
    )
}

fn fk_family(edges: bool) -> Outcome {
    let start = Instant::now();
    let mut min_gap = f64::INFINITY;
    let mut failures = Vec::new();
    for size in 4..=8 {
        for p in DEFAULT_P_GRID {
            let r = if edges {
                verify_fk_edges(size, p, &serial())
            } else {
                verify_fk_vertices(size, p, &serial())
            }
            .unwrap();
            let Margin::Real(gap) = r.margin else { unreachable!() };
            min_gap = min_gap.min(gap);
            if !r.pass || gap <= GAP_MIN {
                failures.push(format!("size={size} p={p} {:?} {}", r.status, r.notes.join("; ")));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < SCAN_BUDGET,
        format!(
            "sizes 4..8 x p {DEFAULT_P_GRID:?}: unique minimiser T_size,3, min runner-up gap {min_gap:.3e} > {GAP_MIN:e}, \
             {elapsed:.1?} single-threaded < {SCAN_BUDGET:?}{}",
            if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join(" | ")) }
        ),
    )
}

fn fk_p1() -> Outcome {
    let mut failures = Vec::new();
    let mut graphs = 0;
    for m in 4..=9 {
        let r = verify_fk_p1(m).unwrap();
        graphs += r.entries.len();
        if !r.pass {
            failures.push(format!("m={m}: {}", r.notes.join("; ")));
        }
    }
    outcome(
        failures.is_empty(),
        format!("m 4..9, {graphs} graphs, exact h_D >= 1/(m-1), equality set = tadpoles{}", failures.join(" | ")),
    )
}

fn margins<F>(sizes: std::ops::RangeInclusive<usize>, f: F) -> (f64, Vec<String>)
where
    F: Fn(usize, f64) -> VerificationReport,
{
    let mut min = f64::INFINITY;
    let mut failures = Vec::new();
    for n in sizes {
        for p in DEFAULT_P_GRID {
            let r = f(n, p);
            let Margin::Real(m) = r.margin else { unreachable!() };
            min = min.min(m);
            if !r.pass || m <= GAP_MIN {
                failures.push(format!("n={n} p={p} margin {m:e}"));
            }
        }
    }
    (min, failures)
}

fn tadpole_comparison() -> Outcome {
    let (min, failures) = margins(5..=12, |n, p| verify_tadpole_comparison(n, p, &serial()).unwrap());
    outcome(
        failures.is_empty(),
        format!("n 5..12 x grid, min lambda(T_n,4) - lambda(T_n,3) = {min:.3e} > {GAP_MIN:e} {}", failures.join(" | ")),
    )
}

fn path_chain() -> Outcome {
    let (min, failures) = margins(4..=12, |n, p| verify_path_chain(n, p, &serial()).unwrap());
    let r = verify_path_chain(4, 2.0, &serial()).unwrap();
    let values: Vec<f64> = r.entries.iter().map(|e| e.lambda.unwrap()).collect();
    let expected = [1.0, 0.58579, 0.26795];
    let worst = values.iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    outcome(
        failures.is_empty() && worst < CHAIN_VALUES_TOL,
        format!(
            "n 4..12 x grid, min gap {min:.3e} > {GAP_MIN:e}; (4, p=2) values {values:.5?} within {CHAIN_VALUES_TOL:e} of {expected:?} {}",
            failures.join(" | ")
        ),
    )
}

fn head_max() -> Outcome {
    let mut min = f64::INFINITY;
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in 4..=10 {
        for i in 3..n {
            for p in DEFAULT_P_GRID {
                let r = verify_lemma_head_max(n, i, p, &serial()).unwrap();
                let Margin::Real(m) = r.margin else { unreachable!() };
                min = min.min(m);
                cases += 1;
                if !r.pass {
                    failures.push(format!("T_{n},{i} p={p} {:?} margin {m:e}", r.status));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{cases} cases 3 <= i < n <= 10 x grid, argmax on t_1..t_(i-1), min margin {min:.3e} > 1e-8 {}", failures.join(" | ")),
    )
}

fn cheeger_upper_bound() -> Outcome {
    let r = verify_cheeger_upper_bound(7, &DEFAULT_P_GRID, &serial()).unwrap();
    let Margin::Real(m) = r.margin else { unreachable!() };
    outcome(
        r.pass,
        format!("{} (graph, p) pairs on <= 7 vertices, min h_D - lambda = {m:.3e} >= -1e-9", r.entries.len()),
    )
}

fn p_limit() -> Outcome {
    let grid = [2.0, 1.5, 1.25, 1.1, 1.05];
    let r = verify_p_limit(&tadpole(6, 3), &grid, &serial()).unwrap();
    let gaps: Vec<f64> = r.entries.iter().map(|e| (e.lambda.unwrap() - 0.2).abs()).collect();
    outcome(
        r.pass && gaps[4] < 0.05 && gaps[4] < gaps[0],
        format!("T_6,3 gaps |lambda - 1/5| over {grid:?}: {gaps:.4?}; last < 0.05 and < first"),
    )
}

fn gradient_check() -> Outcome {
    let graphs: Vec<Graph> = (3..=7).flat_map(|n| enumerate_connected_by_vertices(n, true).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let h = 1e-6;
    for _ in 0..100 {
        let g = &graphs[rng.gen_range(0..graphs.len())];
        let mut f = vec![0.0; g.vertex_count()];
        for v in g.boundary_partition().interior {
            f[v] = rng.gen_range(0.1..2.0);
        }
        for p in [1.5, 2.0, 3.0] {
            let grad = rayleigh_gradient(g, &f, p).unwrap();
            // R is constant when the interior is a single vertex, so measure
            // against the quotient's own scale rather than a vanishing gradient
            let scale = grad.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(rayleigh_quotient(g, &f, p).unwrap());
            for v in g.boundary_partition().interior {
                let (mut up, mut down) = (f.clone(), f.clone());
                up[v] += h;
                down[v] -= h;
                let fd = (rayleigh_quotient(g, &up, p).unwrap() - rayleigh_quotient(g, &down, p).unwrap()) / (2.0 * h);
                worst = worst.max((fd - grad[v]).abs() / scale);
            }
        }
    }
    outcome(
        worst < GRADIENT_REL_TOL,
        format!("100 random positive functions x p {{1.5, 2, 3}}, max relative error {worst:.2e} < {GRADIENT_REL_TOL:e}"),
    )
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("plap-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut outputs = Vec::new();
    let mut ok = true;
    for (run, parallel) in [(0, false), (1, false), (2, true)] {
        let path = dir.join(format!("all-{run}.json"));
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_plap"));
        cmd.args(["verify", "all", "--seed", "5", "--out"]).arg(&path);
        if parallel {
            cmd.arg("--parallel");
        }
        ok &= cmd.status().unwrap().success();
        outputs.push(std::fs::read(&path).unwrap_or_default());
    }
    let _ = std::fs::remove_dir_all(&dir);
    let identical = outputs.windows(2).all(|w| w[0] == w[1]) && !outputs[0].is_empty();
    outcome(
        ok && identical,
        format!(
            "`plap verify all --seed 5` twice serially and once with --parallel: {} bytes each, byte-identical = {identical}",
            outputs[0].len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("linear-oracle equivalence", linear_equivalence),
        ("analytic values at p = 2", analytic_values),
        ("tadpole minimises over vertex families", || fk_family(false)),
        ("tadpole minimises over edge families", || fk_family(true)),
        ("exact p = 1 bound and equality set", fk_p1),
        ("T_n,4 above T_n,3", tadpole_comparison),
        ("path chain", path_chain),
        ("head maximum", head_max),
        ("Cheeger upper bound", cheeger_upper_bound),
        ("p -> 1 limit", p_limit),
        ("gradient check", gradient_check),
        ("determinism", determinism),
    ];
    let mut all = true;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        all &= o.pass;
        println!(
            "criterion {:>2} {} {name}: {} [{:.1?}]",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed()
        );
    }
    println!("acceptance: {}", if all { "PASS" } else { "FAIL" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
