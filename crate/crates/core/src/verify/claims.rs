use std::collections::BTreeSet;

use num_rational::Ratio;
use rayon::prelude::*;
use serde_json::json;

use super::{
    Claim, Entry, Exact, Family, FamilyScan, Margin, ScanEntry, Status, VerificationReport,
    VerifyConfig, MARGIN_FACTOR,
};
use crate::cheeger::dirichlet_cheeger;
use crate::error::{Error, Result};
use crate::graph::{
    canonical_key, enumerate_connected_by_edges, enumerate_connected_by_vertices, make_path,
    make_tadpole, CanonicalKey, Graph, TadpoleSpec, MAX_CANON_VERTICES,
};
use crate::spectral::{first_eigenpair, EigenResult, MAX_EXPONENT};

const FK_MAX: usize = 8;
const P1_MAX_EDGES: usize = 9;
const HEAD_MAX_VERTICES: usize = 10;
const HEAD_MARGIN: f64 = 1e-8;
const CHAIN_MAX: usize = 12;
const UPPER_BOUND_MAX_VERTICES: usize = 7;
const UPPER_BOUND_SLACK: f64 = 1e-9;
const P_LIMIT_GAP: f64 = 0.05;

fn precondition(msg: String) -> Error {
    Error::Precondition(msg)
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 && p <= MAX_EXPONENT {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange(p))
    }
}

fn tadpole(n: usize, i: usize) -> Graph {
    make_tadpole(TadpoleSpec { n, i }).expect("valid tadpole parameters")
}

fn key_if_small(g: &Graph) -> Option<CanonicalKey> {
    (g.vertex_count() <= MAX_CANON_VERTICES).then(|| canonical_key(g).expect("within bound"))
}

/// Converged or not, the solver's answer for one graph; other errors are
/// propagated.
fn solve_recorded(g: &Graph, p: f64, cfg: &VerifyConfig) -> Result<EigenResult> {
    match first_eigenpair(g, &cfg.solver(p)) {
        Ok(r) => Ok(r),
        Err(Error::NotConverged { best }) => Ok(*best),
        Err(e) => Err(e),
    }
}

fn solved_entry(g: &Graph, label: Option<String>, p: f64, r: &EigenResult) -> Entry {
    Entry {
        key: key_if_small(g),
        label,
        n: g.vertex_count(),
        m: g.edge_count(),
        p: Some(p),
        lambda: Some(r.lambda),
        residual: Some(r.residual_inf),
        converged: Some(r.converged),
        ..Entry::default()
    }
}

fn map_maybe_parallel<T, R>(items: &[T], parallel: bool, f: impl Fn(&T) -> R + Sync + Send) -> Vec<R>
where
    T: Sync,
    R: Send,
{
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

/// Solves every graph of `family` at `p`. Unconverged graphs stay in the
/// scan with `converged = false` and their best attempt.
pub fn scan_family(family: Family, p: f64, cfg: &VerifyConfig) -> Result<FamilyScan> {
    check_p(p)?;
    let graphs = match family {
        Family::Vertices(n) => enumerate_connected_by_vertices(n, true)?,
        Family::Edges(m) => enumerate_connected_by_edges(m, true)?,
    };
    if graphs.is_empty() {
        return Err(precondition(format!("{family:?} has no graph with boundary")));
    }
    let solved = map_maybe_parallel(&graphs, cfg.parallel, |g| {
        solve_recorded(g, p, cfg).map(|r| ScanEntry {
            key: canonical_key(g).expect("enumerated graphs are within the canonical bound"),
            n: g.vertex_count(),
            m: g.edge_count(),
            lambda: r.lambda,
            residual: r.residual_inf,
            converged: r.converged,
        })
    });
    let mut entries = solved.into_iter().collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.key.cmp(&b.key)));
    let runner_up_gap = match entries.as_slice() {
        [first, second, ..] => second.lambda - first.lambda,
        _ => f64::INFINITY,
    };
    Ok(FamilyScan {
        family,
        p,
        minimizer_key: entries[0].key,
        entries,
        runner_up_gap,
    })
}

/// `T_{n,3}` is the unique minimiser of `λ_{1,p}` over connected graphs
/// with boundary on `n` vertices, `4 <= n <= 8`.
pub fn verify_fk_vertices(n: usize, p: f64, cfg: &VerifyConfig) -> Result<VerificationReport> {
    verify_fk(Claim::FkVertices, Family::Vertices(n), n, p, cfg)
}

/// `T_{m,3}` is the unique minimiser over connected graphs with boundary
/// and `m` edges, `4 <= m <= 8`. Also audits `|Ω| <= m - 1` on every
/// graph of maximum degree at least 3.
pub fn verify_fk_edges(m: usize, p: f64, cfg: &VerifyConfig) -> Result<VerificationReport> {
    verify_fk(Claim::FkEdges, Family::Edges(m), m, p, cfg)
}

fn verify_fk(claim: Claim, family: Family, size: usize, p: f64, cfg: &VerifyConfig) -> Result<VerificationReport> {
    if !(4..=FK_MAX).contains(&size) {
        return Err(precondition(format!("{claim} needs 4 <= size <= {FK_MAX}, got {size}")));
    }
    check_p(p)?;
    let scan = scan_family(family, p, cfg)?;
    let expected = canonical_key(&tadpole(size, 3))?;
    let tol = cfg.solver(p).tol_residual;
    let threshold = MARGIN_FACTOR * tol;
    let mut notes = Vec::new();

    let unconverged: Vec<String> = scan.entries.iter().filter(|e| !e.converged).map(|e| e.key.to_hex()).collect();
    if !unconverged.is_empty() {
        notes.push(format!("unconverged: {}", unconverged.join(" ")));
    }
    if scan.minimizer_key != expected {
        notes.push(format!("minimiser {} is not T_{{{size},3}} ({expected})", scan.minimizer_key));
    }
    let mut audit_ok = true;
    if let Family::Edges(m) = family {
        let graphs = enumerate_connected_by_edges(m, true)?;
        for g in graphs.iter().filter(|g| g.max_degree() >= 3) {
            let interior = g.boundary_partition().interior.len();
            if interior + 1 > m {
                audit_ok = false;
                notes.push(format!("counting bound fails on {}: |interior| = {interior}", canonical_key(g)?));
            }
        }
    }

    let margin = scan.runner_up_gap;
    let status = if !unconverged.is_empty() {
        Status::Unconverged
    } else if scan.minimizer_key != expected || !audit_ok {
        Status::Fail
    } else if margin > threshold {
        Status::Pass
    } else {
        notes.push(format!("runner-up gap {margin:e} does not exceed {threshold:e}"));
        Status::Inconclusive
    };
    let param_name = if matches!(family, Family::Vertices(_)) { "n" } else { "m" };
    Ok(VerificationReport {
        claim,
        params: json!({ param_name: size, "p": p, "graphs": scan.entries.len() }),
        pass: status == Status::Pass,
        status,
        margin: Margin::Real(margin),
        threshold: Margin::Real(threshold),
        entries: scan
            .entries
            .iter()
            .map(|e| Entry {
                key: Some(e.key),
                label: (e.key == expected).then(|| format!("T_{{{size},3}}")),
                n: e.n,
                m: e.m,
                p: Some(p),
                lambda: Some(e.lambda),
                residual: Some(e.residual),
                converged: Some(e.converged),
                ..Entry::default()
            })
            .collect(),
        notes,
        solver: Some(cfg.meta(&[p])),
    })
}

/// Exact check at `p = 1` over connected graphs with boundary and `m`
/// edges, `4 <= m <= 9`: every `h_D >= 1/(m-1)`, with equality exactly on
/// `T_{m,i}`, `3 <= i < m`.
pub fn verify_fk_p1(m: usize) -> Result<VerificationReport> {
    if !(4..=P1_MAX_EDGES).contains(&m) {
        return Err(precondition(format!("thm-p1 needs 4 <= m <= {P1_MAX_EDGES}, got {m}")));
    }
    let bound = Ratio::new(1u64, m as u64 - 1);
    let tadpoles: Vec<(CanonicalKey, usize)> = (3..m).map(|i| (canonical_key(&tadpole(m, i)).expect("small"), i)).collect();
    let expected: BTreeSet<CanonicalKey> = tadpoles.iter().map(|t| t.0).collect();

    let graphs = enumerate_connected_by_edges(m, true)?;
    let mut rows = Vec::with_capacity(graphs.len());
    for g in &graphs {
        rows.push((dirichlet_cheeger(g)?.value, canonical_key(g)?, g.vertex_count(), g.edge_count()));
    }
    rows.sort();

    let below: Vec<_> = rows.iter().filter(|r| r.0 < bound).collect();
    let equal: BTreeSet<CanonicalKey> = rows.iter().filter(|r| r.0 == bound).map(|r| r.1).collect();
    let signed = |r: Ratio<u64>| Ratio::new(*r.numer() as i64, *r.denom() as i64);
    // smallest h_D - 1/(m-1) outside the equality set (negative if the bound fails)
    let margin = rows
        .iter()
        .filter(|r| !expected.contains(&r.1))
        .map(|r| signed(r.0) - signed(bound))
        .min()
        .unwrap_or_else(|| Ratio::from_integer(0));

    // the path is the non-tadpole usually compared against; its value is
    // reported as computed, since 2/(m-2) is also quoted for it
    let path_key = canonical_key(&make_path(m + 1)?)?;
    let path_h = rows.iter().find(|r| r.1 == path_key).map(|r| r.0).expect("path is enumerated");
    let mut notes = vec![
        "restricted to graphs with at least one boundary vertex; without boundary h_D = 0".to_string(),
        format!(
            "P_{}: exhaustive h_D = {path_h} (not 2/{}); either value exceeds {bound}",
            m + 1,
            m - 2
        ),
    ];
    for r in &below {
        notes.push(format!("{} has h_D = {} < {bound}", r.1, r.0));
    }
    for k in equal.symmetric_difference(&expected) {
        notes.push(if equal.contains(k) {
            format!("{k} attains the bound but is not a tadpole")
        } else {
            format!("tadpole {k} does not attain the bound")
        });
    }
    let pass = below.is_empty() && equal == expected && margin > Ratio::from_integer(0);
    Ok(VerificationReport {
        claim: Claim::FkP1,
        params: json!({
            "m": m,
            "bound": { "num": 1, "den": m - 1 },
            "graphs": rows.len(),
            "path_h": { "num": path_h.numer(), "den": path_h.denom() },
        }),
        pass,
        status: if pass { Status::Pass } else { Status::Fail },
        margin: margin.into(),
        threshold: Margin::Exact { num: 0, den: 1 },
        entries: rows
            .iter()
            .map(|&(h, key, n, edges)| Entry {
                key: Some(key),
                label: tadpoles.iter().find(|t| t.0 == key).map(|t| format!("T_{{{m},{}}}", t.1)),
                n,
                m: edges,
                h: Some(Exact::from(h)),
                ..Entry::default()
            })
            .collect(),
        notes,
        solver: None,
    })
}

/// The eigenfunction of `T_{n,i}` attains its maximum on `t_1 .. t_{i-1}`,
/// above every tail value `t_i .. t_n` by more than `1e-8`.
pub fn verify_lemma_head_max(n: usize, i: usize, p: f64, cfg: &VerifyConfig) -> Result<VerificationReport> {
    if !(3 <= i && i < n && n <= HEAD_MAX_VERTICES) {
        return Err(precondition(format!(
            "lem-head-max needs 3 <= i < n <= {HEAD_MAX_VERTICES}, got n={n}, i={i}"
        )));
    }
    check_p(p)?;
    let spec = TadpoleSpec { n, i };
    let g = tadpole(n, i);
    let r = first_eigenpair(&g, &cfg.solver(p))?;
    let f = &r.eigenfunction;
    let head_max = (0..spec.neck()).map(|v| f[v]).fold(f64::NEG_INFINITY, f64::max);
    let tail_max = spec.tail().map(|v| f[v]).fold(f64::NEG_INFINITY, f64::max);
    let argmax = (0..n).fold(0, |best, v| if f[v] > f[best] { v } else { best });
    let margin = head_max - tail_max;

    let status = if argmax < spec.neck() && margin > HEAD_MARGIN {
        Status::Pass
    } else if margin > -HEAD_MARGIN {
        Status::Inconclusive
    } else {
        Status::Fail
    };
    let mut entry = solved_entry(&g, Some(format!("T_{{{n},{i}}}")), p, &r);
    entry.f = Some(f.0.clone());
    Ok(VerificationReport {
        claim: Claim::HeadMax,
        params: json!({ "n": n, "i": i, "p": p }),
        pass: status == Status::Pass,
        status,
        margin: Margin::Real(margin),
        threshold: Margin::Real(HEAD_MARGIN),
        entries: vec![entry],
        notes: vec![format!("argmax at t_{}", argmax + 1)],
        solver: Some(cfg.meta(&[p])),
    })
}

/// `λ(T_{n,4}) - λ(T_{n,3})` exceeds the margin threshold, `5 <= n <= 12`.
pub fn verify_tadpole_comparison(n: usize, p: f64, cfg: &VerifyConfig) -> Result<VerificationReport> {
    if !(5..=CHAIN_MAX).contains(&n) {
        return Err(precondition(format!("lem-tadpole needs 5 <= n <= {CHAIN_MAX}, got {n}")));
    }
    check_p(p)?;
    let cases = [(tadpole(n, 3), format!("T_{{{n},3}}")), (tadpole(n, 4), format!("T_{{{n},4}}"))];
    let (entries, lambdas) = solve_all(&cases, p, cfg)?;
    let threshold = MARGIN_FACTOR * cfg.solver(p).tol_residual;
    let margin = lambdas[1] - lambdas[0];
    Ok(strict_report(
        Claim::TadpoleComparison,
        json!({ "n": n, "p": p }),
        margin,
        threshold,
        entries,
        cfg.meta(&[p]),
    ))
}

/// `λ(P_n) > λ(P_{n+1}) > λ(T_{n,3})`, both gaps above the margin
/// threshold, `4 <= n <= 12`. The margin is the smaller gap.
pub fn verify_path_chain(n: usize, p: f64, cfg: &VerifyConfig) -> Result<VerificationReport> {
    if !(4..=CHAIN_MAX).contains(&n) {
        return Err(precondition(format!("lem-path needs 4 <= n <= {CHAIN_MAX}, got {n}")));
    }
    check_p(p)?;
    let cases = [
        (make_path(n)?, format!("P_{n}")),
        (make_path(n + 1)?, format!("P_{}", n + 1)),
        (tadpole(n, 3), format!("T_{{{n},3}}")),
    ];
    let (entries, l) = solve_all(&cases, p, cfg)?;
    let threshold = MARGIN_FACTOR * cfg.solver(p).tol_residual;
    let margin = (l[0] - l[1]).min(l[1] - l[2]);
    Ok(strict_report(
        Claim::PathChain,
        json!({ "n": n, "p": p }),
        margin,
        threshold,
        entries,
        cfg.meta(&[p]),
    ))
}

fn solve_all(cases: &[(Graph, String)], p: f64, cfg: &VerifyConfig) -> Result<(Vec<Entry>, Vec<f64>)> {
    let mut entries = Vec::new();
    let mut lambdas = Vec::new();
    for (g, label) in cases {
        let r = first_eigenpair(g, &cfg.solver(p))?;
        lambdas.push(r.lambda);
        entries.push(solved_entry(g, Some(label.clone()), p, &r));
    }
    Ok((entries, lambdas))
}

fn strict_report(
    claim: Claim,
    params: serde_json::Value,
    margin: f64,
    threshold: f64,
    entries: Vec<Entry>,
    meta: super::SolverMeta,
) -> VerificationReport {
    let status = if margin > threshold {
        Status::Pass
    } else if margin > 0.0 {
        Status::Inconclusive
    } else {
        Status::Fail
    };
    VerificationReport {
        claim,
        params,
        pass: status == Status::Pass,
        status,
        margin: Margin::Real(margin),
        threshold: Margin::Real(threshold),
        entries,
        notes: Vec::new(),
        solver: Some(meta),
    }
}

/// `|λ_{1,p}(g) - h_D(g)|` along a strictly decreasing grid of exponents:
/// passes when the last gap is below both the first gap and `0.05`.
/// Monotone decrease of the gaps is recorded, not required.
pub fn verify_p_limit(g: &Graph, p_grid: &[f64], cfg: &VerifyConfig) -> Result<VerificationReport> {
    if g.boundary_partition().boundary.is_empty() {
        return Err(Error::NoBoundary);
    }
    if p_grid.len() < 2 {
        return Err(precondition("p-limit needs at least two exponents".into()));
    }
    for &p in p_grid {
        check_p(p)?;
    }
    if p_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(precondition("p grid must be strictly decreasing".into()));
    }
    let h = dirichlet_cheeger(g)?.value;
    let h_real = *h.numer() as f64 / *h.denom() as f64;
    let mut entries = Vec::new();
    let mut gaps = Vec::new();
    for &p in p_grid {
        let r = first_eigenpair(g, &cfg.solver(p))?;
        gaps.push((r.lambda - h_real).abs());
        let mut e = solved_entry(g, None, p, &r);
        e.h = Some(h.into());
        entries.push(e);
    }
    let (first, last) = (gaps[0], gaps[gaps.len() - 1]);
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    let margin = (P_LIMIT_GAP - last).min(first - last);
    let pass = last < first && last < P_LIMIT_GAP;
    Ok(VerificationReport {
        claim: Claim::PLimit,
        params: json!({ "p_grid": p_grid, "h": { "num": h.numer(), "den": h.denom() }, "gap_limit": P_LIMIT_GAP }),
        pass,
        status: if pass { Status::Pass } else { Status::Fail },
        margin: Margin::Real(margin),
        threshold: Margin::Real(0.0),
        entries,
        notes: vec![
            format!("gaps: {}", gaps.iter().map(|g| format!("{g:e}")).collect::<Vec<_>>().join(" ")),
            format!("monotone: {monotone}"),
        ],
        solver: Some(cfg.meta(p_grid)),
    })
}

/// `λ_{1,p} <= h_D + 1e-9` for every connected graph with boundary and a
/// nonempty interior on at most `n_max <= 7` vertices, at every exponent.
pub fn verify_cheeger_upper_bound(n_max: usize, p_grid: &[f64], cfg: &VerifyConfig) -> Result<VerificationReport> {
    if !(3..=UPPER_BOUND_MAX_VERTICES).contains(&n_max) {
        return Err(precondition(format!(
            "cheeger-upper-bound needs 3 <= n_max <= {UPPER_BOUND_MAX_VERTICES}, got {n_max}"
        )));
    }
    if p_grid.is_empty() {
        return Err(precondition("empty p grid".into()));
    }
    for &p in p_grid {
        check_p(p)?;
    }
    // graphs on 1 or 2 vertices have no boundary or no interior
    let mut graphs = Vec::new();
    for n in 3..=n_max {
        graphs.extend(enumerate_connected_by_vertices(n, true)?);
    }
    let jobs: Vec<(usize, f64)> = (0..graphs.len()).flat_map(|k| p_grid.iter().map(move |&p| (k, p))).collect();
    let cheeger: Vec<Ratio<u64>> = graphs.iter().map(|g| dirichlet_cheeger(g).map(|c| c.value)).collect::<Result<_>>()?;
    let solved = map_maybe_parallel(&jobs, cfg.parallel, |&(k, p)| solve_recorded(&graphs[k], p, cfg));

    let mut entries = Vec::with_capacity(jobs.len());
    let mut margin = f64::INFINITY;
    let mut unconverged = Vec::new();
    for (&(k, p), r) in jobs.iter().zip(solved) {
        let r = r?;
        let h = cheeger[k];
        let slack = *h.numer() as f64 / *h.denom() as f64 - r.lambda;
        margin = margin.min(slack);
        let mut e = solved_entry(&graphs[k], None, p, &r);
        if !r.converged {
            unconverged.push(format!("{}@p={p}", e.key.expect("small graph")));
        }
        e.h = Some(h.into());
        entries.push(e);
    }
    let threshold = -UPPER_BOUND_SLACK;
    let mut notes = Vec::new();
    let status = if !unconverged.is_empty() {
        notes.push(format!("unconverged: {}", unconverged.join(" ")));
        Status::Unconverged
    } else if margin >= threshold {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(VerificationReport {
        claim: Claim::CheegerUpperBound,
        params: json!({ "n_max": n_max, "p_grid": p_grid, "graphs": graphs.len() }),
        pass: status == Status::Pass,
        status,
        margin: Margin::Real(margin),
        threshold: Margin::Real(threshold),
        entries,
        notes,
        solver: Some(cfg.meta(p_grid)),
    })
}
