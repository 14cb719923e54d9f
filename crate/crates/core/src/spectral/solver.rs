//! Certified first Dirichlet eigenpair of the p-Laplacian.
//!
//! Each start runs projected gradient descent on the p-Rayleigh quotient:
//! an Armijo step along the negative gradient, then absolute values, then
//! averaging over the cells of the coarsest equitable partition, then
//! rescaling to unit p-norm. Periodically the iterate is handed to a damped
//! Newton solve of the eigen-equation in cell coordinates; a start is
//! converged once the full-graph residual meets `tol_residual` and the
//! eigenvalue has settled to `tol_lambda_rel`.
//!
//! The averaging step matters for `p < 2`. Adjacent vertices in one cell
//! carry equal values at the minimiser, and for `p < 2` the residual at such
//! a vertex reacts to a value gap `δ` like `δ^{p-1}`. A one-ulp gap left by
//! round-off would already exceed the residual tolerance. With exact
//! per-cell values those edges contribute exactly zero. On an equitable
//! partition `Δ_p` of a cell-constant function is cell-constant, so
//! stationary points of the reduced problem are eigenfunctions of the full
//! one.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    dirichlet_energy, eigen_residual, linear_ground_state, p_laplacian_unchecked, p_norm_pow,
    signed_pow, VertexFunction, MAX_EXPONENT,
};
use crate::error::{Error, Result};
use crate::graph::{canonical_key, Graph, MAX_CANON_VERTICES};

const ARMIJO_C: f64 = 1e-4;
const ARMIJO_SHRINK: f64 = 0.5;
const ARMIJO_MIN_STEP: f64 = 1e-30;
const LAMBDA_STABLE_ITERS: usize = 10;
const NEWTON_FIRST: usize = 20;
const NEWTON_EVERY: usize = 100;
const NEWTON_MAX_ITERS: usize = 60;
// Relative tolerances at which cells are tried as one plateau, finest first.
// Descent approaches a plateau slowly for p < 2, so coarser merges let
// Newton finish from further away; finer ones separate a nearly closed
// plateau from a neighbouring value that is merely close.
const PLATEAU_RELS: [f64; 5] = [1e-9, 1e-7, 1e-5, 1e-4, 1e-3];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub p: f64,
    pub tol_residual: f64,
    pub tol_lambda_rel: f64,
    pub max_iterations: usize,
    pub random_starts: usize,
    pub seed: u64,
}

impl SolverOptions {
    /// Defaults for exponent `p`: residual tolerance `1e-9` for `p >= 1.5`
    /// and `1e-7` below, four random starts, seed 0.
    pub fn new(p: f64) -> Self {
        SolverOptions {
            p,
            tol_residual: if p >= 1.5 { 1e-9 } else { 1e-7 },
            tol_lambda_rel: 1e-12,
            max_iterations: 50_000,
            random_starts: 4,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.p > 1.0 && self.p <= MAX_EXPONENT) {
            return Err(Error::ExponentOutOfRange(self.p));
        }
        if !(self.tol_residual > 0.0 && self.tol_lambda_rel > 0.0) {
            return Err(Error::Precondition("tolerances must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Precondition("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

/// First Dirichlet eigenpair with its certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub lambda: f64,
    /// Nonnegative, zero on the boundary, unit p-norm.
    #[serde(rename = "f")]
    pub eigenfunction: VertexFunction,
    #[serde(rename = "residual")]
    pub residual_inf: f64,
    pub iterations: usize,
    pub converged: bool,
    pub starts_used: usize,
}

/// Validates the Dirichlet problem on `g` and returns its interior.
pub(crate) fn check_problem(g: &Graph) -> Result<Vec<usize>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let part = g.boundary_partition();
    if part.boundary.is_empty() {
        return Err(Error::NoBoundary);
    }
    if part.interior.is_empty() {
        return Err(Error::EmptyInterior);
    }
    Ok(part.interior)
}

/// Coarsest equitable partition refining the degree partition, as a colour
/// per vertex. Colours are numbered in order of first appearance by vertex
/// index, so the result depends only on the labelled graph.
pub fn equitable_partition(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut colour: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut count = usize::MAX;
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&w| colour[w]).collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let mut ids = BTreeMap::new();
        let mut next = Vec::with_capacity(n);
        for sig in &signatures {
            let fresh = ids.len();
            next.push(*ids.entry(sig).or_insert(fresh));
        }
        let new_count = ids.len();
        colour = next;
        if new_count == count {
            return colour;
        }
        count = new_count;
    }
}

/// Multi-start solve for `λ_{1,p}(g)` and its positive eigenfunction.
///
/// Start 0 is the linear (`p = 2`) ground state; starts `1..=random_starts`
/// draw interior values uniformly from `[0.5, 1.5)` with a generator seeded
/// from `opts.seed`, the graph and the start index. Returns the lowest
/// converged eigenvalue, or `NotConverged` carrying the best attempt.
pub fn first_eigenpair(g: &Graph, opts: &SolverOptions) -> Result<EigenResult> {
    opts.validate()?;
    let interior = check_problem(g)?;
    let problem = Problem::new(g, opts.p, &interior);
    let runs: Vec<Run> = starts(g, &interior, opts)?.into_iter().map(|f| problem.run(f, opts)).collect();

    let starts_used = runs.len();
    let best_converged = runs
        .iter()
        .filter(|r| r.converged)
        .min_by(|a, b| a.lambda.total_cmp(&b.lambda));
    match best_converged {
        Some(run) => Ok(run.clone().into_result(starts_used)),
        None => {
            let best = runs
                .into_iter()
                .min_by(|a, b| a.residual.total_cmp(&b.residual))
                .expect("at least one start");
            Err(Error::NotConverged {
                best: Box::new(best.into_result(starts_used)),
            })
        }
    }
}

/// The linear ground state followed by `opts.random_starts` seeded random
/// positive functions.
fn starts(g: &Graph, interior: &[usize], opts: &SolverOptions) -> Result<Vec<Vec<f64>>> {
    let (_, ground) = linear_ground_state(g)?;
    let graph_hash = graph_hash(g);
    let mut out = vec![ground.into_inner()];
    for start in 1..=opts.random_starts {
        let mut rng = ChaCha8Rng::seed_from_u64(mix(mix(opts.seed, graph_hash), start as u64));
        let mut f = vec![0.0; g.vertex_count()];
        for &v in interior {
            f[v] = rng.gen_range(0.5..1.5);
        }
        out.push(f);
    }
    Ok(out)
}

const FLOOR_ULPS: f64 = 4.0;

/// Effective residual tolerance for the eigen-equation at `(f, λ)`:
/// `tol`, raised to the residual change caused by moving each value of `f`
/// by one ulp when that exceeds it. Edges inside a cell of the equitable
/// partition are exempt: their values are equal by construction.
pub fn residual_tolerance(g: &Graph, f: &[f64], lambda: f64, p: f64, tol: f64) -> f64 {
    tolerance_with_cells(g, &equitable_partition(g), f, lambda, p, tol)
}

fn tolerance_with_cells(g: &Graph, colour: &[usize], f: &[f64], lambda: f64, p: f64, tol: f64) -> f64 {
    let ulp = |x: f64| {
        let x = x.abs();
        if x == 0.0 {
            0.0
        } else {
            f64::from_bits(x.to_bits() + 1) - x
        }
    };
    // |φ(|t| + ε) - φ(|t|)|, exact rather than first order so that gaps of
    // a few ulps (or none) are handled for p < 2
    let shift = |t: f64, eps: f64| (t.abs() + eps).powf(p - 1.0) - t.abs().powf(p - 1.0);
    let floor = (0..g.vertex_count())
        .filter(|&x| !g.is_boundary(x))
        .map(|x| {
            let edges: f64 = g
                .neighbors(x)
                .iter()
                .filter(|&&y| colour[x] != colour[y] || f[x] != f[y])
                .map(|&y| shift(f[x] - f[y], ulp(f[x]) + ulp(f[y])))
                .sum();
            edges + lambda * shift(f[x], ulp(f[x]))
        })
        .fold(0.0, f64::max);
    tol.max(FLOOR_ULPS * floor)
}

fn mix(a: u64, b: u64) -> u64 {
    // splitmix64 finaliser over a ^ rotated b
    let mut z = a ^ b.rotate_left(29).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Canonical key for graphs within the canonicalisation bound, otherwise
/// the labelled edge list.
fn graph_hash(g: &Graph) -> u64 {
    if g.vertex_count() <= MAX_CANON_VERTICES {
        let key = canonical_key(g).expect("within canonical bound");
        mix(key.vertex_count() as u64, key.bits())
    } else {
        g.edges().fold(mix(g.vertex_count() as u64, 1), |h, (u, v)| {
            mix(h, ((u as u64) << 32) | v as u64)
        })
    }
}

#[derive(Clone, Debug)]
struct Run {
    lambda: f64,
    f: Vec<f64>,
    residual: f64,
    iterations: usize,
    converged: bool,
}

impl Run {
    fn into_result(self, starts_used: usize) -> EigenResult {
        EigenResult {
            lambda: self.lambda,
            eigenfunction: VertexFunction(self.f),
            residual_inf: self.residual,
            iterations: self.iterations,
            converged: self.converged,
            starts_used,
        }
    }
}

/// A cell of an interior partition, with its neighbour multiplicities.
struct Cell {
    members: Vec<usize>,
    /// `(neighbouring cell or None for boundary, multiplicity)`, excluding
    /// the cell itself.
    links: Vec<(Option<usize>, usize)>,
}

/// Partition of the interior into cells such that every member of a cell
/// has the same number of neighbours in each other cell (and on the
/// boundary). Edges inside a cell carry no flux for a cell-constant
/// function, so `Δ_p` of such a function is cell-constant and the
/// eigen-equation reduces to one equation per cell.
struct Quotient {
    cells: Vec<Cell>,
    cell_of: Vec<Option<usize>>,
}

impl Quotient {
    /// `None` if some cell's members disagree on a neighbour count.
    fn new(g: &Graph, members: Vec<Vec<usize>>) -> Option<Self> {
        let mut cell_of = vec![None; g.vertex_count()];
        for (c, ms) in members.iter().enumerate() {
            for &v in ms {
                cell_of[v] = Some(c);
            }
        }
        let links_of = |v: usize, c: usize| {
            let mut counts: BTreeMap<Option<usize>, usize> = BTreeMap::new();
            for &w in g.neighbors(v) {
                if cell_of[w] != Some(c) {
                    *counts.entry(cell_of[w]).or_default() += 1;
                }
            }
            counts.into_iter().collect::<Vec<_>>()
        };
        let mut cells = Vec::with_capacity(members.len());
        for (c, ms) in members.into_iter().enumerate() {
            let links = links_of(ms[0], c);
            if ms[1..].iter().any(|&v| links_of(v, c) != links) {
                return None;
            }
            cells.push(Cell { members: ms, links });
        }
        Some(Quotient { cells, cell_of })
    }

    /// Coarsening of `self` that joins cells whose values in `f`
    /// agree to `rel` (relative to the largest value), keeping only merged
    /// groups that leave the partition valid. `None` when nothing merges.
    fn plateaus(&self, g: &Graph, f: &[f64], rel: f64) -> Option<Quotient> {
        let k = self.cells.len();
        let scale = self.cells.iter().map(|c| f[c.members[0]]).fold(0.0, f64::max);
        let mut parent: Vec<usize> = (0..k).collect();
        fn root(parent: &mut [usize], mut c: usize) -> usize {
            while parent[c] != c {
                parent[c] = parent[parent[c]];
                c = parent[c];
            }
            c
        }
        let mut merged = false;
        // plateau cells need not be adjacent: a vertex can share its value
        // with cells it only reaches through other cells
        for c in 0..k {
            for d in c + 1..k {
                let (a, b) = (f[self.cells[c].members[0]], f[self.cells[d].members[0]]);
                if (a - b).abs() <= rel * scale {
                    let (rc, rd) = (root(&mut parent, c), root(&mut parent, d));
                    if rc != rd {
                        parent[rc.max(rd)] = rc.min(rd);
                        merged = true;
                    }
                }
            }
        }
        if !merged {
            return None;
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for c in 0..k {
            let r = root(&mut parent, c);
            groups.entry(r).or_default().push(c);
        }
        let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
        // Split invalid groups back into their cells until the partition
        // is valid; the unmerged partition always is.
        loop {
            let members: Vec<Vec<usize>> = groups
                .iter()
                .map(|grp| {
                    let mut ms: Vec<usize> = grp.iter().flat_map(|&c| self.cells[c].members.iter().copied()).collect();
                    ms.sort_unstable();
                    ms
                })
                .collect();
            if let Some(q) = Quotient::new(g, members.clone()) {
                return (q.cells.len() < k).then_some(q);
            }
            let bad = groups
                .iter()
                .position(|grp| grp.len() > 1 && !Self::group_is_uniform(g, &members, grp, self))
                .or_else(|| groups.iter().position(|grp| grp.len() > 1))?;
            let split = groups.remove(bad);
            groups.extend(split.into_iter().map(|c| vec![c]));
        }
    }

    fn group_is_uniform(g: &Graph, members: &[Vec<usize>], grp: &[usize], base: &Quotient) -> bool {
        let mut owner = vec![None; g.vertex_count()];
        for (i, ms) in members.iter().enumerate() {
            for &v in ms {
                owner[v] = Some(i);
            }
        }
        let this = owner[base.cells[grp[0]].members[0]];
        let sig = |v: usize| {
            let mut counts: BTreeMap<Option<usize>, usize> = BTreeMap::new();
            for &w in g.neighbors(v) {
                if owner[w] != this {
                    *counts.entry(owner[w]).or_default() += 1;
                }
            }
            counts
        };
        let first = sig(base.cells[grp[0]].members[0]);
        grp.iter()
            .flat_map(|&c| base.cells[c].members.iter())
            .all(|&v| sig(v) == first)
    }

    fn spread(&self, g: &[f64], n: usize) -> Vec<f64> {
        let mut full = vec![0.0; n];
        for (cell, &value) in self.cells.iter().zip(g) {
            for &v in &cell.members {
                full[v] = value;
            }
        }
        full
    }
}

struct Problem<'a> {
    g: &'a Graph,
    p: f64,
    colour: Vec<usize>,
    base: Quotient,
}

impl<'a> Problem<'a> {
    fn new(g: &'a Graph, p: f64, interior: &[usize]) -> Self {
        let colour = equitable_partition(g);
        let mut by_colour: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &v in interior {
            by_colour.entry(colour[v]).or_default().push(v);
        }
        let base = Quotient::new(g, by_colour.into_values().collect())
            .expect("equitable partitions are valid quotients");
        Problem { g, p, colour, base }
    }

    /// Absolute values, per-cell averaging, unit p-norm. Returns `false` if
    /// the result vanishes.
    fn project(&self, f: &mut [f64]) -> bool {
        for cell in &self.base.cells {
            let mean = cell.members.iter().map(|&v| f[v].abs()).sum::<f64>() / cell.members.len() as f64;
            for &v in &cell.members {
                f[v] = mean;
            }
        }
        for (v, c) in self.base.cell_of.iter().enumerate() {
            if c.is_none() {
                f[v] = 0.0;
            }
        }
        let norm = p_norm_pow(f, self.p);
        if !(norm > 0.0 && norm.is_finite()) {
            return false;
        }
        let scale = norm.powf(-1.0 / self.p);
        f.iter_mut().for_each(|x| *x *= scale);
        true
    }

    fn quotient(&self, f: &[f64]) -> f64 {
        dirichlet_energy(self.g, f, self.p) / p_norm_pow(f, self.p)
    }

    /// Gradient of the Rayleigh quotient at a unit-norm `f`, together with
    /// the eigen-equation residual `max |Δ_p f - λ φ(f)|` it implies.
    fn gradient(&self, f: &[f64], lambda: f64) -> (Vec<f64>, f64) {
        let lap = p_laplacian_unchecked(self.g, f, self.p);
        let mut residual = 0.0f64;
        let grad = (0..f.len())
            .map(|x| {
                if self.base.cell_of[x].is_none() {
                    0.0
                } else {
                    let r = lap[x] - lambda * signed_pow(f[x], self.p);
                    residual = residual.max(r.abs());
                    self.p * r
                }
            })
            .collect();
        (grad, residual)
    }

    fn run(&self, mut f: Vec<f64>, opts: &SolverOptions) -> Run {
        if !self.project(&mut f) {
            return Run {
                lambda: f64::NAN,
                f,
                residual: f64::INFINITY,
                iterations: 0,
                converged: false,
            };
        }
        let mut lambda = self.quotient(&f);
        let mut stable = 0usize;
        let mut iterations = 0usize;
        let mut next_newton = NEWTON_FIRST;
        let mut best: Option<Run> = None;

        while iterations < opts.max_iterations {
            let (grad, residual) = self.gradient(&f, lambda);
            if stable >= LAMBDA_STABLE_ITERS
                && residual <= self.residual_tolerance(&f, lambda, opts.tol_residual)
            {
                return Run {
                    lambda,
                    residual: eigen_residual(self.g, &f, lambda, self.p),
                    f,
                    iterations,
                    converged: true,
                };
            }
            if iterations >= next_newton {
                next_newton += NEWTON_EVERY;
                let mut merged: Vec<Quotient> = Vec::new();
                for rel in PLATEAU_RELS {
                    if let Some(q) = self.base.plateaus(self.g, &f, rel) {
                        if merged.iter().all(|m| m.cell_of != q.cell_of) {
                            merged.push(q);
                        }
                    }
                }
                for q in merged.iter().chain(std::iter::once(&self.base)) {
                    let polished = self.newton(q, &f, lambda, opts);
                    iterations += polished.iterations;
                    if polished.converged {
                        return Run { iterations, ..polished };
                    }
                    if best.as_ref().is_none_or(|b| polished.residual < b.residual) {
                        best = Some(polished);
                    }
                }
            }

            let grad_sq: f64 = grad.iter().map(|g| g * g).sum();
            let mut step = 1.0;
            let mut trial = vec![0.0; f.len()];
            let accepted = loop {
                for ((t, &x), &d) in trial.iter_mut().zip(&f).zip(&grad) {
                    *t = x - step * d;
                }
                if self.project(&mut trial) {
                    let candidate = self.quotient(&trial);
                    if candidate <= lambda - ARMIJO_C * step * grad_sq {
                        break Some(candidate);
                    }
                }
                step *= ARMIJO_SHRINK;
                if step < ARMIJO_MIN_STEP {
                    break None;
                }
            };
            iterations += 1;
            match accepted {
                Some(candidate) => {
                    let change = (lambda - candidate).abs() / lambda.abs().max(f64::MIN_POSITIVE);
                    stable = if change <= opts.tol_lambda_rel { stable + 1 } else { 0 };
                    lambda = candidate;
                    std::mem::swap(&mut f, &mut trial);
                }
                // no descent possible at working precision
                None => stable = LAMBDA_STABLE_ITERS,
            }
        }

        let residual = eigen_residual(self.g, &f, lambda, self.p);
        let last = Run {
            lambda,
            f,
            residual,
            iterations,
            converged: false,
        };
        match best {
            Some(b) if b.residual < last.residual => Run { iterations, ..b },
            _ => last,
        }
    }

    /// Damped Newton on the cell-reduced system
    /// `F_c(g, λ) = Σ_d m_cd φ(g_c - g_d) - λ φ(g_c) = 0`,
    /// `Σ_c |c| g_c^p = 1`, keeping every `g_c > 0`.
    fn newton(&self, q: &Quotient, f: &[f64], lambda0: f64, opts: &SolverOptions) -> Run {
        let p = self.p;
        let k = q.cells.len();
        let mut g: Vec<f64> = q
            .cells
            .iter()
            .map(|c| c.members.iter().map(|&v| f[v]).sum::<f64>() / c.members.len() as f64)
            .collect();
        let mut lambda = lambda0;
        let mut fx = Self::newton_system(q, p, &g, lambda);
        let mut norm = fx.norm();
        let mut iterations = 0;
        let mut last_dlambda = f64::INFINITY;

        while iterations < NEWTON_MAX_ITERS {
            iterations += 1;
            let Some(jac) = Self::newton_jacobian(q, p, &g, lambda) else {
                break;
            };
            let Some(delta) = jac.lu().solve(&(-&fx)) else {
                break;
            };
            let mut alpha = 1.0;
            let mut accepted = false;
            while alpha > 1e-12 {
                let trial: Vec<f64> = (0..k).map(|c| g[c] + alpha * delta[c]).collect();
                if trial.iter().all(|&x| x > 0.0) {
                    let trial_lambda = lambda + alpha * delta[k];
                    let trial_fx = Self::newton_system(q, p, &trial, trial_lambda);
                    let trial_norm = trial_fx.norm();
                    if trial_norm < norm {
                        last_dlambda = (trial_lambda - lambda).abs();
                        g = trial;
                        lambda = trial_lambda;
                        fx = trial_fx;
                        norm = trial_norm;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted {
                // at the resolution limit: the predicted correction bounds
                // how far λ can still move
                last_dlambda = delta[k].abs();
                break;
            }
            if norm == 0.0 {
                break;
            }
            if last_dlambda <= opts.tol_lambda_rel * lambda.abs() * 1e-2 && norm <= opts.tol_residual * 1e-2 {
                break;
            }
        }

        let mut full = q.spread(&g, f.len());
        let norm_pow = p_norm_pow(&full, p);
        if norm_pow > 0.0 && norm_pow.is_finite() {
            let scale = norm_pow.powf(-1.0 / p);
            full.iter_mut().for_each(|x| *x *= scale);
        } else {
            return Run {
                lambda: f64::NAN,
                f: full,
                residual: f64::INFINITY,
                iterations,
                converged: false,
            };
        }
        let rayleigh = self.quotient(&full);
        let residual = eigen_residual(self.g, &full, rayleigh, p);
        let tolerance = self.residual_tolerance(&full, rayleigh, opts.tol_residual);
        // R - λ = Σ_x r(x) f(x) for the residual r at λ, so once the
        // residual is held up by round-off λ can only settle to that order.
        let mut lambda_tol = opts.tol_lambda_rel * rayleigh.abs();
        if tolerance > opts.tol_residual {
            lambda_tol = lambda_tol.max(tolerance * full.iter().sum::<f64>());
        }
        let settled = (rayleigh - lambda).abs() <= lambda_tol && last_dlambda <= lambda_tol;
        let positive = q.cells.iter().all(|c| full[c.members[0]] > 0.0);
        Run {
            lambda: rayleigh,
            f: full,
            residual,
            iterations,
            converged: settled
                && positive
                && residual <= tolerance,
        }
    }

    /// `max(tol, floor)` where `floor` bounds the residual change caused by
    /// moving every value of `f` by a few ulps. For `p` near 1 adjacent
    /// values of the eigenfunction can be ulps apart, and `φ'(t) ~ t^{p-2}`
    /// then puts the best representable residual above any fixed tolerance.
    fn residual_tolerance(&self, f: &[f64], lambda: f64, tol: f64) -> f64 {
        tolerance_with_cells(self.g, &self.colour, f, lambda, self.p, tol)
    }

    fn cell_value(g: &[f64], cell: Option<usize>) -> f64 {
        cell.map_or(0.0, |d| g[d])
    }

    fn newton_system(q: &Quotient, p: f64, g: &[f64], lambda: f64) -> DVector<f64> {
        let k = q.cells.len();
        let mut out = DVector::zeros(k + 1);
        for (c, cell) in q.cells.iter().enumerate() {
            let flux: f64 = cell
                .links
                .iter()
                .map(|&(d, m)| m as f64 * signed_pow(g[c] - Self::cell_value(g, d), p))
                .sum();
            out[c] = flux - lambda * signed_pow(g[c], p);
        }
        out[k] = q
            .cells
            .iter()
            .zip(g)
            .map(|(cell, &x)| cell.members.len() as f64 * x.powf(p))
            .sum::<f64>()
            - 1.0;
        out
    }

    fn newton_jacobian(q: &Quotient, p: f64, g: &[f64], lambda: f64) -> Option<DMatrix<f64>> {
        let k = q.cells.len();
        // Gaps below a few ulps of the largest value are not resolvable;
        // flooring them keeps φ' finite for p < 2 when two cells meet.
        let scale = g.iter().copied().fold(0.0, f64::max);
        let min_gap = 4.0 * f64::EPSILON * scale;
        let dphi = |t: f64| (p - 1.0) * t.abs().max(min_gap).powf(p - 2.0);
        let mut jac = DMatrix::zeros(k + 1, k + 1);
        for (c, cell) in q.cells.iter().enumerate() {
            for &(d, m) in &cell.links {
                let w = m as f64 * dphi(g[c] - Self::cell_value(g, d));
                if !w.is_finite() {
                    return None;
                }
                jac[(c, c)] += w;
                if let Some(d) = d {
                    jac[(c, d)] -= w;
                }
            }
            jac[(c, c)] -= lambda * dphi(g[c]);
            jac[(c, k)] = -signed_pow(g[c], p);
            jac[(k, c)] = p * cell.members.len() as f64 * g[c].powf(p - 1.0);
        }
        jac.iter().all(|x| x.is_finite()).then_some(jac)
    }
}
