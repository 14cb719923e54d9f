//! Exhaustive checks of the tadpole extremal claims over small graph
//! families, with margin-bearing reports.
//!
//! Floating-point claims are decided against a margin of ten times the
//! residual tolerance; the `p = 1` claim is decided exactly. Family scans
//! record unconverged solves as failing entries instead of dropping them,
//! and every scan is sorted on `(lambda, key)` so the output does not depend
//! on scheduling when solves run in parallel.

mod claims;

pub use claims::{
    scan_family, verify_cheeger_upper_bound, verify_fk_edges, verify_fk_p1, verify_fk_vertices,
    verify_lemma_head_max, verify_p_limit, verify_path_chain, verify_tadpole_comparison,
};

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CanonicalKey;
use crate::spectral::SolverOptions;

/// Default exponent grid for the family scans.
pub const DEFAULT_P_GRID: [f64; 5] = [1.2, 1.5, 2.0, 3.0, 4.0];

/// Strict inequalities must clear this multiple of the residual tolerance.
pub const MARGIN_FACTOR: f64 = 10.0;

/// Identifier of a checked claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Claim {
    /// `T_{n,3}` uniquely minimises `λ_{1,p}` among connected graphs with
    /// boundary on `n` vertices.
    #[serde(rename = "thm-vertices")]
    FkVertices,
    /// Same over connected graphs with boundary and `m` edges.
    #[serde(rename = "thm-edges")]
    FkEdges,
    /// At `p = 1`: `h_D >= 1/(m-1)` with equality exactly on the tadpoles.
    #[serde(rename = "thm-p1")]
    FkP1,
    /// The eigenfunction of `T_{n,i}` peaks on the head, off the neck.
    #[serde(rename = "lem-head-max")]
    HeadMax,
    /// `λ(T_{n,4}) > λ(T_{n,3})`.
    #[serde(rename = "lem-tadpole")]
    TadpoleComparison,
    /// `λ(P_n) > λ(P_{n+1}) > λ(T_{n,3})`.
    #[serde(rename = "lem-path")]
    PathChain,
    /// `λ_{1,p} → h_D` as `p → 1`.
    #[serde(rename = "p-limit")]
    PLimit,
    /// `λ_{1,p} <= h_D` by testing indicator functions.
    #[serde(rename = "cheeger-upper-bound")]
    CheegerUpperBound,
}

impl Claim {
    pub const ALL: [Claim; 8] = [
        Claim::FkVertices,
        Claim::FkEdges,
        Claim::FkP1,
        Claim::HeadMax,
        Claim::TadpoleComparison,
        Claim::PathChain,
        Claim::PLimit,
        Claim::CheegerUpperBound,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::FkVertices => "thm-vertices",
            Claim::FkEdges => "thm-edges",
            Claim::FkP1 => "thm-p1",
            Claim::HeadMax => "lem-head-max",
            Claim::TadpoleComparison => "lem-tadpole",
            Claim::PathChain => "lem-path",
            Claim::PLimit => "p-limit",
            Claim::CheegerUpperBound => "cheeger-upper-bound",
        }
    }

    /// Numbered names the claims are also known by.
    pub fn alias(self) -> Option<&'static str> {
        match self {
            Claim::FkVertices => Some("thm-1.2"),
            Claim::FkEdges => Some("thm-1.3"),
            Claim::FkP1 => Some("thm-1.4"),
            Claim::HeadMax => Some("lem-2.2"),
            Claim::TadpoleComparison => Some("lem-2.3"),
            Claim::PathChain => Some("lem-2.4"),
            Claim::PLimit | Claim::CheegerUpperBound => None,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s || c.alias() == Some(s))
            .ok_or_else(|| Error::Precondition(format!("unknown claim '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Right direction, but the margin does not clear the threshold.
    Inconclusive,
    /// At least one solve did not converge.
    Unconverged,
}

/// A margin or threshold: floating-point, or exact for the `p = 1` claim.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Margin {
    Real(f64),
    Exact { num: i64, den: i64 },
}

impl From<Ratio<i64>> for Margin {
    fn from(r: Ratio<i64>) -> Self {
        Margin::Exact {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

/// `num / den` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Exact {
    pub num: u64,
    pub den: u64,
}

impl From<Ratio<u64>> for Exact {
    fn from(r: Ratio<u64>) -> Self {
        Exact {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

/// One graph (at one exponent) inside a report.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Entry {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub key: Option<CanonicalKey>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    /// Exact Dirichlet Cheeger constant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<Exact>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<f64>>,
}

/// Residual tolerance in force at one exponent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentTolerance {
    pub p: f64,
    pub tol_residual: f64,
}

/// Solver settings embedded in every floating-point report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverMeta {
    pub seed: u64,
    pub random_starts: usize,
    pub max_iterations: usize,
    pub tol_lambda_rel: f64,
    pub tolerances: Vec<ExponentTolerance>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub claim: Claim,
    pub params: serde_json::Value,
    pub pass: bool,
    pub status: Status,
    /// Distance from failing; positive when the claim holds. `pass` implies
    /// `margin > threshold` (`>=` for the non-strict bounds).
    pub margin: Margin,
    pub threshold: Margin,
    pub entries: Vec<Entry>,
    pub notes: Vec<String>,
    /// `None` for the exact `p = 1` claim.
    pub solver: Option<SolverMeta>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    /// One row per entry: canonical key (hex), `n`, `m`, `p`, `lambda`,
    /// `residual`. For the exact claim `lambda` is `h_D` as `num/den`.
    pub fn to_csv(&self) -> Result<String> {
        reports_to_csv(std::slice::from_ref(self))
    }
}

#[derive(Serialize)]
struct CsvRow {
    claim: Claim,
    key: String,
    n: usize,
    m: usize,
    p: String,
    lambda: String,
    residual: String,
}

/// Rows of several reports under one header.
pub fn reports_to_csv(reports: &[VerificationReport]) -> Result<String> {
    let opt = |x: Option<f64>| x.map(|v| format!("{v:?}")).unwrap_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    for report in reports {
        for e in &report.entries {
            let lambda = match (e.lambda, e.h) {
                (Some(l), _) => format!("{l:?}"),
                (None, Some(h)) => format!("{}/{}", h.num, h.den),
                (None, None) => String::new(),
            };
            let exact = e.lambda.is_none() && e.h.is_some();
            w.serialize(CsvRow {
                claim: report.claim,
                key: e.key.map(|k| k.to_hex()).unwrap_or_default(),
                n: e.n,
                m: e.m,
                p: if exact { "1".into() } else { opt(e.p) },
                lambda,
                residual: if exact { "0".into() } else { opt(e.residual) },
            })
            .map_err(|err| Error::Io(std::io::Error::other(err)))?;
        }
    }
    let bytes = w.into_inner().map_err(|err| Error::Io(err.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Solver settings shared by every exponent of a verification run. The
/// residual tolerance defaults per exponent (see [`SolverOptions::new`]).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub tol_residual: Option<f64>,
    pub tol_lambda_rel: Option<f64>,
    pub max_iterations: Option<usize>,
    pub random_starts: Option<usize>,
    /// Solve the graphs of a family on the rayon pool. Does not change any
    /// output.
    pub parallel: bool,
}

impl VerifyConfig {
    pub fn solver(&self, p: f64) -> SolverOptions {
        let mut opts = SolverOptions::new(p).with_seed(self.seed);
        if let Some(t) = self.tol_residual {
            opts.tol_residual = t;
        }
        if let Some(t) = self.tol_lambda_rel {
            opts.tol_lambda_rel = t;
        }
        if let Some(m) = self.max_iterations {
            opts.max_iterations = m;
        }
        if let Some(s) = self.random_starts {
            opts.random_starts = s;
        }
        opts
    }

    fn meta(&self, ps: &[f64]) -> SolverMeta {
        let base = self.solver(ps.first().copied().unwrap_or(2.0));
        SolverMeta {
            seed: self.seed,
            random_starts: base.random_starts,
            max_iterations: base.max_iterations,
            tol_lambda_rel: base.tol_lambda_rel,
            tolerances: ps
                .iter()
                .map(|&p| ExponentTolerance {
                    p,
                    tol_residual: self.solver(p).tol_residual,
                })
                .collect(),
        }
    }
}

/// Which exhaustive family a scan covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Connected graphs with boundary on `n` vertices.
    Vertices(usize),
    /// Connected graphs with boundary and `m` edges.
    Edges(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanEntry {
    pub key: CanonicalKey,
    pub n: usize,
    pub m: usize,
    /// Best attempt when unconverged.
    pub lambda: f64,
    pub residual: f64,
    pub converged: bool,
}

/// `λ_{1,p}` over a whole family, sorted by `(lambda, key)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyScan {
    pub family: Family,
    pub p: f64,
    pub entries: Vec<ScanEntry>,
    pub minimizer_key: CanonicalKey,
    /// `lambda[1] - lambda[0]`, infinite for a one-graph family.
    pub runner_up_gap: f64,
}

impl FamilyScan {
    pub fn all_converged(&self) -> bool {
        self.entries.iter().all(|e| e.converged)
    }
}
