//! C ABI over `plap`: opaque graph and eigenpair handles, status codes, and a
//! thread-local last-error message.
//!
//! Every fallible function returns a [`PlapStatus`]; on failure the message
//! is available from [`plap_last_error`] until the next failing call on the
//! same thread. Handles are released with their `_free` function; strings
//! returned by the library are released with [`plap_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use plap::cheeger::dirichlet_cheeger;
use plap::graph::{make_path, make_tadpole, parse_graph, Graph, TadpoleSpec};
use plap::spectral::{first_eigenpair, EigenResult, SolverOptions};
use plap::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlapStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGraph = 3,
    Parse = 4,
    NoBoundary = 5,
    TooLarge = 6,
    NotConverged = 7,
    Internal = 8,
}

/// Opaque graph handle.
pub struct PlapGraph(Graph);

/// Opaque first-eigenpair handle.
pub struct PlapEigenResult(EigenResult);

/// Solver parameters; start from [`plap_solver_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PlapSolverOptions {
    pub p: f64,
    pub tol_residual: f64,
    pub tol_lambda_rel: f64,
    pub max_iterations: u64,
    pub random_starts: u64,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> PlapStatus {
    match e {
        Error::InvalidGraph(_) | Error::Disconnected => PlapStatus::InvalidGraph,
        Error::Parse { .. } | Error::Json(_) => PlapStatus::Parse,
        Error::NoBoundary | Error::EmptyInterior => PlapStatus::NoBoundary,
        Error::TooLarge(_) => PlapStatus::TooLarge,
        Error::NotConverged { .. } => PlapStatus::NotConverged,
        Error::Io(_) => PlapStatus::Internal,
        _ => PlapStatus::InvalidArgument,
    }
}

fn fail(e: Error) -> PlapStatus {
    let status = status_of(&e);
    set_error(e.to_string());
    status
}

fn guard(body: impl FnOnce() -> PlapStatus) -> PlapStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|_| {
        set_error("internal panic");
        PlapStatus::Internal
    })
}

fn null(what: &str) -> PlapStatus {
    set_error(format!("null pointer: {what}"));
    PlapStatus::NullPointer
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn emit_graph(g: plap::Result<Graph>, out: *mut *mut PlapGraph) -> PlapStatus {
    if out.is_null() {
        return null("out");
    }
    match g {
        Ok(g) => {
            *out = Box::into_raw(Box::new(PlapGraph(g)));
            PlapStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            fail(e)
        }
    }
}

/// Message for the last failing call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn plap_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn plap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a graph on `n` vertices from `edge_count` pairs stored flat in
/// `edges` (`u0, v0, u1, v1, ...`).
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values (or be null when
/// `edge_count` is zero); `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plap_graph_from_edges(
    n: u32,
    edges: *const u32,
    edge_count: usize,
    out: *mut *mut PlapGraph,
) -> PlapStatus {
    guard(|| {
        if edges.is_null() && edge_count > 0 {
            return null("edges");
        }
        let flat = if edge_count == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * edge_count) };
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|c| (c[0] as usize, c[1] as usize)).collect();
        emit_graph(Graph::from_edges(n as usize, &pairs), out)
    })
}

/// Parses an edge-list or JSON graph.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plap_graph_parse(text: *const c_char, out: *mut *mut PlapGraph) -> PlapStatus {
    guard(|| {
        if text.is_null() {
            return null("text");
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            set_error("graph text is not valid UTF-8");
            return PlapStatus::Parse;
        };
        emit_graph(parse_graph(text), out)
    })
}

/// Tadpole `T_{n,i}`: a cycle on `i` vertices with a pendant path, `n`
/// vertices in total.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plap_graph_tadpole(n: u32, i: u32, out: *mut *mut PlapGraph) -> PlapStatus {
    guard(|| emit_graph(make_tadpole(TadpoleSpec { n: n as usize, i: i as usize }), out))
}

/// Path on `n` vertices.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plap_graph_path(n: u32, out: *mut *mut PlapGraph) -> PlapStatus {
    guard(|| emit_graph(make_path(n as usize), out))
}

/// # Safety
/// `g` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn plap_graph_free(g: *mut PlapGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count; zero for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plap_graph_vertex_count(g: *const PlapGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// Edge count; zero for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plap_graph_edge_count(g: *const PlapGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Exact Dirichlet Cheeger constant as a reduced fraction.
///
/// # Safety
/// `g` must be a live handle; `num` and `den` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plap_cheeger(g: *const PlapGraph, num: *mut u64, den: *mut u64) -> PlapStatus {
    guard(|| {
        let Some(g) = g.as_ref() else { return null("graph") };
        if num.is_null() || den.is_null() {
            return null("num/den");
        }
        match dirichlet_cheeger(&g.0) {
            Ok(c) => {
                *num = *c.value.numer();
                *den = *c.value.denom();
                PlapStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Default solver parameters for exponent `p`.
#[no_mangle]
pub extern "C" fn plap_solver_options_default(p: f64) -> PlapSolverOptions {
    let o = SolverOptions::new(p);
    PlapSolverOptions {
        p: o.p,
        tol_residual: o.tol_residual,
        tol_lambda_rel: o.tol_lambda_rel,
        max_iterations: o.max_iterations as u64,
        random_starts: o.random_starts as u64,
        seed: o.seed,
    }
}

/// First Dirichlet eigenpair of the p-Laplacian. On `NotConverged` the best
/// iterate is still written to `out` (with `converged` false); on any other
/// failure `out` is set to null.
///
/// # Safety
/// `g` and `opts` must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plap_first_eigenpair(
    g: *const PlapGraph,
    opts: *const PlapSolverOptions,
    out: *mut *mut PlapEigenResult,
) -> PlapStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        *out = ptr::null_mut();
        let Some(g) = g.as_ref() else { return null("graph") };
        let Some(o) = opts.as_ref() else { return null("opts") };
        let opts = SolverOptions {
            p: o.p,
            tol_residual: o.tol_residual,
            tol_lambda_rel: o.tol_lambda_rel,
            max_iterations: o.max_iterations as usize,
            random_starts: o.random_starts as usize,
            seed: o.seed,
        };
        match first_eigenpair(&g.0, &opts) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(PlapEigenResult(r)));
                PlapStatus::Ok
            }
            Err(Error::NotConverged { best }) => {
                set_error(format!("solver did not converge (best residual {:.3e})", best.residual_inf));
                *out = Box::into_raw(Box::new(PlapEigenResult(*best)));
                PlapStatus::NotConverged
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `r` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn plap_eigen_free(r: *mut PlapEigenResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Eigenvalue; NaN for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plap_eigen_lambda(r: *const PlapEigenResult) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.lambda)
}

/// Sup-norm residual of the eigen-equation over the interior; NaN for a null
/// handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plap_eigen_residual(r: *const PlapEigenResult) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.residual_inf)
}

/// Whether the residual certificate holds; false for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plap_eigen_converged(r: *const PlapEigenResult) -> bool {
    r.as_ref().is_some_and(|r| r.0.converged)
}

/// Length of the eigenfunction (the graph's vertex count).
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plap_eigen_len(r: *const PlapEigenResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.eigenfunction.len())
}

/// Copies the eigenfunction into `buf`, which must hold at least
/// [`plap_eigen_len`] values.
///
/// # Safety
/// `r` must be a live handle; `buf` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn plap_eigen_function(r: *const PlapEigenResult, buf: *mut f64, len: usize) -> PlapStatus {
    guard(|| {
        let Some(r) = r.as_ref() else { return null("result") };
        if buf.is_null() {
            return null("buf");
        }
        let f = &r.0.eigenfunction;
        if len < f.len() {
            set_error(format!("buffer holds {len} values, need {}", f.len()));
            return PlapStatus::InvalidArgument;
        }
        ptr::copy_nonoverlapping(f.as_ptr(), buf, f.len());
        PlapStatus::Ok
    })
}

/// The eigenpair as JSON; free with [`plap_string_free`].
///
/// # Safety
/// `r` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn plap_eigen_to_json(r: *const PlapEigenResult, out: *mut *mut c_char) -> PlapStatus {
    guard(|| {
        let Some(r) = r.as_ref() else { return null("result") };
        if out.is_null() {
            return null("out");
        }
        match serde_json::to_string(&r.0) {
            Ok(s) => {
                *out = CString::new(s).unwrap_or_default().into_raw();
                PlapStatus::Ok
            }
            Err(e) => fail(e.into()),
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn plap_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
