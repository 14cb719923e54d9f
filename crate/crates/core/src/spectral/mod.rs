//! The combinatorial p-Laplacian and its first Dirichlet eigenpair.
//!
//! For `f` on the vertices,
//! `Δ_p f(x) = Σ_{y ~ x} |f(x) - f(y)|^{p-2} (f(x) - f(y))`,
//! and the first Dirichlet eigenvalue is the minimum of the p-Rayleigh
//! quotient `Σ_{edges} |f(x) - f(y)|^p / Σ_x |f(x)|^p` over nonzero `f`
//! vanishing on the boundary.

mod linear;
mod solver;

pub use linear::{linear_first_dirichlet, linear_ground_state};
pub use solver::{equitable_partition, first_eigenpair, residual_tolerance, EigenResult, SolverOptions};

use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Supported exponent range for the p-Laplacian solver.
pub const MAX_EXPONENT: f64 = 8.0;

/// One real value per vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexFunction(pub Vec<f64>);

impl VertexFunction {
    pub fn zeros(n: usize) -> Self {
        VertexFunction(vec![0.0; n])
    }

    /// Characteristic function of `set`.
    pub fn indicator(n: usize, set: &[usize]) -> Self {
        let mut f = Self::zeros(n);
        for &v in set {
            f.0[v] = 1.0;
        }
        f
    }

    pub fn scaled(&self, c: f64) -> Self {
        VertexFunction(self.0.iter().map(|x| c * x).collect())
    }

    pub fn abs(&self) -> Self {
        VertexFunction(self.0.iter().map(|x| x.abs()).collect())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for VertexFunction {
    fn from(v: Vec<f64>) -> Self {
        VertexFunction(v)
    }
}

impl Deref for VertexFunction {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for VertexFunction {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

/// `|t|^{p-1} sign(t)`, continuous at zero for `p > 1`.
#[inline]
pub(crate) fn signed_pow(t: f64, p: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t.abs().powf(p - 1.0).copysign(t)
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange(p))
    }
}

fn check_len(g: &Graph, f: &[f64]) -> Result<()> {
    if f.len() == g.vertex_count() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "function has {} values for {} vertices",
            f.len(),
            g.vertex_count()
        )))
    }
}

/// `Δ_p f` at every vertex, boundary included.
pub fn apply_p_laplacian(g: &Graph, f: &[f64], p: f64) -> Result<VertexFunction> {
    check_exponent(p)?;
    check_len(g, f)?;
    Ok(VertexFunction(p_laplacian_unchecked(g, f, p)))
}

pub(crate) fn p_laplacian_unchecked(g: &Graph, f: &[f64], p: f64) -> Vec<f64> {
    (0..g.vertex_count())
        .map(|x| {
            g.neighbors(x)
                .iter()
                .map(|&y| signed_pow(f[x] - f[y], p))
                .sum()
        })
        .collect()
}

/// `Σ_x |f(x)|^p`.
pub fn p_norm_pow(f: &[f64], p: f64) -> f64 {
    f.iter().map(|x| x.abs().powf(p)).sum()
}

/// `Σ_{{x,y} ∈ E} |f(x) - f(y)|^p`.
pub fn dirichlet_energy(g: &Graph, f: &[f64], p: f64) -> f64 {
    g.edges().map(|(x, y)| (f[x] - f[y]).abs().powf(p)).sum()
}

fn check_dirichlet(g: &Graph, f: &[f64]) -> Result<()> {
    check_len(g, f)?;
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.is_boundary(v) && f[v] != 0.0) {
        return Err(Error::BoundaryViolation(v));
    }
    if f.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroFunction);
    }
    Ok(())
}

/// p-Rayleigh quotient of a nonzero function vanishing on the boundary.
/// Defined for `p >= 1`.
pub fn rayleigh_quotient(g: &Graph, f: &[f64], p: f64) -> Result<f64> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::ExponentOutOfRange(p));
    }
    check_dirichlet(g, f)?;
    Ok(dirichlet_energy(g, f, p) / p_norm_pow(f, p))
}

/// Gradient of the p-Rayleigh quotient:
/// `(p / ‖f‖_p^p) (Δ_p f(x) - R_p[f] |f(x)|^{p-2} f(x))` on interior
/// vertices and zero on the boundary.
pub fn rayleigh_gradient(g: &Graph, f: &[f64], p: f64) -> Result<VertexFunction> {
    check_exponent(p)?;
    check_dirichlet(g, f)?;
    let norm = p_norm_pow(f, p);
    let r = dirichlet_energy(g, f, p) / norm;
    let lap = p_laplacian_unchecked(g, f, p);
    Ok(VertexFunction(
        (0..g.vertex_count())
            .map(|x| {
                if g.is_boundary(x) {
                    0.0
                } else {
                    p / norm * (lap[x] - r * signed_pow(f[x], p))
                }
            })
            .collect(),
    ))
}

/// `max_{x ∈ Ω} |Δ_p f(x) - λ |f(x)|^{p-2} f(x)|`; zero when the interior is
/// empty.
pub fn eigen_residual(g: &Graph, f: &[f64], lambda: f64, p: f64) -> f64 {
    let lap = p_laplacian_unchecked(g, f, p);
    (0..g.vertex_count())
        .filter(|&x| !g.is_boundary(x))
        .map(|x| (lap[x] - lambda * signed_pow(f[x], p)).abs())
        .fold(0.0, f64::max)
}
