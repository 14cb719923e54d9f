use nalgebra::DMatrix;

use super::solver::check_problem;
use super::VertexFunction;
use crate::error::Result;
use crate::graph::Graph;

/// Smallest eigenvalue of the interior principal submatrix of `D - A`,
/// i.e. the first Dirichlet eigenvalue at `p = 2`.
pub fn linear_first_dirichlet(g: &Graph) -> Result<f64> {
    linear_ground_state(g).map(|(lambda, _)| lambda)
}

/// Linear Dirichlet ground state: eigenvalue and a nonnegative eigenvector
/// extended by zero to the boundary, unit Euclidean norm.
pub fn linear_ground_state(g: &Graph) -> Result<(f64, VertexFunction)> {
    let interior = check_problem(g)?;
    let k = interior.len();
    let mut index = vec![usize::MAX; g.vertex_count()];
    for (a, &v) in interior.iter().enumerate() {
        index[v] = a;
    }
    let mut m = DMatrix::<f64>::zeros(k, k);
    for (a, &v) in interior.iter().enumerate() {
        m[(a, a)] = g.degree(v) as f64;
        for &w in g.neighbors(v) {
            if index[w] != usize::MAX {
                m[(a, index[w])] = -1.0;
            }
        }
    }
    let eig = m.symmetric_eigen();
    let (col, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("interior is nonempty");
    let mut f = VertexFunction::zeros(g.vertex_count());
    for (a, &v) in interior.iter().enumerate() {
        f[v] = eig.eigenvectors[(a, col)].abs();
    }
    Ok((lambda, f))
}
