//! First Dirichlet eigenvalues of the combinatorial p-Laplacian on graphs
//! with boundary, exact Dirichlet Cheeger constants, and an exhaustive
//! harness checking that the tadpole `T_{n,3}` is the unique minimiser over
//! small graph families.
//!
//! Modules:
//!
//! - [`graph`]: graphs, boundary/interior split, named families, canonical
//!   keys, exhaustive enumeration, edge-list and JSON forms.
//! - [`spectral`]: the p-Laplacian, p-Rayleigh quotient, and the certified
//!   first-eigenpair solver with its linear (`p = 2`) oracle.
//! - [`cheeger`]: exact rational Dirichlet Cheeger constant.
//! - [`verify`]: family scans and lemma checks producing JSON/CSV reports.

pub mod cheeger;
pub mod error;
pub mod graph;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
