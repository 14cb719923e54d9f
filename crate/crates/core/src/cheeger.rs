//! Exact Dirichlet Cheeger constant
//! `h_D(G) = min_{∅ ≠ U ⊆ Ω} |E(U, V \ U)| / |U|`, which equals the first
//! Dirichlet eigenvalue at `p = 1`.
//!
//! All `2^|Ω| - 1` subsets are scanned by size, then lexicographically, and
//! ratios are compared by cross-multiplication, so the value, the witness and
//! the tie count are exact and reproducible.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_CHEEGER_INTERIOR: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheegerResult {
    /// Reduced `|E(U, U^c)| / |U|` of the witness.
    pub value: Ratio<u64>,
    /// First minimiser in (size, lexicographic) order.
    pub witness: Vec<usize>,
    /// Number of minimising subsets.
    pub ties: u64,
}

impl Serialize for CheegerResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            h_num: u64,
            h_den: u64,
            witness: &'a [usize],
            ties: u64,
        }
        Wire {
            h_num: *self.value.numer(),
            h_den: *self.value.denom(),
            witness: &self.witness,
            ties: self.ties,
        }
        .serialize(s)
    }
}

pub fn dirichlet_cheeger(g: &Graph) -> Result<CheegerResult> {
    let interior = g.boundary_partition().interior;
    let k = interior.len();
    if k == 0 {
        return Err(Error::EmptyInterior);
    }
    if k > MAX_CHEEGER_INTERIOR {
        return Err(Error::TooLarge(format!(
            "Cheeger search limited to {MAX_CHEEGER_INTERIOR} interior vertices, got {k}"
        )));
    }
    let mut slot = vec![usize::MAX; g.vertex_count()];
    for (a, &v) in interior.iter().enumerate() {
        slot[v] = a;
    }
    let degree: Vec<u64> = interior.iter().map(|&v| g.degree(v) as u64).collect();
    let inner: Vec<u32> = interior
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter(|&&w| slot[w] != usize::MAX)
                .fold(0u32, |m, &w| m | (1 << slot[w]))
        })
        .collect();

    // (cut, size, witness mask)
    let mut best: Option<(u64, u64, u32)> = None;
    let mut ties = 0u64;
    let mut combo: Vec<usize> = Vec::with_capacity(k);
    for size in 1..=k {
        combo.clear();
        combo.extend(0..size);
        let s = size as u64;
        loop {
            let mask = combo.iter().fold(0u32, |m, &a| m | (1 << a));
            let cut: u64 = combo
                .iter()
                .map(|&a| degree[a] - (inner[a] & mask).count_ones() as u64)
                .sum();
            match best {
                Some((bc, bs, _)) if cut * bs > bc * s => {}
                Some((bc, bs, _)) if cut * bs == bc * s => ties += 1,
                _ => {
                    best = Some((cut, s, mask));
                    ties = 1;
                }
            }
            if !next_combination(&mut combo, k) {
                break;
            }
        }
    }
    let (cut, size, mask) = best.expect("interior is nonempty");
    Ok(CheegerResult {
        value: Ratio::new(cut, size),
        witness: (0..k).filter(|&a| mask & (1 << a) != 0).map(|a| interior[a]).collect(),
        ties,
    })
}

/// `λ_{1,1}(G) = h_D(G)`.
pub fn lambda_1_1(g: &Graph) -> Result<Ratio<u64>> {
    dirichlet_cheeger(g).map(|r| r.value)
}

/// `|E(U, V \ U)|` for an arbitrary vertex set `U`.
pub fn edge_boundary(g: &Graph, set: &[usize]) -> usize {
    let mut inside = vec![false; g.vertex_count()];
    for &v in set {
        inside[v] = true;
    }
    g.edges().filter(|&(u, v)| inside[u] != inside[v]).count()
}

/// Advances `combo` (strictly increasing, values `< k`) to the next
/// combination of the same size in lexicographic order.
fn next_combination(combo: &mut [usize], k: usize) -> bool {
    let s = combo.len();
    let Some(i) = (0..s).rev().find(|&i| combo[i] < k - s + i) else {
        return false;
    };
    combo[i] += 1;
    for j in i + 1..s {
        combo[j] = combo[j - 1] + 1;
    }
    true
}
