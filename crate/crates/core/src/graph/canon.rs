//! Canonical keys by exhaustive permutation minimisation.
//!
//! The adjacency bit-string lists the upper triangle column by column:
//! `(0,1), (0,2), (1,2), (0,3), ...`, so after the first `k` positions of a
//! labelling are fixed, the first `k(k-1)/2` bits are fixed too. The key is
//! the lexicographically smallest such string over all `n!` labellings. The
//! search is a depth-first walk over labellings that abandons a branch only
//! when its fixed prefix is already strictly larger than the best complete
//! string, so the result is the exact minimum.

use std::fmt;

use serde::{Serialize, Serializer};

use super::Graph;
use crate::error::{Error, Result};

pub const MAX_CANON_VERTICES: usize = 10;

/// Isomorphism-invariant graph identifier. Ordered by vertex count, then by
/// the minimal adjacency bit-string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    n: u8,
    bits: u64,
}

impl CanonicalKey {
    pub fn vertex_count(&self) -> usize {
        self.n as usize
    }

    /// Packed bit-string, first bit most significant.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Vertex count byte followed by the bit-string packed big-endian into
    /// `ceil(n(n-1)/2 / 8)` bytes.
    pub fn bytes(&self) -> Vec<u8> {
        let len = pair_count(self.n as usize);
        let nbytes = len.div_ceil(8);
        let padded = if len == 0 { 0 } else { self.bits << (nbytes * 8 - len) };
        let mut out = vec![self.n];
        out.extend((0..nbytes).rev().map(|k| (padded >> (8 * k)) as u8));
        out
    }

    pub fn to_hex(&self) -> String {
        self.bytes().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// The canonically labelled graph this key encodes.
    pub fn to_graph(&self) -> Graph {
        let n = self.n as usize;
        let len = pair_count(n);
        let mut g = Graph::empty(n);
        for k in 1..n {
            for j in 0..k {
                let pos = pair_count(k) + j;
                if (self.bits >> (len - 1 - pos)) & 1 == 1 {
                    g.add_edge(j, k).expect("key encodes a simple graph");
                }
            }
        }
        g
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn canonical_key(g: &Graph) -> Result<CanonicalKey> {
    canonical_form(g).map(|(key, _)| key)
}

/// Canonical key together with a labelling attaining it: `perm[a]` is the
/// vertex of `g` placed at canonical position `a`, so `g.relabel(&perm)`
/// equals `key.to_graph()`.
pub fn canonical_form(g: &Graph) -> Result<(CanonicalKey, Vec<usize>)> {
    let n = g.vertex_count();
    if n > MAX_CANON_VERTICES {
        return Err(Error::TooLarge(format!(
            "canonical key limited to {MAX_CANON_VERTICES} vertices, got {n}"
        )));
    }
    let rows: Vec<u16> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u16, |m, &w| m | (1 << w)))
        .collect();
    Ok(canonical_rows(&rows))
}

/// Same as [`canonical_form`] on a bitmask adjacency (`rows[v]` bit `w` set
/// iff `v ~ w`), `rows.len() <= MAX_CANON_VERTICES`.
pub(crate) fn canonical_rows(rows: &[u16]) -> (CanonicalKey, Vec<usize>) {
    let n = rows.len();
    debug_assert!(n <= MAX_CANON_VERTICES);
    let mut search = Search {
        rows,
        total: pair_count(n),
        perm: vec![0; n],
        best: None,
        best_perm: (0..n).collect(),
    };
    if n > 1 {
        search.descend(0, 0, 0);
    }
    let key = CanonicalKey {
        n: n as u8,
        bits: search.best.unwrap_or(0),
    };
    (key, search.best_perm)
}

struct Search<'a> {
    rows: &'a [u16],
    total: usize,
    perm: Vec<usize>,
    best: Option<u64>,
    best_perm: Vec<usize>,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize, used: u16, prefix: u64) {
        let n = self.rows.len();
        let shift = self.total - pair_count(depth + 1);

        let mut candidates: Vec<(u64, usize)> = (0..n)
            .filter(|&v| used & (1 << v) == 0)
            .map(|v| {
                let column = self.perm[..depth]
                    .iter()
                    .fold(0u64, |c, &u| (c << 1) | ((self.rows[v] >> u) & 1) as u64);
                ((prefix << depth) | column, v)
            })
            .collect();
        candidates.sort_unstable();

        for (next, v) in candidates {
            if let Some(b) = self.best {
                if next > b >> shift {
                    break;
                }
            }
            self.perm[depth] = v;
            if depth + 1 == n {
                if self.best.is_none_or(|b| next < b) {
                    self.best = Some(next);
                    self.best_perm.copy_from_slice(&self.perm);
                }
            } else {
                self.descend(depth + 1, used | (1 << v), next);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_cycle, make_path, make_star, make_tadpole, TadpoleSpec};

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    // Independent oracle: evaluate the bit-string of every labelling.
    fn brute_key(g: &Graph) -> u64 {
        let n = g.vertex_count();
        permutations(n)
            .into_iter()
            .map(|perm| {
                let mut bits = 0u64;
                for k in 1..n {
                    for j in 0..k {
                        bits = (bits << 1) | g.has_edge(perm[j], perm[k]) as u64;
                    }
                }
                bits
            })
            .min()
            .unwrap_or(0)
    }

    #[test]
    fn relabelled_path_same_key() {
        let a = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let b = Graph::from_edges(3, &[(1, 0), (0, 2)]).unwrap();
        assert_eq!(canonical_key(&a).unwrap(), canonical_key(&b).unwrap());
    }

    #[test]
    fn paw_differs_from_c4() {
        let paw = make_tadpole(TadpoleSpec { n: 4, i: 3 }).unwrap();
        let c4 = make_cycle(4).unwrap();
        assert_ne!(canonical_key(&paw).unwrap(), canonical_key(&c4).unwrap());
    }

    #[test]
    fn star_all_labellings_one_key() {
        let star = make_star(3).unwrap();
        let keys: std::collections::BTreeSet<_> = permutations(4)
            .iter()
            .map(|p| canonical_key(&star.relabel(p)).unwrap())
            .collect();
        assert_eq!(keys.len(), 1);
    }

    #[test]
    fn matches_brute_force_minimum() {
        let graphs = [
            make_path(5).unwrap(),
            make_cycle(6).unwrap(),
            make_star(4).unwrap(),
            make_tadpole(TadpoleSpec { n: 6, i: 4 }).unwrap(),
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (0, 3), (2, 5)]).unwrap(),
            Graph::empty(4),
        ];
        for g in &graphs {
            let (key, perm) = canonical_form(g).unwrap();
            assert_eq!(key.bits(), brute_key(g));
            assert_eq!(g.relabel(&perm), key.to_graph());
        }
    }

    #[test]
    fn too_large() {
        let g = make_path(11).unwrap();
        assert!(matches!(canonical_key(&g), Err(Error::TooLarge(_))));
        assert!(canonical_key(&make_path(10).unwrap()).is_ok());
    }

    #[test]
    fn bytes_layout() {
        let key = canonical_key(&make_path(3).unwrap()).unwrap();
        // minimal string for P_3 over pairs (0,1),(0,2),(1,2) is 011
        assert_eq!(key.bits(), 0b011);
        assert_eq!(key.bytes(), vec![3, 0b0110_0000]);
        assert_eq!(key.to_hex(), "0360");
        let k1 = canonical_key(&Graph::empty(1)).unwrap();
        assert_eq!(k1.bytes(), vec![1]);
    }
}
