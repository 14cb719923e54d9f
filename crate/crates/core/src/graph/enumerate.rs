//! Exhaustive generation of connected graphs up to isomorphism.
//!
//! Every connected graph on `k` vertices has a vertex whose removal leaves a
//! connected graph (a leaf of any spanning tree). So the connected classes on
//! `k` vertices are exactly the classes of "connected class on `k - 1`
//! vertices plus one new vertex joined to a nonempty subset". Each level is
//! deduplicated by [`CanonicalKey`] and stored in canonical labelling.

use std::collections::BTreeMap;

use super::canon::{canonical_rows, CanonicalKey, MAX_CANON_VERTICES};
use super::Graph;
use crate::error::{Error, Result};

pub const MAX_ENUM_VERTICES: usize = 9;
pub const MAX_ENUM_EDGES: usize = 9;

/// Connected graphs on exactly `n` vertices, one per isomorphism class,
/// sorted by canonical key. With `require_boundary`, only graphs with at
/// least one degree-one vertex.
pub fn enumerate_connected_by_vertices(n: usize, require_boundary: bool) -> Result<Vec<Graph>> {
    if n > MAX_ENUM_VERTICES {
        return Err(Error::TooLarge(format!(
            "vertex enumeration limited to n <= {MAX_ENUM_VERTICES}, got {n}"
        )));
    }
    if n == 0 {
        return Err(Error::SpecOutOfRange("vertex count must be at least 1".into()));
    }
    let levels = grow_levels(n, usize::MAX);
    Ok(finish(levels[n - 1].values(), require_boundary, |_| true))
}

/// Connected graphs with exactly `m` edges over every feasible vertex count,
/// one per isomorphism class, sorted by canonical key.
pub fn enumerate_connected_by_edges(m: usize, require_boundary: bool) -> Result<Vec<Graph>> {
    if m > MAX_ENUM_EDGES {
        return Err(Error::TooLarge(format!(
            "edge enumeration limited to m <= {MAX_ENUM_EDGES}, got {m}"
        )));
    }
    let max_vertices = m + 1;
    let min_vertices = (1..=max_vertices)
        .find(|v| v * (v - 1) / 2 >= m)
        .unwrap_or(max_vertices);
    let levels = grow_levels(max_vertices, m);
    let candidates = levels[min_vertices - 1..].iter().flat_map(BTreeMap::values);
    Ok(finish(candidates, require_boundary, |rows| edge_count(rows) == m))
}

fn finish<'a>(
    candidates: impl Iterator<Item = &'a Vec<u16>>,
    require_boundary: bool,
    keep: impl Fn(&[u16]) -> bool,
) -> Vec<Graph> {
    // level maps are already key-ordered and keys sort by vertex count first
    candidates
        .filter(|rows| keep(rows))
        .filter(|rows| !require_boundary || rows.iter().any(|r| r.count_ones() == 1))
        .map(|rows| rows_to_graph(rows))
        .collect()
}

fn edge_count(rows: &[u16]) -> usize {
    rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
}

fn rows_to_graph(rows: &[u16]) -> Graph {
    let mut g = Graph::empty(rows.len());
    for (u, &r) in rows.iter().enumerate() {
        for v in u + 1..rows.len() {
            if r & (1 << v) != 0 {
                g.add_edge(u, v).expect("bitmask rows describe a simple graph");
            }
        }
    }
    g
}

/// `levels[k - 1]` holds the connected classes on `k` vertices with at most
/// `max_edges` edges, keyed canonically.
fn grow_levels(max_vertices: usize, max_edges: usize) -> Vec<BTreeMap<CanonicalKey, Vec<u16>>> {
    debug_assert!((1..=MAX_CANON_VERTICES).contains(&max_vertices));
    let mut levels = vec![BTreeMap::from([(
        canonical_rows(&[0]).0,
        vec![0u16],
    )])];
    for k in 1..max_vertices {
        let mut next = BTreeMap::new();
        for rows in levels[k - 1].values() {
            let base_edges = edge_count(rows);
            for subset in 1u16..(1 << k) {
                if base_edges + subset.count_ones() as usize > max_edges {
                    continue;
                }
                let mut grown = rows.clone();
                for (v, r) in grown.iter_mut().enumerate() {
                    if subset & (1 << v) != 0 {
                        *r |= 1 << k;
                    }
                }
                grown.push(subset);
                let (key, perm) = canonical_rows(&grown);
                next.entry(key).or_insert_with(|| relabel_rows(&grown, &perm));
            }
        }
        levels.push(next);
    }
    levels
}

fn relabel_rows(rows: &[u16], perm: &[usize]) -> Vec<u16> {
    let mut inverse = vec![0usize; rows.len()];
    for (a, &v) in perm.iter().enumerate() {
        inverse[v] = a;
    }
    perm.iter()
        .map(|&v| {
            (0..rows.len())
                .filter(|&w| rows[v] & (1 << w) != 0)
                .fold(0u16, |m, w| m | (1 << inverse[w]))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{canonical_key, make_path, make_star, make_tadpole, TadpoleSpec};
    use std::collections::BTreeSet;

    fn keys(gs: &[Graph]) -> BTreeSet<CanonicalKey> {
        gs.iter().map(|g| canonical_key(g).unwrap()).collect()
    }

    #[test]
    fn known_connected_counts() {
        let expected = [1, 1, 2, 6, 21, 112, 853, 11117];
        for (n, &count) in (1..).zip(expected.iter()) {
            let gs = enumerate_connected_by_vertices(n, false).unwrap();
            assert_eq!(gs.len(), count, "n = {n}");
            assert!(gs.iter().all(|g| g.is_connected() && g.check_invariants()));
        }
    }

    #[test]
    fn four_vertices_with_boundary() {
        let gs = enumerate_connected_by_vertices(4, true).unwrap();
        let expected = keys(&[
            make_path(4).unwrap(),
            make_star(3).unwrap(),
            make_tadpole(TadpoleSpec { n: 4, i: 3 }).unwrap(),
        ]);
        assert_eq!(keys(&gs), expected);
        assert_eq!(gs.len(), 3);
    }

    #[test]
    fn four_edges_with_boundary() {
        let gs = enumerate_connected_by_edges(4, true).unwrap();
        let broom = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (2, 4)]).unwrap();
        let expected = keys(&[
            make_path(5).unwrap(),
            make_star(4).unwrap(),
            broom,
            make_tadpole(TadpoleSpec { n: 4, i: 3 }).unwrap(),
        ]);
        assert_eq!(keys(&gs), expected);
        assert_eq!(gs.len(), 4);
    }

    #[test]
    fn three_edges() {
        let gs = enumerate_connected_by_edges(3, false).unwrap();
        assert_eq!(gs.len(), 3);
        assert!(gs.iter().all(|g| g.edge_count() == 3));
    }

    #[test]
    fn zero_edges() {
        let gs = enumerate_connected_by_edges(0, false).unwrap();
        assert_eq!(gs, vec![Graph::empty(1)]);
        assert!(enumerate_connected_by_edges(0, true).unwrap().is_empty());
    }

    #[test]
    fn output_sorted_by_key() {
        for gs in [
            enumerate_connected_by_vertices(6, false).unwrap(),
            enumerate_connected_by_edges(6, true).unwrap(),
        ] {
            let ks: Vec<_> = gs.iter().map(|g| canonical_key(g).unwrap()).collect();
            assert!(ks.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn bounds() {
        assert!(matches!(enumerate_connected_by_vertices(10, false), Err(Error::TooLarge(_))));
        assert!(matches!(enumerate_connected_by_edges(10, false), Err(Error::TooLarge(_))));
        assert!(matches!(
            enumerate_connected_by_vertices(0, false),
            Err(Error::SpecOutOfRange(_))
        ));
    }
}
