//! Simple undirected graphs with the pendant-vertex boundary convention.
//!
//! A vertex of degree one is a boundary vertex; every other vertex is
//! interior. Dirichlet problems on a [`Graph`] impose zero values on the
//! boundary and solve on the interior.

mod canon;
mod enumerate;
mod io;

pub use canon::{canonical_form, canonical_key, CanonicalKey, MAX_CANON_VERTICES};
pub use enumerate::{
    enumerate_connected_by_edges, enumerate_connected_by_vertices, MAX_ENUM_EDGES,
    MAX_ENUM_VERTICES,
};
pub use io::{parse_edge_list, parse_graph, write_edge_list, GraphJson};

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph stored as sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list, rejecting loops, repeated edges and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) out of range for {n} vertices"
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        match self.adjacency[u].binary_search(&v) {
            Ok(_) => Err(Error::InvalidGraph(format!("repeated edge ({u}, {v})"))),
            Err(pos) => {
                self.adjacency[u].insert(pos, v);
                let pos = self.adjacency[v].binary_search(&u).unwrap_err();
                self.adjacency[v].insert(pos, u);
                Ok(())
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency
            .get(u)
            .is_some_and(|nb| nb.binary_search(&v).is_ok())
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }

    pub fn boundary_partition(&self) -> BoundaryPartition {
        let (boundary, interior) = (0..self.vertex_count()).partition(|&v| self.degree(v) == 1);
        BoundaryPartition { boundary, interior }
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.degree(v) == 1
    }

    /// The graph with vertex `perm[a]` of `self` renamed to `a`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let n = self.vertex_count();
        assert_eq!(perm.len(), n, "permutation length mismatch");
        let mut inverse = vec![usize::MAX; n];
        for (a, &v) in perm.iter().enumerate() {
            inverse[v] = a;
        }
        let adjacency = perm
            .iter()
            .map(|&v| {
                let mut nb: Vec<usize> = self.adjacency[v].iter().map(|&w| inverse[w]).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        Graph { adjacency }
    }

    /// Checks simplicity, symmetry and index range. Always true for graphs
    /// built through the public constructors.
    pub fn check_invariants(&self) -> bool {
        let n = self.vertex_count();
        self.adjacency.iter().enumerate().all(|(u, nb)| {
            nb.windows(2).all(|w| w[0] < w[1])
                && nb
                    .iter()
                    .all(|&v| v < n && v != u && self.adjacency[v].binary_search(&u).is_ok())
        })
    }
}

/// Degree-one vertices and their complement, both sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryPartition {
    pub boundary: Vec<usize>,
    pub interior: Vec<usize>,
}

/// Tadpole `T_{n,i}`: an `i`-cycle with a path attached at one cycle vertex,
/// `n` vertices in total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TadpoleSpec {
    pub n: usize,
    pub i: usize,
}

impl TadpoleSpec {
    pub fn new(n: usize, i: usize) -> Result<Self> {
        if i < 3 || i >= n {
            return Err(Error::SpecOutOfRange(format!(
                "tadpole needs 3 <= i < n, got n={n}, i={i}"
            )));
        }
        Ok(TadpoleSpec { n, i })
    }

    /// Index of the neck vertex `t_i`.
    pub fn neck(&self) -> usize {
        self.i - 1
    }

    /// Index of the pendant end vertex `t_n`.
    pub fn end(&self) -> usize {
        self.n - 1
    }

    pub fn head(&self) -> std::ops::Range<usize> {
        0..self.i
    }

    pub fn tail(&self) -> std::ops::Range<usize> {
        self.i - 1..self.n
    }
}

/// Vertex `k` stands for `t_{k+1}`: path edges `{k, k+1}` plus the
/// head-closing edge `{0, i-1}`.
pub fn make_tadpole(spec: TadpoleSpec) -> Result<Graph> {
    let spec = TadpoleSpec::new(spec.n, spec.i)?;
    let mut g = path_edges(spec.n);
    g.add_edge(0, spec.i - 1)?;
    Ok(g)
}

pub fn make_path(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::SpecOutOfRange(format!("path needs n >= 2, got {n}")));
    }
    Ok(path_edges(n))
}

pub fn make_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::SpecOutOfRange(format!("cycle needs n >= 3, got {n}")));
    }
    let mut g = path_edges(n);
    g.add_edge(0, n - 1)?;
    Ok(g)
}

/// Star `K_{1,k}` with centre 0.
pub fn make_star(leaves: usize) -> Result<Graph> {
    if leaves < 1 {
        return Err(Error::SpecOutOfRange("star needs at least one leaf".into()));
    }
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::from_edges(leaves + 1, &edges)
}

pub fn make_complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(n, &edges).expect("complete graph edges are valid")
}

fn path_edges(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|k| (k - 1, k)).collect();
    Graph::from_edges(n, &edges).expect("path edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees(g: &Graph) -> Vec<usize> {
        (0..g.vertex_count()).map(|v| g.degree(v)).collect()
    }

    #[test]
    fn tadpole_4_3() {
        let g = make_tadpole(TadpoleSpec { n: 4, i: 3 }).unwrap();
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 2), (2, 3)]);
        assert_eq!(degrees(&g), vec![2, 2, 3, 1]);
    }

    #[test]
    fn tadpole_5_3() {
        let g = make_tadpole(TadpoleSpec { n: 5, i: 3 }).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.boundary_partition().boundary, vec![4]);
    }

    #[test]
    fn tadpole_degrees_general() {
        for n in 4..=10 {
            for i in 3..n {
                let spec = TadpoleSpec { n, i };
                let g = make_tadpole(spec).unwrap();
                assert!(g.check_invariants() && g.is_connected());
                for v in 0..n {
                    let expected = if v == spec.neck() {
                        3
                    } else if v == spec.end() {
                        1
                    } else {
                        2
                    };
                    assert_eq!(g.degree(v), expected, "T_{{{n},{i}}} vertex {v}");
                }
            }
        }
    }

    #[test]
    fn tadpole_out_of_range() {
        assert!(matches!(
            make_tadpole(TadpoleSpec { n: 4, i: 4 }),
            Err(Error::SpecOutOfRange(_))
        ));
        assert!(matches!(
            make_tadpole(TadpoleSpec { n: 5, i: 2 }),
            Err(Error::SpecOutOfRange(_))
        ));
    }

    #[test]
    fn path_and_cycle() {
        let p4 = make_path(4).unwrap();
        let part = p4.boundary_partition();
        assert_eq!(part.boundary, vec![0, 3]);
        assert_eq!(part.interior, vec![1, 2]);

        let c5 = make_cycle(5).unwrap();
        let part = c5.boundary_partition();
        assert!(part.boundary.is_empty());
        assert_eq!(part.interior, vec![0, 1, 2, 3, 4]);

        assert!(matches!(make_path(1), Err(Error::SpecOutOfRange(_))));
        assert!(matches!(make_cycle(2), Err(Error::SpecOutOfRange(_))));
    }

    #[test]
    fn rejects_non_simple() {
        assert!(Graph::from_edges(3, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn relabel_preserves_structure() {
        let g = make_tadpole(TadpoleSpec { n: 6, i: 4 }).unwrap();
        let perm = [5, 3, 1, 0, 2, 4];
        let h = g.relabel(&perm);
        assert!(h.check_invariants());
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(h.has_edge(a, b), g.has_edge(perm[a], perm[b]));
            }
        }
    }
}
