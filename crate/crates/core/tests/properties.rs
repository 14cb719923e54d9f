use std::collections::BTreeSet;

use num_rational::Ratio;
use plap::cheeger::dirichlet_cheeger;
use plap::graph::*;
use plap::spectral::*;
use proptest::prelude::*;

// Oracle: canonical bit-string by trying all n! labellings, same column-major
// upper-triangle order as the library's keys.
fn brute_key(n: usize, adj: &[Vec<bool>]) -> (usize, u64) {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for rest in permutations(n - 1) {
            for pos in 0..=rest.len() {
                let mut p = rest.clone();
                p.insert(pos, n - 1);
                out.push(p);
            }
        }
        out
    }
    let best = permutations(n)
        .into_iter()
        .map(|perm| {
            let mut bits = 0u64;
            for k in 1..n {
                for j in 0..k {
                    bits = (bits << 1) | adj[perm[j]][perm[k]] as u64;
                }
            }
            bits
        })
        .min()
        .unwrap_or(0);
    (n, best)
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn labelled_classes(n: usize, keep: impl Fn(&Graph) -> bool) -> BTreeSet<(usize, u64)> {
    let all = pairs(n);
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << all.len()) {
        let edges: Vec<_> = (0..all.len()).filter(|k| mask & (1 << k) != 0).map(|k| all[k]).collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        if !g.is_connected() || !keep(&g) {
            continue;
        }
        let mut adj = vec![vec![false; n]; n];
        for &(u, v) in &edges {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        out.insert(brute_key(n, &adj));
    }
    out
}

fn library_classes(graphs: &[Graph]) -> BTreeSet<(usize, u64)> {
    graphs
        .iter()
        .map(|g| {
            let k = canonical_key(g).unwrap();
            (k.vertex_count(), k.bits())
        })
        .collect()
}

fn has_boundary(g: &Graph) -> bool {
    (0..g.vertex_count()).any(|v| g.degree(v) == 1)
}

#[test]
fn vertex_enumeration_matches_labelled_oracle() {
    for n in 1..=5 {
        for require_boundary in [false, true] {
            let graphs = enumerate_connected_by_vertices(n, require_boundary).unwrap();
            let oracle = labelled_classes(n, |g| !require_boundary || has_boundary(g));
            assert_eq!(graphs.len(), oracle.len(), "n={n}");
            assert_eq!(library_classes(&graphs), oracle, "n={n}");
        }
    }
}

#[test]
fn edge_enumeration_matches_labelled_oracle() {
    for m in 1..=5 {
        let graphs = enumerate_connected_by_edges(m, true).unwrap();
        let mut oracle = BTreeSet::new();
        for n in 2..=m + 1 {
            oracle.extend(labelled_classes(n, |g| g.edge_count() == m && has_boundary(g)));
        }
        assert_eq!(library_classes(&graphs), oracle, "m={m}");
    }
}

#[test]
fn tadpoles_are_enumerated() {
    for n in 4..=8 {
        let by_vertices = library_classes(&enumerate_connected_by_vertices(n, true).unwrap());
        let by_edges = library_classes(&enumerate_connected_by_edges(n, true).unwrap());
        for i in 3..n {
            let k = canonical_key(&make_tadpole(TadpoleSpec { n, i }).unwrap()).unwrap();
            assert!(by_vertices.contains(&(k.vertex_count(), k.bits())));
            assert!(by_edges.contains(&(k.vertex_count(), k.bits())));
        }
    }
}

#[test]
fn interior_counting_bound() {
    for m in 1..=8 {
        for g in enumerate_connected_by_edges(m, true).unwrap() {
            // a tree with a vertex of degree >= 3 has at least three leaves
            let interior = g.boundary_partition().interior.len();
            assert!(interior < m, "m={m}");
            if g.max_degree() >= 3 && g.vertex_count() == m + 1 {
                assert!(interior + 2 <= m);
            }
        }
    }
}

fn small_family() -> Vec<Graph> {
    (3..=6).flat_map(|n| enumerate_connected_by_vertices(n, true).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gradient_matches_central_differences(
        pick in 0usize..1000,
        values in proptest::collection::vec(0.2f64..2.0, 6),
        p in prop_oneof![Just(1.5f64), Just(2.0), Just(3.0)],
    ) {
        let graphs = small_family();
        let g = &graphs[pick % graphs.len()];
        let mut f = vec![0.0; g.vertex_count()];
        for v in g.boundary_partition().interior {
            f[v] = values[v];
        }
        let grad = rayleigh_gradient(g, &f, p).unwrap();
        let h = 1e-6;
        for v in g.boundary_partition().interior {
            let mut up = f.clone();
            let mut down = f.clone();
            up[v] += h;
            down[v] -= h;
            let fd = (rayleigh_quotient(g, &up, p).unwrap() - rayleigh_quotient(g, &down, p).unwrap()) / (2.0 * h);
            prop_assert!((fd - grad[v]).abs() <= 1e-5 * grad[v].abs().max(1e-3), "v={v}: {fd} vs {}", grad[v]);
        }
    }

    #[test]
    fn eigenvalue_bounds_every_quotient(
        pick in 0usize..1000,
        values in proptest::collection::vec(0.0f64..1.0, 6),
        p in 1.3f64..4.0,
    ) {
        let graphs = small_family();
        let g = &graphs[pick % graphs.len()];
        let r = first_eigenpair(g, &SolverOptions::new(p)).unwrap();
        let mut f = vec![0.0; g.vertex_count()];
        for v in g.boundary_partition().interior {
            f[v] = values[v];
        }
        prop_assume!(f.iter().any(|&x| x > 0.0));
        prop_assert!(r.lambda <= rayleigh_quotient(g, &f, p).unwrap() * (1.0 + 1e-10));
        // indicator functions give the Cheeger upper bound
        let h = dirichlet_cheeger(g).unwrap().value;
        prop_assert!(r.lambda <= *h.numer() as f64 / *h.denom() as f64 + 1e-9);
    }

    #[test]
    fn eigenfunction_is_positive_and_normalised(pick in 0usize..1000, p in 1.2f64..6.0) {
        let graphs = small_family();
        let g = &graphs[pick % graphs.len()];
        let opts = SolverOptions::new(p);
        let r = first_eigenpair(g, &opts).unwrap();
        prop_assert!((p_norm_pow(&r.eigenfunction, p) - 1.0).abs() < 1e-12);
        for v in 0..g.vertex_count() {
            prop_assert_eq!(r.eigenfunction[v] > 0.0, !g.is_boundary(v));
        }
        let tol = residual_tolerance(g, &r.eigenfunction, r.lambda, p, opts.tol_residual);
        prop_assert!(eigen_residual(g, &r.eigenfunction, r.lambda, p) <= tol);
    }

    #[test]
    fn relabelling_preserves_key_and_eigenvalue(pick in 0usize..1000, seed in any::<u64>()) {
        let graphs = small_family();
        let g = &graphs[pick % graphs.len()];
        let n = g.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for k in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(k, (s >> 33) as usize % (k + 1));
        }
        let h = g.relabel(&perm);
        prop_assert_eq!(canonical_key(g).unwrap(), canonical_key(&h).unwrap());
        let a = first_eigenpair(g, &SolverOptions::new(2.5)).unwrap().lambda;
        let b = first_eigenpair(&h, &SolverOptions::new(2.5)).unwrap().lambda;
        prop_assert!((a - b).abs() <= 1e-9 * a);
        prop_assert_eq!(dirichlet_cheeger(g).unwrap().value, dirichlet_cheeger(&h).unwrap().value);
    }
}

// Simplicity probe: independent seeds land on the same eigenfunction.
#[test]
fn first_eigenfunction_is_simple() {
    for g in enumerate_connected_by_vertices(6, true).unwrap() {
        for p in [1.5, 3.0] {
            let a = first_eigenpair(&g, &SolverOptions::new(p).with_seed(1)).unwrap();
            let b = first_eigenpair(&g, &SolverOptions::new(p).with_seed(2)).unwrap();
            let diff = a.eigenfunction.iter().zip(b.eigenfunction.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(diff < 1e-6, "{diff}");
        }
    }
}

#[test]
fn tadpole_cheeger_is_one_over_n_minus_one() {
    for n in 4..=10 {
        for i in 3..n {
            let g = make_tadpole(TadpoleSpec { n, i }).unwrap();
            assert_eq!(dirichlet_cheeger(&g).unwrap().value, Ratio::new(1, n as u64 - 1));
        }
    }
}
