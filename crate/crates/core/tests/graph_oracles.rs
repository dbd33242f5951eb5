mod common;

use common::graph_oracle::*;
use common::*;
use netinform::graph::NetGraph;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn reachability_equals_transitive_closure() {
    let mut r = rng(11);
    for _ in 0..50 {
        let (g, adj) = random_graph(&mut r, 10, 0.15);
        let tc = closure(&adj);
        for a in 0..10 {
            let reach = g.reachable(&[a], &[]);
            for b in 0..10 {
                assert_eq!(reach[b], tc[a][b], "{a} -> {b}");
            }
        }
    }
}

#[test]
fn min_cut_equals_exhaustive_search() {
    let mut r = rng(12);
    for t in 0..200 {
        let n = r.random_range(3..=10);
        let p = r.random_range(0.1..0.5);
        let (g, adj) = random_graph(&mut r, n, p);
        let (from, to) = random_terminals(&mut r, n);
        let cut = g.min_disconnecting_set(from, &to, &[]).unwrap();
        let seps = separating_masks(&adj, from, &to);
        let best = seps.iter().map(|m| m.count_ones()).min().unwrap();
        let lex = seps
            .iter()
            .filter(|m| m.count_ones() == best)
            .map(|&m| members(m, n))
            .min()
            .unwrap();
        assert_eq!(cut, lex, "graph {t}");
    }
}

#[test]
fn minimal_cut_enumeration_equals_exhaustive_search() {
    let mut r = rng(13);
    for t in 0..200 {
        let n = r.random_range(3..=8);
        let p = r.random_range(0.1..0.45);
        let (g, adj) = random_graph(&mut r, n, p);
        let (from, to) = random_terminals(&mut r, n);
        let seps = separating_masks(&adj, from, &to);
        let mut minimal: Vec<Vec<usize>> = seps
            .iter()
            .filter(|&&m| !seps.iter().any(|&o| o != m && o & m == o))
            .map(|&m| members(m, n))
            .collect();
        minimal.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let got = g.enumerate_disconnecting_sets(&[from], &to, &[], 6);
        assert!(!got.truncated);
        assert_eq!(got.sets, minimal, "graph {t}");
    }
}

#[test]
fn disjoint_paths_equal_exhaustive_search() {
    let mut r = rng(14);
    for t in 0..200 {
        let n = r.random_range(3..=10);
        let p = r.random_range(0.1..0.4);
        let (g, adj) = random_graph(&mut r, n, p);
        let mut pick = |p: f64| -> Vec<usize> { (0..n).filter(|_| r.random_bool(p)).collect() };
        let sources = pick(0.3);
        let sinks = pick(0.3);
        let forbidden: Vec<usize> = pick(0.15).into_iter().filter(|v| !sources.contains(v) && !sinks.contains(v)).collect();
        let fmask = forbidden.iter().fold(0u32, |m, &v| m | 1 << v);
        let expected = max_packing(&simple_paths(&adj, &sources, &sinks, fmask), 0);
        let got = g.max_vertex_disjoint_paths(&sources, &sinks, &forbidden);
        assert_eq!(got.count, expected, "graph {t}");
        let mut used = 0u32;
        for p in &got.paths {
            assert!(sources.contains(&p[0]) && sinks.contains(p.last().unwrap()));
            for w in p.windows(2) {
                assert!(adj[w[0]][w[1]]);
            }
            for &v in p {
                assert!(used & (1 << v) == 0 && fmask & (1 << v) == 0, "graph {t}: witness overlaps");
                used |= 1 << v;
            }
        }
    }
}

#[test]
fn network_edges_count_nonzero_modules() {
    let mut r = rng(15);
    for _ in 0..30 {
        let l = r.random_range(2..=8);
        let net = random_network(&mut r, l, 0.3, 0.5, 0.3);
        let g = NetGraph::build(&net);
        let modules = net.g.nonzeros().filter(|(a, b, _)| a != b).count();
        assert_eq!(g.node_edge_count(), modules);
    }
}

fn adjacency() -> impl Strategy<Value = Adj> {
    (2usize..=9).prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), n)).prop_map(|mut a| {
        for (k, row) in a.iter_mut().enumerate() {
            row[k] = false;
        }
        a
    })
}

proptest! {
    #[test]
    fn min_cut_disconnects_and_no_smaller_set_does(adj in adjacency(), seed in any::<u64>()) {
        let n = adj.len();
        let g = graph_from(&adj);
        let mut r = rng(seed);
        let (from, to) = random_terminals(&mut r, n);
        let cut = g.min_disconnecting_set(from, &to, &[]).unwrap();
        prop_assert!(g.disconnects(&[from], &to, &cut));
        prop_assert!(cut.len() <= to.len());
        for k in 0..cut.len() {
            let mut smaller = cut.clone();
            smaller.remove(k);
            prop_assert!(!g.disconnects(&[from], &to, &smaller));
        }
    }

    #[test]
    fn disjoint_paths_bounded_by_terminals(adj in adjacency(), seed in any::<u64>()) {
        let n = adj.len();
        let g = graph_from(&adj);
        let mut r = rng(seed);
        let sources: Vec<usize> = (0..n).filter(|_| r.random_bool(0.4)).collect();
        let sinks: Vec<usize> = (0..n).filter(|_| r.random_bool(0.4)).collect();
        let p = g.max_vertex_disjoint_paths(&sources, &sinks, &[]);
        prop_assert!(p.count <= sources.len().min(sinks.len()));
        prop_assert!(g.verify_paths(&p.paths, &sources, &sinks, &[]));
    }
}
