//! Exhaustive reference answers for small directed graphs.

use netinform::graph::NetGraph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Adj = Vec<Vec<bool>>;

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> (NetGraph, Adj) {
    let mut g = NetGraph::with_nodes(n);
    let mut adj = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.random_bool(p) {
                g.add_edge(a, b);
                adj[a][b] = true;
            }
        }
    }
    (g, adj)
}

pub fn graph_from(adj: &Adj) -> NetGraph {
    let mut g = NetGraph::with_nodes(adj.len());
    for (a, row) in adj.iter().enumerate() {
        for (b, &e) in row.iter().enumerate() {
            if e {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// Reflexive-transitive closure by repeated boolean squaring of `I + A`.
pub fn closure(adj: &Adj) -> Adj {
    let n = adj.len();
    let mut m: Adj = (0..n).map(|a| (0..n).map(|b| a == b || adj[a][b]).collect()).collect();
    let mut len = 1;
    while len < n {
        let mut next = m.clone();
        for a in 0..n {
            for b in 0..n {
                next[a][b] = (0..n).any(|k| m[a][k] && m[k][b]);
            }
        }
        m = next;
        len *= 2;
    }
    m
}

/// Depth-first reachability in the graph with the vertices of `removed`
/// (a bitmask) deleted.
pub fn reaches(adj: &Adj, from: usize, to: &[usize], removed: u32) -> bool {
    let mut seen = 0u32;
    let mut stack = vec![from];
    seen |= 1 << from;
    while let Some(a) = stack.pop() {
        if to.contains(&a) {
            return true;
        }
        for b in 0..adj.len() {
            if adj[a][b] && removed & (1 << b) == 0 && seen & (1 << b) == 0 {
                seen |= 1 << b;
                stack.push(b);
            }
        }
    }
    false
}

pub fn members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask & (1 << v) != 0).collect()
}

/// Every subset of the vertices other than `from` that separates it from `to`.
pub fn separating_masks(adj: &Adj, from: usize, to: &[usize]) -> Vec<u32> {
    let n = adj.len();
    (0u32..1 << n)
        .filter(|m| m & (1 << from) == 0 && !reaches(adj, from, to, *m))
        .collect()
}

/// Simple paths from `sources` ending at a sink, as vertex bitmasks.
pub fn simple_paths(adj: &Adj, sources: &[usize], sinks: &[usize], forbidden: u32) -> Vec<u32> {
    fn rec(adj: &Adj, v: usize, used: u32, sinks: &[usize], forbidden: u32, out: &mut Vec<u32>) {
        if sinks.contains(&v) {
            out.push(used);
        }
        for b in 0..adj.len() {
            if adj[v][b] && used & (1 << b) == 0 && forbidden & (1 << b) == 0 {
                rec(adj, b, used | (1 << b), sinks, forbidden, out);
            }
        }
    }
    let mut out = vec![];
    for &s in sources {
        if forbidden & (1 << s) == 0 {
            rec(adj, s, 1 << s, sinks, forbidden, &mut out);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Largest family of pairwise disjoint masks.
pub fn max_packing(paths: &[u32], used: u32) -> usize {
    let mut best = 0;
    for (k, &p) in paths.iter().enumerate() {
        if p & used == 0 {
            best = best.max(1 + max_packing(&paths[k + 1..], used | p));
        }
    }
    best
}

pub fn random_terminals(rng: &mut ChaCha8Rng, n: usize) -> (usize, Vec<usize>) {
    let from = rng.random_range(0..n);
    let mut to: Vec<usize> = (0..n).filter(|&v| v != from && rng.random_bool(0.3)).collect();
    if to.is_empty() {
        to.push((from + 1) % n);
    }
    (from, to)
}
