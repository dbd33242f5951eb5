//! Directed graphs of networks: reachability, vertex cuts and
//! vertex-disjoint paths via unit-capacity vertex-split max-flow.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Network;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index")]
pub enum Vertex {
    W(usize),
    R(usize),
    E(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetGraph {
    pub vertices: Vec<Vertex>,
    pub labels: Vec<String>,
    out: Vec<Vec<usize>>,
    l: usize,
}

pub const DEFAULT_MAX_CARD: usize = 6;
pub const EXHAUSTIVE_LIMIT: usize = 12;

impl NetGraph {
    /// Empty graph with `n` unlabeled node vertices.
    pub fn with_nodes(n: usize) -> Self {
        NetGraph {
            vertices: (0..n).map(Vertex::W).collect(),
            labels: (0..n).map(|k| format!("v{k}")).collect(),
            out: vec![vec![]; n],
            l: n,
        }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if !self.out[a].contains(&b) {
            self.out[a].push(b);
            self.out[a].sort_unstable();
        }
    }

    /// Vertices `w_1..w_L`, then `r_1..r_K`, then `e_1..e_L`; edges along
    /// nonzero entries of `G`, `R` and `H`.
    pub fn build(net: &Network) -> Self {
        let l = net.size();
        let k = net.excitations.len();
        let mut vertices: Vec<Vertex> = (0..l).map(Vertex::W).collect();
        vertices.extend((0..k).map(Vertex::R));
        vertices.extend((0..l).map(Vertex::E));
        let mut labels = net.labels.clone();
        labels.extend(net.excitations.iter().map(|e| e.label.clone()));
        labels.extend((0..l).map(|s| net.noise_label(s)));
        let mut g = NetGraph {
            vertices,
            labels,
            out: vec![vec![]; 2 * l + k],
            l,
        };
        for (to, from, _) in net.g.nonzeros() {
            g.add_edge(from, to);
        }
        for (kk, e) in net.excitations.iter().enumerate() {
            g.add_edge(l + kk, e.node);
        }
        for (m, s, _) in net.h.nonzeros() {
            g.add_edge(l + k + s, m);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index(&self, v: Vertex) -> usize {
        match v {
            Vertex::W(i) => i,
            Vertex::R(k) => self.l + k,
            Vertex::E(s) => self.len() - self.l + s,
        }
    }

    pub fn w(&self, i: usize) -> usize {
        i
    }

    pub fn node_count(&self) -> usize {
        self.l
    }

    pub fn out(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|o| o.len()).sum()
    }

    pub fn node_edge_count(&self) -> usize {
        (0..self.l)
            .map(|a| self.out[a].iter().filter(|&&b| b < self.l).count())
            .sum()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.out[a].contains(&b)
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    /// Vertices reachable from `from` without touching `avoiding`; sources
    /// not in `avoiding` are included.
    pub fn reachable(&self, from: &[usize], avoiding: &[usize]) -> Vec<bool> {
        let mut blocked = vec![false; self.len()];
        for &a in avoiding {
            blocked[a] = true;
        }
        let mut seen = vec![false; self.len()];
        let mut q = VecDeque::new();
        for &s in from {
            if !blocked[s] && !seen[s] {
                seen[s] = true;
                q.push_back(s);
            }
        }
        while let Some(a) = q.pop_front() {
            for &b in &self.out[a] {
                if !blocked[b] && !seen[b] {
                    seen[b] = true;
                    q.push_back(b);
                }
            }
        }
        seen
    }

    fn coreachable(&self, to: &[usize]) -> Vec<bool> {
        let n = self.len();
        let mut rev = vec![vec![]; n];
        for a in 0..n {
            for &b in &self.out[a] {
                rev[b].push(a);
            }
        }
        let mut seen = vec![false; n];
        let mut q: VecDeque<usize> = to.iter().copied().collect();
        for &t in to {
            seen[t] = true;
        }
        while let Some(a) = q.pop_front() {
            for &b in &rev[a] {
                if !seen[b] {
                    seen[b] = true;
                    q.push_back(b);
                }
            }
        }
        seen
    }

    /// True if no path leads from `from` to `to` once `cut` is removed.
    pub fn disconnects(&self, from: &[usize], to: &[usize], cut: &[usize]) -> bool {
        let r = self.reachable(from, cut);
        to.iter().all(|&t| !r[t] || cut.contains(&t))
    }

    /// Unit vertex capacities except `infinite`; vertices in `removed` get 0.
    fn flow(&self, sources: &[usize], sinks: &[usize], infinite: &[bool], removed: &[bool]) -> Flow {
        let n = self.len();
        let (s, t) = (2 * n, 2 * n + 1);
        let mut f = Flow::new(2 * n + 2);
        for v in 0..n {
            let cap = if removed[v] {
                0
            } else if infinite[v] {
                INF
            } else {
                1
            };
            f.add(2 * v, 2 * v + 1, cap);
            for &b in &self.out[v] {
                f.add(2 * v + 1, 2 * b, INF);
            }
        }
        for &a in sources {
            f.add(s, 2 * a, INF);
        }
        for &b in sinks {
            f.add(2 * b + 1, t, INF);
        }
        f.run(s, t);
        f
    }

    /// Minimum vertex cut separating `from` from `to`. Never uses `from` or
    /// `excluded`; members of `to` may be cut. Among minimum cuts the
    /// lexicographically smallest index sequence is returned.
    pub fn min_disconnecting_set(&self, from: usize, to: &[usize], excluded: &[usize]) -> Result<Vec<usize>> {
        let n = self.len();
        if to.contains(&from) {
            return Err(Error::Invalid("source vertex lies in the target set".into()));
        }
        let mut inf = vec![false; n];
        inf[from] = true;
        for &x in excluded {
            inf[x] = true;
        }
        let mut removed = vec![false; n];
        let k = self.flow(&[from], to, &inf, &removed).value;
        if k >= INF {
            return Err(Error::NoCutExists(format!(
                "{} cannot be separated from the targets using allowed vertices",
                self.labels[from]
            )));
        }
        let mut need = k;
        let mut cut = vec![];
        for v in 0..n {
            if need == 0 {
                break;
            }
            if inf[v] {
                continue;
            }
            removed[v] = true;
            let val = self.flow(&[from], to, &inf, &removed).value;
            if val + 1 == need {
                cut.push(v);
                need -= 1;
            } else {
                removed[v] = false;
            }
        }
        debug_assert!(self.disconnects(&[from], to, &cut));
        Ok(cut)
    }

    /// Vertices that lie on some path from `from` to `to`, excluding `from`
    /// and `excluded`.
    pub fn cut_candidates(&self, from: &[usize], to: &[usize], excluded: &[usize]) -> Vec<usize> {
        let fw = self.reachable(from, &[]);
        let bw = self.coreachable(to);
        (0..self.len())
            .filter(|&v| fw[v] && bw[v] && !from.contains(&v) && !excluded.contains(&v))
            .collect()
    }

    /// Inclusion-minimal disconnecting sets from `from` to `to`, up to
    /// `max_card` members (or all of them when the candidate pool is at most
    /// [`EXHAUSTIVE_LIMIT`]). Sorted by cardinality then lexicographically.
    pub fn enumerate_disconnecting_sets(
        &self,
        from: &[usize],
        to: &[usize],
        excluded: &[usize],
        max_card: usize,
    ) -> CutEnumeration {
        let cand = self.cut_candidates(from, to, excluded);
        let exhaustive = cand.len() <= EXHAUSTIVE_LIMIT;
        let limit = if exhaustive { cand.len() } else { max_card.min(cand.len()) };
        let mut found: Vec<Vec<usize>> = vec![];
        for card in 0..=limit {
            for_each_subset(&cand, card, &mut |s| {
                if found.iter().any(|f| f.iter().all(|x| s.contains(x))) {
                    return;
                }
                if !self.disconnects(from, to, s) {
                    return;
                }
                let minimal = (0..s.len()).all(|k| {
                    let mut t = s.to_vec();
                    t.remove(k);
                    !self.disconnects(from, to, &t)
                });
                if minimal {
                    found.push(s.to_vec());
                }
            });
        }
        CutEnumeration {
            sets: found,
            truncated: !exhaustive && cand.len() > max_card,
        }
    }

    /// All disconnecting sets (not only minimal ones) drawn from `pool`, up to
    /// `max_card` members, in order of cardinality then lexicographically.
    pub fn disconnecting_sets(&self, from: &[usize], to: &[usize], pool: &[usize], max_card: usize) -> Vec<Vec<usize>> {
        let mut out = vec![];
        for card in 0..=max_card.min(pool.len()) {
            for_each_subset(pool, card, &mut |s| {
                if self.disconnects(from, to, s) {
                    out.push(s.to_vec());
                }
            });
        }
        out
    }

    /// Maximum number of vertex-disjoint paths from `sources` to `sinks`
    /// after deleting `forbidden`. A vertex in both sets is a zero-length path.
    pub fn max_vertex_disjoint_paths(&self, sources: &[usize], sinks: &[usize], forbidden: &[usize]) -> DisjointPaths {
        let n = self.len();
        let mut removed = vec![false; n];
        for &f in forbidden {
            removed[f] = true;
        }
        let f = self.flow(sources, sinks, &vec![false; n], &removed);
        let paths = f.paths(n, sources, sinks);
        DisjointPaths {
            count: paths.len(),
            paths,
        }
    }

    /// Checks a witness: simple directed paths, pairwise vertex-disjoint,
    /// starting in `sources`, ending in `sinks`, avoiding `forbidden`.
    pub fn verify_paths(&self, paths: &[Vec<usize>], sources: &[usize], sinks: &[usize], forbidden: &[usize]) -> bool {
        let mut used = BTreeSet::new();
        for p in paths {
            let (Some(first), Some(last)) = (p.first(), p.last()) else {
                return false;
            };
            if !sources.contains(first) || !sinks.contains(last) {
                return false;
            }
            if p.windows(2).any(|w| !self.has_edge(w[0], w[1])) {
                return false;
            }
            for v in p {
                if forbidden.contains(v) || !used.insert(*v) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutEnumeration {
    pub sets: Vec<Vec<usize>>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisjointPaths {
    pub count: usize,
    pub paths: Vec<Vec<usize>>,
}

pub fn for_each_subset(pool: &[usize], card: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(pool: &[usize], start: usize, card: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == card {
            f(cur);
            return;
        }
        let left = card - cur.len();
        for k in start..pool.len() {
            if pool.len() - k < left {
                break;
            }
            cur.push(pool[k]);
            rec(pool, k + 1, card, cur, f);
            cur.pop();
        }
    }
    rec(pool, 0, card, &mut Vec::with_capacity(card), f);
}

const INF: usize = usize::MAX / 4;

struct Edge {
    to: usize,
    cap: usize,
}

/// Edmonds-Karp on a small residual graph.
struct Flow {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    value: usize,
}

impl Flow {
    fn new(n: usize) -> Self {
        Flow {
            edges: vec![],
            adj: vec![vec![]; n],
            value: 0,
        }
    }

    fn add(&mut self, a: usize, b: usize, cap: usize) {
        self.adj[a].push(self.edges.len());
        self.edges.push(Edge { to: b, cap });
        self.adj[b].push(self.edges.len());
        self.edges.push(Edge { to: a, cap: 0 });
    }

    fn run(&mut self, s: usize, t: usize) {
        loop {
            let mut prev = vec![usize::MAX; self.adj.len()];
            let mut q = VecDeque::from([s]);
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            while let Some(a) = q.pop_front() {
                if a == t {
                    break;
                }
                for &e in &self.adj[a] {
                    let b = self.edges[e].to;
                    if self.edges[e].cap > 0 && !seen[b] {
                        seen[b] = true;
                        prev[b] = e;
                        q.push_back(b);
                    }
                }
            }
            if !seen[t] {
                return;
            }
            let mut push = INF;
            let mut v = t;
            while v != s {
                let e = prev[v];
                push = push.min(self.edges[e].cap);
                v = self.edges[e ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let e = prev[v];
                self.edges[e].cap -= push;
                self.edges[e ^ 1].cap += push;
                v = self.edges[e ^ 1].to;
            }
            self.value = self.value.saturating_add(push);
            if self.value >= INF {
                self.value = INF;
                return;
            }
        }
    }

    /// Decompose unit flow through split vertices into vertex paths.
    fn paths(&self, n: usize, sources: &[usize], sinks: &[usize]) -> Vec<Vec<usize>> {
        // flow on original edge e (even index) = cap of its reverse edge
        let flow_on = |e: usize| self.edges[e ^ 1].cap;
        let mut used = vec![0usize; self.edges.len()];
        let mut out = vec![];
        let mut starts: Vec<usize> = sources.to_vec();
        starts.sort_unstable();
        starts.dedup();
        for &src in &starts {
            // vertex-in of src carries at most one unit
            let mut path = vec![src];
            let mut v = src;
            let mut ok = false;
            loop {
                // inner edge v_in -> v_out must carry flow
                let inner = self.adj[2 * v]
                    .iter()
                    .copied()
                    .find(|&e| e % 2 == 0 && self.edges[e].to == 2 * v + 1);
                let Some(inner) = inner else { break };
                if flow_on(inner) <= used[inner] {
                    break;
                }
                used[inner] += 1;
                if sinks.contains(&v) {
                    // ends here if flow leaves to the super-sink
                    let to_sink = self.adj[2 * v + 1]
                        .iter()
                        .copied()
                        .find(|&e| e % 2 == 0 && self.edges[e].to == 2 * n + 1 && flow_on(e) > used[e]);
                    if let Some(e) = to_sink {
                        used[e] += 1;
                        ok = true;
                        break;
                    }
                }
                let next = self.adj[2 * v + 1].iter().copied().find(|&e| {
                    e % 2 == 0 && self.edges[e].to < 2 * n && flow_on(e) > used[e]
                });
                let Some(e) = next else { break };
                used[e] += 1;
                v = self.edges[e].to / 2;
                path.push(v);
            }
            if ok {
                out.push(path);
            }
        }
        out
    }
}
