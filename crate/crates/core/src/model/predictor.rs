//! Predictor model `w_Y = Ḡ w_D + H̄ ξ_Y + T̄ r` and its per-entry
//! parametrization map.
//!
//! Row `y` of the reduced maps is the response of `w_y` in the network where
//! every predictor input other than `y` itself is held as an external signal
//! ("clamped") and all remaining nodes are eliminated.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::network::Network;
use crate::tf::{Orders, RationalTF};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Block {
    G,
    H,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnownKind {
    UnitDirect,
    Dynamic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EntryStatus {
    Zero,
    Known {
        kind: KnownKind,
        tf: Option<RationalTF>,
    },
    Parametrized {
        orders: Option<Orders>,
    },
}

impl EntryStatus {
    pub fn is_parametrized(&self) -> bool {
        matches!(self, EntryStatus::Parametrized { .. })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, EntryStatus::Zero)
    }

    pub fn is_known(&self) -> bool {
        matches!(self, EntryStatus::Known { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverrideStatus {
    Zero,
    Known,
    Parametrized,
}

/// A user statement about one entry of `[Ḡ | H̄ | T̄]`.
/// `row` is a node index in `Y`; `col` is a node index (G, H) or an
/// excitation index (T).
#[derive(Debug, Clone, PartialEq)]
pub struct EntryOverride {
    pub block: Block,
    pub row: usize,
    pub col: usize,
    pub status: OverrideStatus,
    pub tf: Option<RationalTF>,
    pub orders: Option<Orders>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictorModel {
    pub d: Vec<usize>,
    pub y: Vec<usize>,
    /// Target module `G_{ji}`: output `j`, input `i`.
    pub j: usize,
    pub i: usize,
    pub explicit: bool,
    pub overrides: Vec<EntryOverride>,
    pub row_independent: bool,
    pub column_block_independent: bool,
    pub noise_order: Option<usize>,
}

impl PredictorModel {
    pub fn new(d: Vec<usize>, y: Vec<usize>, j: usize, i: usize) -> Self {
        PredictorModel {
            d,
            y,
            j,
            i,
            explicit: false,
            overrides: vec![],
            row_independent: true,
            column_block_independent: true,
            noise_order: None,
        }
    }

    pub fn with_override(mut self, o: EntryOverride) -> Self {
        self.overrides.retain(|x| !(x.block == o.block && x.row == o.row && x.col == o.col));
        self.overrides.push(o);
        self
    }

    /// Mark `Ḡ_{row,col}` as known.
    pub fn known_g(self, row: usize, col: usize, tf: Option<RationalTF>) -> Self {
        self.with_override(EntryOverride {
            block: Block::G,
            row,
            col,
            status: OverrideStatus::Known,
            tf,
            orders: None,
        })
    }

    pub fn row_of(&self, node: usize) -> Option<usize> {
        self.y.iter().position(|&y| y == node)
    }

    pub fn col_of(&self, node: usize) -> Option<usize> {
        self.d.iter().position(|&d| d == node)
    }

    pub fn check(&self, net: &Network) -> Result<()> {
        let l = net.size();
        let bad = |m: String| Err(Error::Invalid(m));
        if self.d.iter().chain(self.y.iter()).any(|&k| k >= l) {
            return bad("predictor references a node out of range".into());
        }
        if !self.d.contains(&self.i) {
            return bad("target input i must belong to D".into());
        }
        if !self.y.contains(&self.j) {
            return bad("target output j must belong to Y".into());
        }
        if self.i == self.j {
            return bad("target module cannot be a self-loop".into());
        }
        let mut seen = std::collections::BTreeSet::new();
        if !self.d.iter().all(|k| seen.insert(*k)) {
            return bad("duplicate node in D".into());
        }
        seen.clear();
        if !self.y.iter().all(|k| seen.insert(*k)) {
            return bad("duplicate node in Y".into());
        }
        for o in &self.overrides {
            if !self.y.contains(&o.row) {
                return bad("parametrization entry row must belong to Y".into());
            }
            let ok = match o.block {
                Block::G => self.d.contains(&o.col),
                Block::H => self.y.contains(&o.col),
                Block::T => o.col < net.excitations.len(),
            };
            if !ok {
                return bad("parametrization entry column out of range".into());
            }
        }
        Ok(())
    }

    /// Nodes held fixed when forming row `y`.
    pub fn clamped(&self, l: usize, y: usize) -> Vec<bool> {
        let mut c = vec![false; l];
        for &d in &self.d {
            if d != y {
                c[d] = true;
            }
        }
        c
    }
}

/// Free nodes reached from `start` by edges into free nodes only.
pub fn free_reach(net: &Network, clamped: &[bool], start: usize) -> Vec<bool> {
    let l = net.size();
    let mut seen = vec![false; l];
    let mut q = VecDeque::from([start]);
    while let Some(a) = q.pop_front() {
        for b in 0..l {
            if !net.module(a, b).is_zero() && !clamped[b] && !seen[b] {
                seen[b] = true;
                q.push_back(b);
            }
        }
    }
    seen
}

/// Structure of the reduced maps, rows ordered as `Y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamMap {
    pub y: Vec<usize>,
    pub d: Vec<usize>,
    pub g: Vec<Vec<EntryStatus>>,
    pub h: Vec<Vec<EntryStatus>>,
    pub t: Vec<Vec<EntryStatus>>,
    /// `noise_reach[r][l]`: present noise `e_l` reaches output row `r`.
    pub noise_reach: Vec<Vec<bool>>,
}

impl ParamMap {
    pub fn derive(net: &Network, pred: &PredictorModel) -> Result<ParamMap> {
        pred.check(net)?;
        let l = net.size();
        let k = net.excitations.len();
        let ny = pred.y.len();
        let mut g = vec![vec![EntryStatus::Zero; pred.d.len()]; ny];
        let mut h = vec![vec![EntryStatus::Zero; ny]; ny];
        let mut t = vec![vec![EntryStatus::Zero; k]; ny];
        let mut noise_reach = vec![vec![false; l]; ny];

        for (r, &y) in pred.y.iter().enumerate() {
            let clamped = pred.clamped(l, y);
            let from_y = free_reach(net, &clamped, y);
            let self_loop = from_y[y];
            let reaches = |m: usize| m == y || free_reach(net, &clamped, m)[y];
            if pred.explicit {
                continue;
            }
            for (c, &d) in pred.d.iter().enumerate() {
                if d != y && free_reach(net, &clamped, d)[y] {
                    g[r][c] = EntryStatus::Parametrized { orders: None };
                }
            }
            for (kk, ex) in net.excitations.iter().enumerate() {
                let m = ex.node;
                if clamped[m] || !reaches(m) {
                    continue;
                }
                t[r][kk] = if m == y && !self_loop && ex.filter.is_none() {
                    EntryStatus::Known {
                        kind: KnownKind::UnitDirect,
                        tf: Some(RationalTF::one()),
                    }
                } else {
                    EntryStatus::Parametrized { orders: None }
                };
            }
            for src in net.present_noises() {
                noise_reach[r][src] = net
                    .noise_targets(src)
                    .into_iter()
                    .any(|m| !clamped[m] && reaches(m));
            }
            let srcs: Vec<usize> = (0..l).filter(|&s| noise_reach[r][s]).collect();
            let pure = srcs.len() == 1 && {
                let s = srcs[0];
                let tg = net.noise_targets(s);
                let hy = net.h.get(y, s);
                !self_loop
                    && tg.iter().all(|&m| m == y || clamped[m] || !reaches(m))
                    && hy.num.coeffs() == [1.0]
                    && hy.den.coeffs() == [1.0]
            };
            if !srcs.is_empty() {
                h[r][r] = if pure {
                    EntryStatus::Known {
                        kind: KnownKind::UnitDirect,
                        tf: Some(RationalTF::one()),
                    }
                } else {
                    EntryStatus::Parametrized { orders: None }
                };
            }
        }
        if !pred.explicit {
            for a in 0..ny {
                for b in 0..ny {
                    if a == b {
                        continue;
                    }
                    let shared = (0..l).any(|s| {
                        noise_reach[a][s]
                            && (0..l).any(|s2| {
                                noise_reach[b][s2] && (s == s2 || net.noise_cov[(s, s2)] != 0.0)
                            })
                    });
                    if shared {
                        h[a][b] = EntryStatus::Parametrized { orders: None };
                    }
                }
            }
        }
        let mut map = ParamMap {
            y: pred.y.clone(),
            d: pred.d.clone(),
            g,
            h,
            t,
            noise_reach,
        };
        for o in &pred.overrides {
            let r = pred.row_of(o.row).unwrap();
            let st = match o.status {
                OverrideStatus::Zero => EntryStatus::Zero,
                OverrideStatus::Parametrized => EntryStatus::Parametrized { orders: o.orders },
                OverrideStatus::Known => {
                    let kind = match &o.tf {
                        Some(tf) if tf.num.coeffs() == [1.0] && tf.den.coeffs() == [1.0] => {
                            KnownKind::UnitDirect
                        }
                        _ => KnownKind::Dynamic,
                    };
                    EntryStatus::Known {
                        kind,
                        tf: o.tf.clone(),
                    }
                }
            };
            match o.block {
                Block::G => map.g[r][pred.col_of(o.col).unwrap()] = st,
                Block::H => map.h[r][pred.row_of(o.col).unwrap()] = st,
                Block::T => map.t[r][o.col] = st,
            }
        }
        Ok(map)
    }

    pub fn row(&self, node: usize) -> usize {
        self.y.iter().position(|&y| y == node).expect("node not in Y")
    }

    /// `H̄` row `r` has any parametrized entry.
    pub fn noise_row_parametrized(&self, r: usize) -> bool {
        self.h[r].iter().any(|e| e.is_parametrized())
    }

    pub fn count_parametrized(&self) -> usize {
        self.g
            .iter()
            .chain(self.h.iter())
            .chain(self.t.iter())
            .flatten()
            .filter(|e| e.is_parametrized())
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tf::RationalTF;

    fn delay(g: f64) -> RationalTF {
        RationalTF::from_coeffs(&[0.0, g], &[1.0]).unwrap()
    }

    fn two_node() -> Network {
        let mut n = Network::with_nodes(2);
        n.set_module(0, 1, delay(0.5));
        n.set_module(1, 0, delay(0.3));
        n.h.set(0, 1, delay(0.4));
        n.set_noise_variance(0, 1.0);
        n.set_noise_variance(1, 1.0);
        n.add_excitation(0, 1.0);
        n.add_excitation(1, 1.0);
        n
    }

    #[test]
    fn two_node_structure() {
        let net = two_node();
        let pred = PredictorModel::new(vec![0], vec![0, 1], 1, 0);
        let pm = ParamMap::derive(&net, &pred).unwrap();
        // row w1: no inputs other than itself, loop sensitivity on r1, r2
        assert!(pm.g[0][0].is_zero());
        assert!(pm.t[0][0].is_parametrized());
        assert!(pm.t[0][1].is_parametrized());
        // row w2: G21 parametrized, r2 known unit, r1 absent
        assert!(pm.g[1][0].is_parametrized());
        assert!(pm.t[1][0].is_zero());
        assert!(matches!(
            pm.t[1][1],
            EntryStatus::Known { kind: KnownKind::UnitDirect, .. }
        ));
        assert!(pm.h[0][1].is_parametrized());
        assert!(pm.h[1][0].is_parametrized());
    }
}
