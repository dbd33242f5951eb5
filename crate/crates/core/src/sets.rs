//! Signal sets attached to a target module: κ, 𝒟^c, w_T, w_F, x_T*, χ,
//! e^⊥𝒴, u^⊥j, 𝒳_j and the signals entering μ / η.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{CutEnumeration, NetGraph, Vertex};
use crate::model::{Network, ParamMap, PredictorModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Source {
    R(usize),
    E(usize),
}

impl Source {
    pub fn vertex(self) -> Vertex {
        match self {
            Source::R(k) => Vertex::R(k),
            Source::E(l) => Vertex::E(l),
        }
    }

    pub fn label(self, net: &Network) -> String {
        match self {
            Source::R(k) => net.excitations[k].label.clone(),
            Source::E(l) => net.noise_label(l),
        }
    }
}

/// A named signal subset with one derivation note per member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSelection {
    pub name: String,
    pub members: Vec<String>,
    pub derivation: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sets {
    pub j: usize,
    pub i: usize,
    /// Predictor inputs with a parametrized module into `w_j`.
    pub kappa_w: Vec<usize>,
    /// Rows of `ξ_𝒴` with a parametrized noise term in row `j`.
    pub kappa_xi: Vec<usize>,
    /// Excitations with a parametrized term in row `j` (`u^[j]`).
    pub kappa_u: Vec<usize>,
    pub dc: Vec<usize>,
    pub cut_is_primary: bool,
    pub w_t: Vec<usize>,
    pub w_f: Vec<usize>,
    pub x_tstar: Vec<Source>,
    pub chi: Vec<Source>,
    pub e_y: Vec<usize>,
    pub e_perp_y: Vec<usize>,
    pub u_perp_j: Vec<usize>,
    pub u_perp_j_paths: Vec<usize>,
    pub x_j: Vec<Source>,
    /// `w_{i ∪ 𝒟^c}` in that order.
    pub eta_nodes: Vec<usize>,
}

impl Sets {
    pub fn u_perp_j_agrees(&self) -> bool {
        self.u_perp_j == self.u_perp_j_paths
    }

    /// Present, persistently exciting sources in `e^⊥𝒴 ∪ u^⊥j`.
    pub fn prop8_sources(&self, net: &Network) -> Vec<Source> {
        let mut s: Vec<Source> = self
            .u_perp_j
            .iter()
            .filter(|&&k| net.excitations[k].pe)
            .map(|&k| Source::R(k))
            .collect();
        s.extend(self.e_perp_y.iter().map(|&l| Source::E(l)));
        s
    }
}

/// Present noises and persistently exciting excitations.
pub fn present_sources(net: &Network) -> Vec<Source> {
    let mut s: Vec<Source> = net
        .present_excitations()
        .into_iter()
        .filter(|&k| net.excitations[k].pe)
        .map(Source::R)
        .collect();
    s.extend(net.present_noises().into_iter().map(Source::E));
    s
}

/// Sets for the primary (lexicographically smallest minimum) cut.
pub fn derive_sets(net: &Network, pred: &PredictorModel) -> Result<Sets> {
    let pm = ParamMap::derive(net, pred)?;
    let g = NetGraph::build(net);
    let kappa_w = kappa_w(&pm, pred);
    let dc = primary_cut(&g, net, pred.i, &kappa_w)?;
    Ok(sets_for_cut(net, pred, &pm, &g, &dc, true))
}

pub fn kappa_w(pm: &ParamMap, pred: &PredictorModel) -> Vec<usize> {
    let r = pm.row(pred.j);
    pred.d
        .iter()
        .enumerate()
        .filter(|(c, _)| pm.g[r][*c].is_parametrized())
        .map(|(_, &d)| d)
        .collect()
}

/// Minimum cut among node vertices from `w_i` to `κ_w \ {w_i}`.
pub fn primary_cut(g: &NetGraph, net: &Network, i: usize, kappa_w: &[usize]) -> Result<Vec<usize>> {
    let to: Vec<usize> = kappa_w.iter().copied().filter(|&k| k != i).collect();
    let excluded: Vec<usize> = (net.size()..g.len()).collect();
    g.min_disconnecting_set(i, &to, &excluded)
}

/// Inclusion-minimal node sets separating `w_i` from the other parametrized
/// inputs of the target row.
pub fn minimal_cuts(net: &Network, pred: &PredictorModel, max_card: usize) -> Result<CutEnumeration> {
    let pm = ParamMap::derive(net, pred)?;
    let g = NetGraph::build(net);
    let to: Vec<usize> = kappa_w(&pm, pred).into_iter().filter(|&k| k != pred.i).collect();
    let excluded: Vec<usize> = (net.size()..g.len()).collect();
    Ok(g.enumerate_disconnecting_sets(&[pred.i], &to, &excluded, max_card))
}

/// Nodes a cut may contain: those reachable from `w_i` and the other
/// parametrized inputs.
pub fn cut_pool(g: &NetGraph, net: &Network, i: usize, kappa_w: &[usize]) -> Vec<usize> {
    let fw = g.reachable(&[i], &[]);
    (0..net.size())
        .filter(|&v| v != i && (fw[v] || kappa_w.contains(&v)))
        .collect()
}

/// Node sets that separate `w_i` from `κ_w \ {w_i}`, not necessarily minimal,
/// up to `max_card` members.
pub fn candidate_cuts(g: &NetGraph, net: &Network, i: usize, kappa_w: &[usize], max_card: usize) -> Vec<Vec<usize>> {
    let to: Vec<usize> = kappa_w.iter().copied().filter(|&k| k != i).collect();
    let pool = cut_pool(g, net, i, kappa_w);
    g.disconnecting_sets(&[i], &to, &pool, max_card)
}

pub fn sets_for_cut(
    net: &Network,
    pred: &PredictorModel,
    pm: &ParamMap,
    g: &NetGraph,
    dc: &[usize],
    cut_is_primary: bool,
) -> Sets {
    let (i, j) = (pred.i, pred.j);
    let rj = pm.row(j);
    let kappa_w = kappa_w(pm, pred);
    let kappa_xi: Vec<usize> = pred
        .y
        .iter()
        .enumerate()
        .filter(|(c, _)| pm.h[rj][*c].is_parametrized())
        .map(|(_, &y)| y)
        .collect();
    let kappa_u: Vec<usize> = (0..net.excitations.len())
        .filter(|&k| pm.t[rj][k].is_parametrized() && net.excitations[k].is_present())
        .collect();
    let w_t: Vec<usize> = kappa_w
        .iter()
        .copied()
        .filter(|k| *k != i && !dc.contains(k))
        .collect();
    let w_f: Vec<usize> = pred
        .d
        .iter()
        .enumerate()
        .filter(|(c, _)| pm.g[rj][*c].is_known())
        .map(|(_, &d)| d)
        .collect();

    let x_tstar: Vec<Source> = present_sources(net)
        .into_iter()
        .filter(|s| {
            let r = g.reachable(&[g.index(s.vertex())], dc);
            w_t.iter().any(|&t| r[t])
        })
        .collect();

    let e_y: Vec<usize> = net
        .present_noises()
        .into_iter()
        .filter(|&l| (0..pm.y.len()).any(|r| pm.noise_reach[r][l] && pm.noise_row_parametrized(r)))
        .collect();
    let e_perp_y: Vec<usize> = net
        .present_noises()
        .into_iter()
        .filter(|l| !e_y.contains(l))
        .collect();
    let u_perp_j: Vec<usize> = net
        .present_excitations()
        .into_iter()
        .filter(|k| !kappa_u.contains(k))
        .collect();

    // r entering w_j, or reaching w_𝒟^[j] ∪ w_F^[j] without passing w_j
    let mut targets = kappa_w.clone();
    targets.extend(&w_f);
    let u_perp_j_paths: Vec<usize> = net
        .present_excitations()
        .into_iter()
        .filter(|&k| {
            let v = g.index(Vertex::R(k));
            if net.excitations[k].node == j {
                return true;
            }
            let r = g.reachable(&[v], &[j]);
            targets.iter().any(|&t| r[t])
        })
        .collect();

    let mut chi = x_tstar.clone();
    for &k in &kappa_u {
        if !chi.contains(&Source::R(k)) {
            chi.push(Source::R(k));
        }
    }

    let x_j: Vec<Source> = present_sources(net)
        .into_iter()
        .filter(|s| match *s {
            Source::R(k) => !pm.t[rj][k].is_parametrized(),
            Source::E(l) => !(pm.noise_reach[rj][l] && pm.noise_row_parametrized(rj)),
        })
        .collect();

    let mut eta_nodes = vec![i];
    eta_nodes.extend(dc.iter().copied().filter(|&d| d != i));

    Sets {
        j,
        i,
        kappa_w,
        kappa_xi,
        kappa_u,
        dc: dc.to_vec(),
        cut_is_primary,
        w_t,
        w_f,
        x_tstar,
        chi,
        e_y,
        e_perp_y,
        u_perp_j,
        u_perp_j_paths,
        x_j,
        eta_nodes,
    }
}

/// Report form of every selection, with per-member derivation notes.
pub fn selections(net: &Network, s: &Sets) -> Vec<SignalSelection> {
    let w = |k: usize| net.labels[k].clone();
    let src = |x: &Source| x.label(net);
    let jl = w(s.j);
    let il = w(s.i);
    let mut out = vec![];
    let mut push = |name: &str, members: Vec<String>, derivation: Vec<String>, empty_note: String| {
        let derivation = if derivation.is_empty() { vec![empty_note] } else { derivation };
        out.push(SignalSelection {
            name: name.to_string(),
            members,
            derivation,
        });
    };
    push(
        "kappa_j",
        s.kappa_w
            .iter()
            .map(|&k| w(k))
            .chain(s.kappa_xi.iter().map(|&y| format!("xi_{}", w(y))))
            .chain(s.kappa_u.iter().map(|&k| net.excitations[k].label.clone()))
            .collect(),
        s.kappa_w
            .iter()
            .map(|&k| format!("{}: parametrized G entry in row {jl}", w(k)))
            .chain(s.kappa_xi.iter().map(|&y| format!("xi_{}: parametrized H entry in row {jl}", w(y))))
            .chain(
                s.kappa_u
                    .iter()
                    .map(|&k| format!("{}: parametrized T entry in row {jl}", net.excitations[k].label)),
            )
            .collect(),
        format!("row {jl} has no parametrized entry"),
    );
    push(
        "D_c",
        s.dc.iter().map(|&k| w(k)).collect(),
        s.dc.iter()
            .map(|&k| {
                format!(
                    "{}: member of {} cut from {il} to the other parametrized inputs",
                    w(k),
                    if s.cut_is_primary { "the minimum" } else { "an alternative" }
                )
            })
            .collect(),
        format!("{il} has no path to the other parametrized inputs"),
    );
    push(
        "w_T",
        s.w_t.iter().map(|&k| w(k)).collect(),
        s.w_t.iter().map(|&k| format!("{}: parametrized input outside {il} and D_c", w(k))).collect(),
        "every parametrized input is w_i or in D_c".into(),
    );
    push(
        "w_F",
        s.w_f.iter().map(|&k| w(k)).collect(),
        s.w_f.iter().map(|&k| format!("{}: known module into {jl}", w(k))).collect(),
        format!("no known module into {jl}"),
    );
    let dc_labels: Vec<String> = s.dc.iter().map(|&k| w(k)).collect();
    push(
        "x_Tstar",
        s.x_tstar.iter().map(src).collect(),
        s.x_tstar
            .iter()
            .map(|x| format!("{}: reaches w_T avoiding {{{}}}", src(x), dc_labels.join(",")))
            .collect(),
        "no source reaches w_T outside D_c".into(),
    );
    push(
        "chi",
        s.chi.iter().map(src).collect(),
        s.chi
            .iter()
            .map(|x| {
                if s.x_tstar.contains(x) {
                    format!("{}: from x_Tstar", src(x))
                } else {
                    format!("{}: parametrized excitation term in row {jl}", src(x))
                }
            })
            .collect(),
        "x_Tstar and u^[j] are empty".into(),
    );
    push(
        "e_perp_Y",
        s.e_perp_y.iter().map(|&l| net.noise_label(l)).collect(),
        s.e_perp_y
            .iter()
            .map(|&l| format!("{}: no path with unknown dynamics to an output", net.noise_label(l)))
            .collect(),
        "every present noise source reaches an output through unknown dynamics".into(),
    );
    push(
        "u_perp_j",
        s.u_perp_j.iter().map(|&k| net.excitations[k].label.clone()).collect(),
        s.u_perp_j
            .iter()
            .map(|&k| format!("{}: T entry in row {jl} not parametrized", net.excitations[k].label))
            .collect(),
        "no present excitation lacks a parametrized link to w_j".into(),
    );
    push(
        "X_j",
        s.x_j.iter().map(src).collect(),
        s.x_j
            .iter()
            .map(|x| format!("{}: no parametrized link to {jl}", src(x)))
            .collect(),
        format!("every present source has a parametrized link to {jl}"),
    );
    let eta: Vec<String> = s
        .eta_nodes
        .iter()
        .map(|&k| format!("{}_perp_chi", w(k)))
        .chain(s.kappa_xi.iter().map(|&y| format!("xi_{}", w(y))))
        .collect();
    push(
        "eta_j",
        eta.clone(),
        eta.iter().map(|m| format!("{m}: w_i, D_c projected on chi, or parametrized noise of row {jl}")).collect(),
        "empty".into(),
    );
    let mu: Vec<String> = s.eta_nodes.iter().map(|&k| format!("{}_perp_xTstar", w(k))).collect();
    push(
        "mu_j",
        mu.clone(),
        mu.iter().map(|m| format!("{m}: w_i or D_c projected on x_Tstar")).collect(),
        "empty".into(),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tf::RationalTF;

    fn delay(g: f64) -> RationalTF {
        RationalTF::from_coeffs(&[0.0, g], &[1.0]).unwrap()
    }

    #[test]
    fn two_node_sets() {
        let mut n = Network::with_nodes(2);
        n.set_module(0, 1, delay(0.5));
        n.set_module(1, 0, delay(0.3));
        n.h.set(0, 1, delay(0.4));
        n.set_noise_variance(0, 1.0);
        n.set_noise_variance(1, 1.0);
        n.add_excitation(0, 1.0);
        let pred = PredictorModel::new(vec![0], vec![0, 1], 1, 0);
        let s = derive_sets(&n, &pred).unwrap();
        assert_eq!(s.kappa_w, vec![0]);
        assert!(s.dc.is_empty() && s.w_t.is_empty() && s.kappa_u.is_empty());
        assert_eq!(s.u_perp_j, vec![0]);
        assert!(s.e_perp_y.is_empty());
    }
}
