//! Informativity and identifiability checkers, each in a path-based
//! (generic) and a spectral (numeric) form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NetGraph, Vertex, DEFAULT_MAX_CARD, EXHAUSTIVE_LIMIT};
use crate::grid::FrequencyGrid;
use crate::model::{validate, Network, OpenLoopSystem, ParamMap, PredictorModel};
use crate::sets::{candidate_cuts, cut_pool, kappa_w, primary_cut, sets_for_cut, Sets, Source};
use crate::spectra::{
    closed_loop_map, project_map, source_cov, source_row, spectrum, CMat, PredictorInnovation, SpectrumGrid,
    DEFAULT_TOL,
};
use crate::tf::RationalTF;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Satisfied,
    NotSatisfied,
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Satisfied => 0,
            Outcome::NotSatisfied => 1,
            Outcome::Inconclusive => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Generic,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub signals: Vec<String>,
    pub tol: f64,
    pub worst_ratio: f64,
    pub omega_at_worst: f64,
    pub offending_frequencies: Vec<f64>,
    pub regularized: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub cut: Vec<String>,
    pub cut_primary: bool,
    pub cuts_tried: usize,
    pub truncated: bool,
    pub sources: Vec<String>,
    pub sinks: Vec<String>,
    pub forbidden: Vec<String>,
    pub required: usize,
    pub found: usize,
    pub paths: Vec<Vec<String>>,
    /// Sources that start a witness path; only these need to be
    /// persistently exciting.
    pub pe_origins: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSummary>,
    pub suggested_placements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub condition: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<String>,
    pub result: Outcome,
    pub evidence: Evidence,
    pub hypotheses_checked: Vec<Hypothesis>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    pub grid: FrequencyGrid,
    pub tol: f64,
    pub max_card: usize,
    /// Use only this disconnecting set (node indices) instead of searching.
    pub cut: Option<Vec<usize>>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            grid: FrequencyGrid::default_grid(),
            tol: DEFAULT_TOL,
            max_card: DEFAULT_MAX_CARD,
            cut: None,
        }
    }
}

fn hypotheses(pred: &PredictorModel, names: &[&str]) -> Result<Vec<Hypothesis>> {
    let mut out = vec![];
    for &n in names {
        let holds = match n {
            "row_independent" => pred.row_independent,
            "column_block_independent" => pred.column_block_independent,
            _ => true,
        };
        if !holds {
            return Err(Error::HypothesisViolation(format!("parametrization is not {}", n.replace('_', " "))));
        }
        out.push(Hypothesis {
            name: n.to_string(),
            holds,
        });
    }
    Ok(out)
}

struct Context<'a> {
    net: &'a Network,
    pred: &'a PredictorModel,
    pm: ParamMap,
    g: NetGraph,
}

impl<'a> Context<'a> {
    fn new(net: &'a Network, pred: &'a PredictorModel) -> Result<Self> {
        let pm = ParamMap::derive(net, pred)?;
        let kw = kappa_w(&pm, pred);
        if !kw.contains(&pred.i) {
            return Err(Error::Invalid(format!(
                "target module {} -> {} is not parametrized",
                net.labels[pred.i], net.labels[pred.j]
            )));
        }
        Ok(Context {
            net,
            pred,
            pm,
            g: NetGraph::build(net),
        })
    }

    fn labels(&self, vs: &[usize]) -> Vec<String> {
        vs.iter().map(|&v| self.g.label(v).to_string()).collect()
    }

    fn src_vertices(&self, s: &[Source]) -> Vec<usize> {
        s.iter().map(|x| self.g.index(x.vertex())).collect()
    }

    /// Primary cut first, then every other separating node set by size.
    /// A fixed cut replaces the search. Flags: truncated search, first entry
    /// is the minimum cut.
    fn cuts(&self, opts: &CheckOptions) -> Result<(Vec<Vec<usize>>, bool, bool)> {
        let kw = kappa_w(&self.pm, self.pred);
        if let Some(c) = &opts.cut {
            let i = self.pred.i;
            let to: Vec<usize> = kw.iter().copied().filter(|&k| k != i).collect();
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            if c.contains(&i) || c.iter().any(|&k| k >= self.net.size()) || !self.g.disconnects(&[i], &to, &c) {
                return Err(Error::Invalid(format!(
                    "{{{}}} does not separate {} from the other parametrized inputs",
                    self.labels(&c).join(", "),
                    self.net.labels[i]
                )));
            }
            let primary = primary_cut(&self.g, self.net, i, &kw).is_ok_and(|p| p == c);
            return Ok((vec![c], false, primary));
        }
        let max_card = opts.max_card;
        let primary = primary_cut(&self.g, self.net, self.pred.i, &kw)?;
        let pool = cut_pool(&self.g, self.net, self.pred.i, &kw).len();
        let (card, truncated) = if pool <= EXHAUSTIVE_LIMIT {
            (pool, false)
        } else {
            (max_card, pool > max_card)
        };
        let mut out = vec![primary.clone()];
        for c in candidate_cuts(&self.g, self.net, self.pred.i, &kw, card) {
            if c != primary {
                out.push(c);
            }
        }
        Ok((out, truncated, true))
    }

    fn sets(&self, cut: &[usize], primary: bool) -> Sets {
        sets_for_cut(self.net, self.pred, &self.pm, &self.g, cut, primary)
    }

    fn path_evidence(&self, sources: &[usize], sinks: &[usize], forbidden: &[usize], required: usize) -> Evidence {
        let p = self.g.max_vertex_disjoint_paths(sources, sinks, forbidden);
        let mut origins: Vec<usize> = p.paths.iter().map(|q| q[0]).collect();
        origins.sort_unstable();
        Evidence {
            sources: self.labels(sources),
            sinks: self.labels(sinks),
            forbidden: self.labels(forbidden),
            required,
            found: p.count,
            paths: p.paths.iter().map(|q| self.labels(q)).collect(),
            pe_origins: self.labels(&origins),
            ..Evidence::default()
        }
    }

    fn placements(&self, nodes: &[usize]) -> Vec<String> {
        nodes
            .iter()
            .filter(|&&n| !self.net.excitations.iter().any(|e| e.node == n && e.is_present()))
            .map(|&n| self.net.labels[n].clone())
            .collect()
    }

    fn positions(&self, nodes: &[usize]) -> Vec<usize> {
        nodes.iter().map(|&n| self.pred.row_of(n).unwrap()).collect()
    }
}

fn stack(parts: &[&CMat], cols: usize) -> CMat {
    let n: usize = parts.iter().map(|p| p.nrows()).sum();
    let mut m = CMat::zeros(n, cols);
    let mut r = 0;
    for p in parts {
        m.view_mut((r, 0), (p.nrows(), cols)).copy_from(p);
        r += p.nrows();
    }
    m
}

fn summary(s: &SpectrumGrid, tol: f64) -> (bool, SpectrumSummary) {
    let v = s.pd_almost_all(tol);
    (
        v.positive_definite,
        SpectrumSummary {
            signals: s.signals.clone(),
            tol,
            worst_ratio: v.worst_ratio,
            omega_at_worst: v.omega_at_worst,
            offending_frequencies: v.offending_frequencies,
            regularized: s.regularized,
        },
    )
}

/// Spectrum of `(w_nodes ⊥ chi, ξ at positions)`.
fn eta_spectrum(
    ctx: &Context,
    nodes: &[usize],
    chi: &[Source],
    xi_nodes: &[usize],
    innov: Option<&PredictorInnovation>,
    opts: &CheckOptions,
) -> Result<SpectrumGrid> {
    let net = ctx.net;
    let sigma = source_cov(net);
    let ns = sigma.nrows();
    let xi_pos = ctx.positions(xi_nodes);
    let mut labels: Vec<String> = nodes.iter().map(|&n| net.labels[n].clone()).collect();
    labels.extend(xi_nodes.iter().map(|&n| format!("xi_{}", net.labels[n])));
    let mut values = Vec::with_capacity(opts.grid.len());
    let mut reg = false;
    for (_, z) in opts.grid.points() {
        let cl = closed_loop_map(net, z)?;
        let a_w = cl.select_rows(nodes);
        let mut a_c = CMat::zeros(chi.len(), ns);
        for (r, &s) in chi.iter().enumerate() {
            a_c.row_mut(r).copy_from(&source_row(net, s, z)?.row(0));
        }
        let (a_p, rg) = project_map(&a_w, &a_c, &sigma);
        reg |= rg;
        let a = match innov {
            Some(inn) if !xi_pos.is_empty() => {
                let a_x = inn.map(net, ctx.pred, &xi_pos, z)?;
                stack(&[&a_p, &a_x], ns)
            }
            _ => a_p,
        };
        values.push(spectrum(&a, &sigma));
    }
    let mut s = SpectrumGrid::new(labels, opts.grid.omegas.clone(), values);
    s.regularized = reg;
    Ok(s)
}

fn innovation_if_needed(ctx: &Context, xi_nodes: &[usize]) -> Result<Option<PredictorInnovation>> {
    if xi_nodes.is_empty() {
        Ok(None)
    } else {
        PredictorInnovation::new(ctx.net, ctx.pred).map(Some)
    }
}

/// Informativity for the target module of a network predictor model.
pub fn check_network(net: &Network, pred: &PredictorModel, mode: Mode, opts: &CheckOptions) -> Result<Verdict> {
    let hyp = hypotheses(pred, &["row_independent", "column_block_independent"])?;
    let ctx = Context::new(net, pred)?;
    let (cuts, truncated, first_primary) = ctx.cuts(opts)?;
    let confounded = pred.d.iter().any(|d| pred.y.contains(d));
    let mut notes = vec![];
    let condition = match mode {
        Mode::Generic => "network-generic",
        Mode::Numeric => "network-numeric",
    };
    let primary_sets = ctx.sets(&cuts[0], first_primary);
    if !primary_sets.u_perp_j_agrees() {
        notes.push(format!(
            "u_perp_j by predictor structure {:?} differs from the path-based characterization {:?}",
            primary_sets.u_perp_j.iter().map(|&k| &net.excitations[k].label).collect::<Vec<_>>(),
            primary_sets.u_perp_j_paths.iter().map(|&k| &net.excitations[k].label).collect::<Vec<_>>()
        ));
    }
    let innov = match mode {
        Mode::Numeric => {
            notes.push("innovation components are white with nonsingular covariance, hence persistently exciting".into());
            innovation_if_needed(&ctx, &primary_sets.kappa_xi)?
        }
        Mode::Generic => None,
    };
    let mut first: Option<Evidence> = None;
    for (n, cut) in cuts.iter().enumerate() {
        let s = ctx.sets(cut, n == 0 && first_primary);
        let mut numeric_ok = false;
        let mut ev = match mode {
            Mode::Generic => {
                let xt = ctx.src_vertices(&s.x_tstar);
                let sources: Vec<usize> = ctx
                    .src_vertices(&s.prop8_sources(net))
                    .into_iter()
                    .filter(|v| !xt.contains(v))
                    .collect();
                ctx.path_evidence(&sources, &s.eta_nodes, &s.w_t, s.eta_nodes.len())
            }
            Mode::Numeric => {
                let spec = eta_spectrum(&ctx, &s.eta_nodes, &s.chi, &s.kappa_xi, innov.as_ref(), opts)?;
                let (ok, sum) = summary(&spec, opts.tol);
                numeric_ok = ok;
                Evidence {
                    required: spec.dim(),
                    found: spectral_rank(&sum),
                    spectrum: Some(sum),
                    ..Evidence::default()
                }
            }
        };
        ev.cut = ctx.labels(cut);
        ev.cut_primary = n == 0 && first_primary;
        ev.cuts_tried = n + 1;
        ev.truncated = truncated;
        ev.suggested_placements = ctx.placements(&s.eta_nodes);
        let ok = match mode {
            Mode::Generic => ev.found >= ev.required,
            Mode::Numeric => numeric_ok,
        };
        if ok {
            if n > 0 {
                notes.push("satisfied for an alternative disconnecting set".into());
            }
            return Ok(Verdict {
                condition: condition.into(),
                row: None,
                result: Outcome::Satisfied,
                evidence: ev,
                hypotheses_checked: hyp,
                notes,
            });
        }
        if first.is_none() {
            first = Some(ev);
        }
    }
    let mut ev = first.unwrap();
    ev.cuts_tried = cuts.len();
    if confounded {
        notes.push("possibly conservative: predictor inputs that are also outputs may allow a larger e_perp_Y".into());
    }
    Ok(Verdict {
        condition: condition.into(),
        row: None,
        result: if truncated { Outcome::Inconclusive } else { Outcome::NotSatisfied },
        evidence: ev,
        hypotheses_checked: hyp,
        notes,
    })
}

fn spectral_rank(sp: &SpectrumSummary) -> usize {
    if sp.offending_frequencies.is_empty() {
        sp.signals.len()
    } else {
        sp.signals.len().saturating_sub(1)
    }
}

/// Informativity for a target module of an open-loop structured system.
pub fn check_openloop(sys: &OpenLoopSystem, mode: Mode, opts: &CheckOptions) -> Result<Verdict> {
    let net = &sys.net;
    let pred = &sys.pred;
    let hyp = hypotheses(pred, &["column_block_independent"])?;
    let ctx = Context::new(net, pred)?;
    let (cuts, truncated, first_primary) = ctx.cuts(opts)?;
    let condition = match mode {
        Mode::Generic => "openloop-generic",
        Mode::Numeric => "openloop-numeric",
    };
    let mut first: Option<Evidence> = None;
    for (n, cut) in cuts.iter().enumerate() {
        let s = ctx.sets(cut, n == 0 && first_primary);
        let xts: Vec<Source> = s.x_tstar.iter().copied().filter(|x| matches!(x, Source::R(_))).collect();
        let mut numeric_ok = false;
        let mut ev = match mode {
            Mode::Generic => {
                let sources: Vec<usize> = net
                    .present_excitations()
                    .into_iter()
                    .filter(|&k| net.excitations[k].pe && !xts.contains(&Source::R(k)))
                    .map(|k| ctx.g.index(Vertex::R(k)))
                    .collect();
                ctx.path_evidence(&sources, &s.eta_nodes, &s.w_t, s.eta_nodes.len())
            }
            Mode::Numeric => {
                let spec = eta_spectrum(&ctx, &s.eta_nodes, &xts, &[], None, opts)?;
                let (ok, sum) = summary(&spec, opts.tol);
                numeric_ok = ok;
                Evidence {
                    required: spec.dim(),
                    found: spectral_rank(&sum),
                    spectrum: Some(sum),
                    ..Evidence::default()
                }
            }
        };
        ev.cut = ctx.labels(cut);
        ev.cut_primary = n == 0 && first_primary;
        ev.cuts_tried = n + 1;
        ev.truncated = truncated;
        ev.suggested_placements = ctx.placements(&s.eta_nodes);
        let ok = match mode {
            Mode::Generic => ev.found >= ev.required,
            Mode::Numeric => numeric_ok,
        };
        if ok {
            let notes = if n > 0 {
                vec!["satisfied for an alternative disconnecting set".into()]
            } else {
                vec![]
            };
            return Ok(Verdict {
                condition: condition.into(),
                row: None,
                result: Outcome::Satisfied,
                evidence: ev,
                hypotheses_checked: hyp,
                notes,
            });
        }
        if first.is_none() {
            first = Some(ev);
        }
    }
    let mut ev = first.unwrap();
    ev.cuts_tried = cuts.len();
    Ok(Verdict {
        condition: condition.into(),
        row: None,
        result: if truncated { Outcome::Inconclusive } else { Outcome::NotSatisfied },
        evidence: ev,
        hypotheses_checked: hyp,
        notes: vec![],
    })
}

/// One verdict per output row: the row's parametrized signals must have a
/// positive definite joint spectrum.
pub fn check_rowwise(net: &Network, pred: &PredictorModel, mode: Mode, opts: &CheckOptions) -> Result<Vec<Verdict>> {
    let hyp = hypotheses(pred, &["row_independent"])?;
    let pm = ParamMap::derive(net, pred)?;
    let g = NetGraph::build(net);
    let ctx = Context {
        net,
        pred,
        pm: pm.clone(),
        g,
    };
    let e_y: Vec<usize> = net
        .present_noises()
        .into_iter()
        .filter(|&l| (0..pm.y.len()).any(|r| pm.noise_reach[r][l] && pm.noise_row_parametrized(r)))
        .collect();
    let mut innov: Option<PredictorInnovation> = None;
    let mut out = vec![];
    for (r, &y) in pred.y.iter().enumerate() {
        let wd: Vec<usize> = pred
            .d
            .iter()
            .enumerate()
            .filter(|(c, _)| pm.g[r][*c].is_parametrized())
            .map(|(_, &d)| d)
            .collect();
        let xi: Vec<usize> = pred
            .y
            .iter()
            .enumerate()
            .filter(|(c, _)| pm.h[r][*c].is_parametrized())
            .map(|(_, &n)| n)
            .collect();
        let ru: Vec<Source> = (0..net.excitations.len())
            .filter(|&k| pm.t[r][k].is_parametrized() && net.excitations[k].is_present())
            .map(Source::R)
            .collect();
        let full = pm.g[r].iter().chain(pm.h[r].iter()).chain(pm.t[r].iter()).all(|e| e.is_parametrized());
        let mut notes = vec![];
        if full {
            notes.push("row has no structural zeros; condition equals the full spectrum condition".into());
        }
        let (ok, ev) = match mode {
            Mode::Generic => {
                let mut sources: Vec<usize> = net
                    .present_excitations()
                    .into_iter()
                    .filter(|&k| net.excitations[k].pe && !pm.t[r][k].is_parametrized())
                    .map(|k| ctx.g.index(Vertex::R(k)))
                    .collect();
                sources.extend(
                    net.present_noises()
                        .into_iter()
                        .filter(|l| !e_y.contains(l))
                        .map(|l| ctx.g.index(Vertex::E(l))),
                );
                let ev = ctx.path_evidence(&sources, &wd, &[], wd.len());
                (ev.found >= ev.required, ev)
            }
            Mode::Numeric => {
                if !xi.is_empty() && innov.is_none() {
                    innov = Some(PredictorInnovation::new(net, pred)?);
                }
                let sigma = source_cov(net);
                let ns = sigma.nrows();
                let pos = ctx.positions(&xi);
                let mut labels: Vec<String> = wd.iter().map(|&n| net.labels[n].clone()).collect();
                labels.extend(xi.iter().map(|&n| format!("xi_{}", net.labels[n])));
                labels.extend(ru.iter().map(|s| s.label(net)));
                let mut values = vec![];
                for (_, z) in opts.grid.points() {
                    let cl = closed_loop_map(net, z)?;
                    let a_w = cl.select_rows(&wd);
                    let a_x = match &innov {
                        Some(inn) if !pos.is_empty() => inn.map(net, pred, &pos, z)?,
                        _ => CMat::zeros(0, ns),
                    };
                    let mut a_u = CMat::zeros(ru.len(), ns);
                    for (k, &s) in ru.iter().enumerate() {
                        a_u.row_mut(k).copy_from(&source_row(net, s, z)?.row(0));
                    }
                    values.push(spectrum(&stack(&[&a_w, &a_x, &a_u], ns), &sigma));
                }
                let spec = SpectrumGrid::new(labels, opts.grid.omegas.clone(), values);
                let (ok, sum) = summary(&spec, opts.tol);
                let ev = Evidence {
                    required: spec.dim(),
                    found: spectral_rank(&sum),
                    spectrum: Some(sum),
                    ..Evidence::default()
                };
                (ok, ev)
            }
        };
        out.push(Verdict {
            condition: match mode {
                Mode::Generic => "rowwise-generic".into(),
                Mode::Numeric => "rowwise-numeric".into(),
            },
            row: Some(net.labels[y].clone()),
            result: if ok { Outcome::Satisfied } else { Outcome::NotSatisfied },
            evidence: ev,
            hypotheses_checked: hyp.clone(),
            notes,
        });
    }
    Ok(out)
}

/// Generic identifiability of the target module from `(w, r)`: some node set
/// separating `𝒳_j ∪ {w_i}` from the other parametrized inputs admits
/// `|𝒟^c| + 1` disjoint paths from `𝒳_j` to `w_{i ∪ 𝒟^c}`.
pub fn check_identifiability(net: &Network, pred: &PredictorModel, opts: &CheckOptions) -> Result<Verdict> {
    let ctx = Context::new(net, pred)?;
    let hyp = vec![Hypothesis {
        name: "strictly_proper_modules".into(),
        holds: net.g.nonzeros().all(|(_, _, t)| t.strictly_proper()),
    }];
    let kw = kappa_w(&ctx.pm, pred);
    let s0 = ctx.sets(&[], true);
    let xj = ctx.src_vertices(&s0.x_j);
    let i = pred.i;
    let mut from = xj.clone();
    from.push(i);
    let to: Vec<usize> = kw.iter().copied().filter(|&k| k != i).collect();
    let excluded: Vec<usize> = (net.size()..ctx.g.len()).collect();
    let en = ctx.g.enumerate_disconnecting_sets(&from, &to, &excluded, opts.max_card);
    let mut first = None;
    for (n, cut) in en.sets.iter().enumerate() {
        let mut sinks = vec![i];
        sinks.extend(cut);
        let mut ev = ctx.path_evidence(&xj, &sinks, &[], sinks.len());
        ev.cut = ctx.labels(cut);
        ev.cut_primary = n == 0;
        ev.cuts_tried = n + 1;
        ev.truncated = en.truncated;
        if ev.found >= ev.required {
            return Ok(Verdict {
                condition: "identifiability-generic".into(),
                row: None,
                result: Outcome::Satisfied,
                evidence: ev,
                hypotheses_checked: hyp,
                notes: vec![],
            });
        }
        if first.is_none() {
            first = Some(ev);
        }
    }
    let mut ev = first.unwrap_or_else(|| Evidence {
        sources: ctx.labels(&xj),
        ..Evidence::default()
    });
    ev.cuts_tried = en.sets.len();
    ev.truncated = en.truncated;
    Ok(Verdict {
        condition: "identifiability-generic".into(),
        row: None,
        result: if en.truncated { Outcome::Inconclusive } else { Outcome::NotSatisfied },
        evidence: ev,
        hypotheses_checked: hyp,
        notes: vec![],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Agree,
    IdentifiabilityOnly,
    InformativityOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub single_output: bool,
    pub informativity: Outcome,
    pub identifiability: Outcome,
    pub agreement: Agreement,
    /// Sources counted for identifiability but not for informativity.
    pub set_difference: Vec<String>,
    pub explanation: String,
}

pub fn compare(net: &Network, pred: &PredictorModel, opts: &CheckOptions) -> Result<Comparison> {
    let inf = check_network(net, pred, Mode::Generic, opts)?;
    let idf = check_identifiability(net, pred, opts)?;
    let s = crate::sets::derive_sets(net, pred)?;
    let p8: Vec<Source> = s.prop8_sources(net);
    let diff: Vec<String> = s.x_j.iter().filter(|x| !p8.contains(x)).map(|x| x.label(net)).collect();
    let agreement = match (inf.result, idf.result) {
        (a, b) if a == b => Agreement::Agree,
        (Outcome::Satisfied, _) => Agreement::InformativityOnly,
        (_, Outcome::Satisfied) => Agreement::IdentifiabilityOnly,
        _ => Agreement::Agree,
    };
    let explanation = match agreement {
        Agreement::Agree => "both conditions give the same verdict".to_string(),
        Agreement::IdentifiabilityOnly => format!(
            "sources {{{}}} have no parametrized link to the target output but reach another output through unknown dynamics",
            diff.join(",")
        ),
        Agreement::InformativityOnly => "informativity holds while identifiability does not".to_string(),
    };
    Ok(Comparison {
        single_output: pred.y.len() == 1,
        informativity: inf.result,
        identifiability: idf.result,
        agreement,
        set_difference: diff,
        explanation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub trials: usize,
    pub seed: u64,
    pub generic: Option<Outcome>,
    pub numeric_satisfied: usize,
    pub numeric_not_satisfied: usize,
    pub failed_instantiations: usize,
    pub agreement: Option<f64>,
}

/// Draws random stable first-order values for every module and every
/// off-diagonal noise entry, keeping the structure.
pub fn randomize(net: &Network, rng: &mut ChaCha8Rng) -> Option<Network> {
    let mut scale = 1.0;
    for _ in 0..40 {
        let mut n = net.clone();
        let entries: Vec<(usize, usize)> = net.g.nonzeros().map(|(r, c, _)| (r, c)).collect();
        for (r, c) in entries {
            let b: f64 = rng.random_range(0.2..1.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 } * scale;
            let a: f64 = rng.random_range(-0.6..0.6);
            let st = net.g.get(r, c).status.clone();
            let tf = RationalTF::from_coeffs(&[0.0, b], &[1.0, a]).ok()?.set_status(st);
            n.g.set(r, c, tf);
        }
        let hs: Vec<(usize, usize)> = net.h.nonzeros().filter(|(r, c, _)| r != c).map(|(r, c, _)| (r, c)).collect();
        for (r, c) in hs {
            let v: f64 = rng.random_range(0.1..0.5) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            n.h.set(r, c, RationalTF::from_coeffs(&[0.0, v], &[1.0]).ok()?);
        }
        if validate(&n).passed {
            return Some(n);
        }
        scale *= 0.85;
    }
    None
}

/// Main informativity verdict: the open-loop form when the predictor
/// describes an open-loop system, the network form otherwise.
pub fn check(net: &Network, pred: &PredictorModel, mode: Mode, opts: &CheckOptions) -> Result<Verdict> {
    match OpenLoopSystem::from_network(net, pred) {
        Some(sys) => check_openloop(&sys, mode, opts),
        None => check_network(net, pred, mode, opts),
    }
}

pub fn generic_verdict(net: &Network, pred: &PredictorModel, opts: &CheckOptions) -> Result<Outcome> {
    Ok(check(net, pred, Mode::Generic, opts)?.result)
}

/// Fraction of random instantiations whose numeric verdict matches the
/// generic one.
pub fn generic_rank_probe(
    net: &Network,
    pred: &PredictorModel,
    trials: usize,
    seed: u64,
    opts: &CheckOptions,
) -> Result<ProbeReport> {
    let mut rep = ProbeReport {
        trials,
        seed,
        generic: None,
        numeric_satisfied: 0,
        numeric_not_satisfied: 0,
        failed_instantiations: 0,
        agreement: None,
    };
    if trials == 0 {
        return Ok(rep);
    }
    let generic = generic_verdict(net, pred, opts)?;
    rep.generic = Some(generic);
    let mut agree = 0;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
        let Some(inst) = randomize(net, &mut rng) else {
            rep.failed_instantiations += 1;
            continue;
        };
        match check(&inst, pred, Mode::Numeric, opts).map(|v| v.result) {
            Ok(Outcome::Satisfied) => {
                rep.numeric_satisfied += 1;
                agree += (generic == Outcome::Satisfied) as usize;
            }
            Ok(_) => {
                rep.numeric_not_satisfied += 1;
                agree += (generic == Outcome::NotSatisfied) as usize;
            }
            Err(_) => rep.failed_instantiations += 1,
        }
    }
    rep.agreement = Some(agree as f64 / trials as f64);
    Ok(rep)
}
