//! Direct-method prediction-error estimation.
//!
//! `ε(t) = A(q) [w_Y − Ḡ w_D − T̄ r]` with `A = H̄^{-1}` a monic matrix
//! polynomial, cost `(1/N) Σ |ε(t)|²`, minimized by Levenberg–Marquardt.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::model::predictor::{Block, EntryStatus, ParamMap};
use crate::model::{Network, PredictorModel};
use crate::tf::{Orders, Poly, RationalTF};

use super::sim::DataRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimateOptions {
    /// Orders for parametrized `Ḡ` entries without explicit orders.
    pub g_orders: Orders,
    /// Orders for parametrized `T̄` entries without explicit orders.
    pub t_orders: Orders,
    /// Degree of `A = H̄^{-1}`; the predictor's `noise_order` takes precedence.
    pub noise_order: usize,
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Restarts are screened on this many leading samples.
    pub screen_len: usize,
    pub error_grid: usize,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            g_orders: Orders::fir(10, 1),
            t_orders: Orders::fir(10, 0),
            noise_order: 2,
            restarts: 5,
            seed: 0,
            max_iter: 100,
            screen_len: 4096,
            error_grid: 512,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum Input {
    W(usize),
    R(usize),
}

/// One parametrized entry `q^{-nk} B/F` in row `row` (position in `Y`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub block: Block,
    pub row: usize,
    pub input: Input,
    pub orders: Orders,
    pub offset: usize,
}

/// Free coefficient `A_lag[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseParam {
    pub lag: usize,
    pub row: usize,
    pub col: usize,
}

pub struct Problem<'a> {
    data: &'a DataRecord,
    ny: usize,
    n: usize,
    t0: usize,
    base: Vec<Vec<f64>>,
    pub terms: Vec<Term>,
    pub noise: Vec<NoiseParam>,
    pub noise_offset: usize,
    pub na: usize,
}

pub struct Evaluation {
    pub eps: Vec<Vec<f64>>,
    pub cost: f64,
    pub jac: Option<DMatrix<f64>>,
}

fn shifted(x: &[f64], lag: usize, t: usize) -> f64 {
    if t >= lag {
        x[t - lag]
    } else {
        0.0
    }
}

fn all_pole(f: &[f64], x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    for t in 0..x.len() {
        let mut v = x[t];
        for (m, fm) in f.iter().enumerate() {
            if t > m {
                v -= fm * y[t - m - 1];
            }
        }
        y[t] = v;
    }
    y
}

fn den_stable(f: &[f64]) -> bool {
    if f.is_empty() {
        return true;
    }
    let n = f.len();
    let mut c = DMatrix::zeros(n, n);
    for k in 0..n {
        c[(0, k)] = -f[k];
        if k + 1 < n {
            c[(k + 1, k)] = 1.0;
        }
    }
    crate::ss::spectral_radius(&c) < 1.0
}

impl<'a> Problem<'a> {
    pub fn new(data: &'a DataRecord, pred: &PredictorModel, pm: &ParamMap, opts: &EstimateOptions) -> Result<Self> {
        let ny = pred.y.len();
        let n = data.len();
        let na = pred.noise_order.unwrap_or(opts.noise_order);
        let mut base: Vec<Vec<f64>> = pred.y.iter().map(|&y| data.w[y].clone()).collect();
        let mut terms = vec![];
        let mut offset = 0;
        let known = |tf: &Option<RationalTF>, what: String| {
            tf.clone()
                .ok_or_else(|| Error::OrderMismatch(format!("known entry {what} has no transfer function")))
        };
        for r in 0..ny {
            for (c, &d) in pred.d.iter().enumerate() {
                match &pm.g[r][c] {
                    EntryStatus::Zero => {}
                    EntryStatus::Known { tf, .. } => {
                        let tf = known(tf, format!("G[{r}][{c}]"))?;
                        let x = super::sim::lfilter(&tf, &data.w[d]);
                        base[r].iter_mut().zip(x).for_each(|(b, v)| *b -= v);
                    }
                    EntryStatus::Parametrized { orders } => {
                        let o = orders.unwrap_or(opts.g_orders);
                        terms.push(Term {
                            block: Block::G,
                            row: r,
                            input: Input::W(d),
                            orders: o,
                            offset,
                        });
                        offset += o.nb + o.nf;
                    }
                }
            }
            for k in 0..pm.t[r].len() {
                match &pm.t[r][k] {
                    EntryStatus::Zero => {}
                    EntryStatus::Known { tf, .. } => {
                        let tf = known(tf, format!("T[{r}][{k}]"))?;
                        let x = super::sim::lfilter(&tf, &data.r[k]);
                        base[r].iter_mut().zip(x).for_each(|(b, v)| *b -= v);
                    }
                    EntryStatus::Parametrized { .. } if data.r[k].iter().all(|&x| x == 0.0) => {}
                    EntryStatus::Parametrized { orders } => {
                        let o = orders.unwrap_or(opts.t_orders);
                        terms.push(Term {
                            block: Block::T,
                            row: r,
                            input: Input::R(k),
                            orders: o,
                            offset,
                        });
                        offset += o.nb + o.nf;
                    }
                }
            }
        }
        let noise_offset = offset;
        let mut noise = vec![];
        for r in 0..ny {
            for c in 0..ny {
                if let EntryStatus::Known { tf: Some(tf), .. } = &pm.h[r][c] {
                    let unit = r == c && tf.num.coeffs() == [1.0] && tf.den.coeffs() == [1.0];
                    if !unit {
                        return Err(Error::OrderMismatch("known dynamic noise entries are not supported".into()));
                    }
                }
            }
        }
        for lag in 1..=na {
            for r in 0..ny {
                if !pm.noise_row_parametrized(r) {
                    continue;
                }
                for c in 0..ny {
                    if c == r || pm.h[r][c].is_parametrized() {
                        noise.push(NoiseParam { lag, row: r, col: c });
                    }
                }
            }
        }
        let p = noise_offset + noise.len();
        if n < 10 * p.max(1) {
            return Err(Error::OrderMismatch(format!("{n} samples for {p} parameters")));
        }
        let lag = terms
            .iter()
            .map(|t| (t.orders.nk + t.orders.nb).max(t.orders.nf))
            .max()
            .unwrap_or(0);
        Ok(Problem {
            data,
            ny,
            n,
            t0: lag + na,
            base,
            terms,
            noise,
            noise_offset,
            na,
        })
    }

    pub fn param_count(&self) -> usize {
        self.noise_offset + self.noise.len()
    }

    pub fn samples(&self) -> usize {
        self.n - self.t0
    }

    fn input(&self, i: Input) -> &[f64] {
        match i {
            Input::W(d) => &self.data.w[d],
            Input::R(k) => &self.data.r[k],
        }
    }

    /// `A_lag[row][col]` as a dense array `[lag][row][col]`, lag 0 = I.
    pub fn noise_coeffs(&self, theta: &[f64]) -> Vec<DMatrix<f64>> {
        let mut a = vec![DMatrix::zeros(self.ny, self.ny); self.na + 1];
        a[0] = DMatrix::identity(self.ny, self.ny);
        for (k, np) in self.noise.iter().enumerate() {
            a[np.lag][(np.row, np.col)] = theta[self.noise_offset + k];
        }
        a
    }

    pub fn evaluate(&self, theta: &[f64], jacobian: bool) -> Evaluation {
        let (n, ny, t0) = (self.n, self.ny, self.t0);
        let m = ny * (n - t0);
        let p = self.param_count();
        let mut v = self.base.clone();
        let mut jac = if jacobian { Some(DMatrix::zeros(m, p)) } else { None };
        // dv for entry parameters, per parameter: (row, signal)
        let mut dv: Vec<(usize, Vec<f64>)> = Vec::new();
        for term in &self.terms {
            let o = term.orders;
            let b = &theta[term.offset..term.offset + o.nb];
            let f = &theta[term.offset + o.nb..term.offset + o.nb + o.nf];
            if !den_stable(f) {
                return Evaluation {
                    eps: vec![],
                    cost: f64::INFINITY,
                    jac: None,
                };
            }
            let x_in = self.input(term.input);
            let u = if o.nf > 0 { all_pole(f, x_in) } else { x_in.to_vec() };
            let mut x = vec![0.0; n];
            for (t, xt) in x.iter_mut().enumerate() {
                *xt = b.iter().enumerate().map(|(mm, bm)| bm * shifted(&u, o.nk + mm, t)).sum();
            }
            for t in 0..n {
                v[term.row][t] -= x[t];
            }
            if jacobian {
                for mm in 0..o.nb {
                    let s = (0..n).map(|t| -shifted(&u, o.nk + mm, t)).collect();
                    dv.push((term.row, s));
                }
                if o.nf > 0 {
                    let fx = all_pole(f, &x);
                    for mm in 0..o.nf {
                        let s = (0..n).map(|t| shifted(&fx, mm + 1, t)).collect();
                        dv.push((term.row, s));
                    }
                }
            }
        }
        let a = self.noise_coeffs(theta);
        let mix = |s: usize, r: usize, sig: &[f64], t: usize| -> f64 {
            let mut acc = if s == r { sig[t] } else { 0.0 };
            for lag in 1..=self.na {
                let c = a[lag][(s, r)];
                if c != 0.0 && t >= lag {
                    acc += c * sig[t - lag];
                }
            }
            acc
        };
        let mut eps = vec![vec![0.0; n]; ny];
        let mut cost = 0.0;
        for s in 0..ny {
            for t in 0..n {
                let e: f64 = (0..ny).map(|r| mix(s, r, &v[r], t)).sum();
                eps[s][t] = e;
                if t >= t0 {
                    cost += e * e;
                }
            }
        }
        let cost = cost / (n - t0) as f64;
        if let Some(j) = jac.as_mut() {
            for (col, (r, sig)) in dv.iter().enumerate() {
                for s in 0..ny {
                    if s != *r && (1..=self.na).all(|lag| a[lag][(s, *r)] == 0.0) {
                        continue;
                    }
                    for t in t0..n {
                        j[(s * (n - t0) + t - t0, col)] = mix(s, *r, sig, t);
                    }
                }
            }
            for (k, np) in self.noise.iter().enumerate() {
                let col = self.noise_offset + k;
                for t in t0..n {
                    j[(np.row * (n - t0) + t - t0, col)] = shifted(&v[np.col], np.lag, t);
                }
            }
        }
        Evaluation { eps, cost, jac }
    }

    fn residual_vector(&self, ev: &Evaluation) -> DVector<f64> {
        let (n, t0) = (self.n, self.t0);
        let mut r = DVector::zeros(self.ny * (n - t0));
        for s in 0..self.ny {
            for t in t0..n {
                r[s * (n - t0) + t - t0] = ev.eps[s][t];
            }
        }
        r
    }

    pub fn cost(&self, theta: &[f64]) -> f64 {
        self.evaluate(theta, false).cost
    }

    /// Analytic gradient of the cost.
    pub fn gradient(&self, theta: &[f64]) -> Vec<f64> {
        let ev = self.evaluate(theta, true);
        let r = self.residual_vector(&ev);
        let j = ev.jac.expect("jacobian");
        let g = j.tr_mul(&r) * (2.0 / self.samples() as f64);
        g.iter().copied().collect()
    }

    /// Min-norm least-squares update of the parameters in `mask`, exact for
    /// parameters entering `ε` linearly.
    fn ls_step(&self, theta: &mut [f64], mask: &[usize]) {
        if mask.is_empty() {
            return;
        }
        let ev = self.evaluate(theta, true);
        let r = self.residual_vector(&ev);
        let j = ev.jac.unwrap().select_columns(mask);
        let h = j.tr_mul(&j);
        let g = j.tr_mul(&r);
        let delta = pinv_solve(&h, &g);
        for (k, &idx) in mask.iter().enumerate() {
            theta[idx] -= delta[k];
        }
    }

    /// Least-squares pre-fit: FIR numerators with `A = I`, then the noise
    /// polynomial, then numerators again.
    pub fn initial(&self) -> Vec<f64> {
        let mut theta = vec![0.0; self.param_count()];
        let b: Vec<usize> = self
            .terms
            .iter()
            .flat_map(|t| t.offset..t.offset + t.orders.nb)
            .collect();
        let a: Vec<usize> = (self.noise_offset..self.param_count()).collect();
        self.ls_step(&mut theta, &b);
        self.ls_step(&mut theta, &a);
        self.ls_step(&mut theta, &b);
        self.ls_step(&mut theta, &a);
        theta
    }
}

fn pinv_solve(h: &DMatrix<f64>, g: &DVector<f64>) -> DVector<f64> {
    let n = h.nrows();
    if n == 0 {
        return DVector::zeros(0);
    }
    let sym = (h + h.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let max = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cut = 1e-12 * max;
    let proj = eig.eigenvectors.tr_mul(g);
    let mut y = DVector::zeros(n);
    for k in 0..n {
        let l = eig.eigenvalues[k];
        if l > cut {
            y[k] = proj[k] / l;
        }
    }
    &eig.eigenvectors * y
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LmOutcome {
    pub theta: Vec<f64>,
    pub cost: f64,
    pub trace: Vec<f64>,
    pub converged: bool,
}

/// Levenberg–Marquardt with scaled damping; a singular `JᵀJ` is regularized
/// by the damping term, so flat directions stay where they start.
pub fn levenberg_marquardt(problem: &Problem, theta0: &[f64], max_iter: usize) -> LmOutcome {
    let p = problem.param_count();
    let mut theta = theta0.to_vec();
    let mut ev = problem.evaluate(&theta, true);
    let mut cost = ev.cost;
    let mut trace = vec![cost];
    let mut mu = 1e-3;
    let mut converged = false;
    let scale = 2.0 / problem.samples() as f64;
    for _ in 0..max_iter {
        if !cost.is_finite() || p == 0 {
            converged = p == 0;
            break;
        }
        let r = problem.residual_vector(&ev);
        let j = ev.jac.take().expect("jacobian");
        let h = j.tr_mul(&j);
        let g = j.tr_mul(&r);
        drop(j);
        let grad_inf = g.amax() * scale;
        if grad_inf <= 1e-12 * cost.max(1e-300) {
            converged = true;
            break;
        }
        let floor = 1e-9 * h.trace().max(1e-300) / p as f64;
        let mut accepted = None;
        while mu < 1e12 {
            let mut a = h.clone();
            for k in 0..p {
                a[(k, k)] += mu * (h[(k, k)] + floor);
            }
            let step = match a.clone().cholesky() {
                Some(c) => c.solve(&g),
                None => pinv_solve(&a, &g),
            };
            let cand: Vec<f64> = theta.iter().zip(step.iter()).map(|(t, s)| t - s).collect();
            let c = problem.cost(&cand);
            if c.is_finite() && c < cost {
                accepted = Some((cand, c, step.norm()));
                mu = (mu / 3.0).max(1e-12);
                break;
            }
            mu *= 4.0;
        }
        match accepted {
            None => {
                converged = true;
                break;
            }
            Some((cand, c, step_norm)) => {
                let decrease = cost - c;
                let tnorm = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
                theta = cand;
                cost = c;
                trace.push(cost);
                ev = problem.evaluate(&theta, true);
                if decrease <= 1e-13 * cost || step_norm <= 1e-11 * (1.0 + tnorm) {
                    converged = true;
                    break;
                }
            }
        }
    }
    LmOutcome {
        theta,
        cost,
        trace,
        converged,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatedEntry {
    pub block: Block,
    /// Node index of the output row.
    pub row: usize,
    /// Node index (G, H) or excitation index (T).
    pub col: usize,
    pub orders: Option<Orders>,
    pub tf: RationalTF,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetError {
    pub omegas: Vec<f64>,
    /// `|Ĝ(ω) − G0(ω)| / sup |G0|`.
    pub relative: Vec<f64>,
    pub sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub entries: Vec<EstimatedEntry>,
    /// `A_k` of `H̄^{-1} = I + Σ A_k q^{-k}`, indexed `[k-1][row][col]`.
    pub noise_inverse: Vec<Vec<Vec<f64>>>,
    pub parameters: Vec<f64>,
    pub cost: f64,
    pub trace: Vec<f64>,
    pub start_costs: Vec<f64>,
    pub converged: bool,
    pub target: Option<TargetError>,
}

impl EstimationResult {
    pub fn entry(&self, block: Block, row: usize, col: usize) -> Option<&EstimatedEntry> {
        self.entries
            .iter()
            .find(|e| e.block == block && e.row == row && e.col == col)
    }

    pub fn target_error(&self) -> Option<f64> {
        self.target.as_ref().map(|t| t.sup)
    }
}

fn poly_from(c: &[f64], delay: usize) -> Poly {
    let mut v = vec![0.0; delay];
    v.extend_from_slice(c);
    Poly::new(v)
}

fn poly_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero();
    for c in 0..n {
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = m[0][c].mul(&poly_det(&minor));
        acc = if c % 2 == 0 { acc.add(&term) } else { acc.add(&term.neg()) };
    }
    acc
}

/// `H̄ = A^{-1}` entrywise by cofactors; `None` above four outputs.
fn noise_model(a: &[DMatrix<f64>]) -> Option<Vec<Vec<RationalTF>>> {
    let ny = a[0].nrows();
    if ny > 4 {
        return None;
    }
    let poly = |r: usize, c: usize| Poly::new(a.iter().map(|m| m[(r, c)]).collect());
    let m: Vec<Vec<Poly>> = (0..ny).map(|r| (0..ny).map(|c| poly(r, c)).collect()).collect();
    let det = poly_det(&m);
    let mut out = vec![vec![RationalTF::zero(); ny]; ny];
    for r in 0..ny {
        for c in 0..ny {
            // (A^{-1})_{rc} = cofactor_{cr} / det
            let minor: Vec<Vec<Poly>> = m
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != c)
                .map(|(_, row)| row.iter().enumerate().filter(|(k, _)| *k != r).map(|(_, p)| p.clone()).collect())
                .collect();
            let cof = poly_det(&minor);
            let cof = if (r + c) % 2 == 0 { cof } else { cof.neg() };
            out[r][c] = RationalTF::new(cof, det.clone()).ok()?;
        }
    }
    Some(out)
}

fn term_tf(term: &Term, theta: &[f64]) -> RationalTF {
    let o = term.orders;
    let b = &theta[term.offset..term.offset + o.nb];
    let mut f = vec![1.0];
    f.extend_from_slice(&theta[term.offset + o.nb..term.offset + o.nb + o.nf]);
    RationalTF::new(poly_from(b, o.nk), Poly::new(f)).unwrap_or_else(|_| RationalTF::zero())
}

pub fn relative_error(est: &RationalTF, truth: &RationalTF, grid: &FrequencyGrid) -> Result<TargetError> {
    let mut num = vec![];
    let mut sup = 0.0f64;
    for (_, z) in grid.points() {
        let g0 = truth.eval(z)?;
        let g = est.eval(z)?;
        num.push((g - g0).norm());
        sup = sup.max(g0.norm());
    }
    let denom = if sup > 0.0 { sup } else { 1.0 };
    let relative: Vec<f64> = num.iter().map(|x| x / denom).collect();
    Ok(TargetError {
        omegas: grid.omegas.clone(),
        sup: relative.iter().copied().fold(0.0, f64::max),
        relative,
    })
}

/// Estimates every parametrized entry of the predictor model whose
/// structure is derived from `net`; the target error is measured against
/// `net`'s own `G_ji`.
pub fn estimate_direct(
    data: &DataRecord,
    net: &Network,
    pred: &PredictorModel,
    opts: &EstimateOptions,
) -> Result<EstimationResult> {
    let pm = ParamMap::derive(net, pred)?;
    let problem = Problem::new(data, pred, &pm, opts)?;
    let p = problem.param_count();
    let theta0 = problem.initial();
    let mut starts = vec![theta0.clone()];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 1..opts.restarts.max(1) {
        starts.push(
            theta0
                .iter()
                .map(|t| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    t + z * (0.3 * t.abs() + 0.05)
                })
                .collect(),
        );
    }
    let screen = data.len() > opts.screen_len && starts.len() > 1;
    let (best, start_costs) = if screen {
        let head = data.prefix(opts.screen_len);
        let sp = Problem::new(&head, pred, &pm, opts)?;
        let runs: Vec<LmOutcome> = starts.iter().map(|s| levenberg_marquardt(&sp, s, 30)).collect();
        let costs: Vec<f64> = runs.iter().map(|r| r.cost).collect();
        let k = argmin(&costs);
        (runs[k].theta.clone(), costs)
    } else {
        let runs: Vec<LmOutcome> = starts.iter().map(|s| levenberg_marquardt(&problem, s, opts.max_iter)).collect();
        let costs: Vec<f64> = runs.iter().map(|r| r.cost).collect();
        let k = argmin(&costs);
        (runs[k].theta.clone(), costs)
    };
    let out = levenberg_marquardt(&problem, &best, opts.max_iter);
    let theta = out.theta;
    let mut entries: Vec<EstimatedEntry> = problem
        .terms
        .iter()
        .map(|t| EstimatedEntry {
            block: t.block,
            row: pred.y[t.row],
            col: match t.input {
                Input::W(d) => d,
                Input::R(k) => k,
            },
            orders: Some(t.orders),
            tf: term_tf(t, &theta),
        })
        .collect();
    let a = problem.noise_coeffs(&theta);
    if let Some(hm) = noise_model(&a) {
        for r in 0..pred.y.len() {
            for c in 0..pred.y.len() {
                if pm.h[r][c].is_parametrized() {
                    entries.push(EstimatedEntry {
                        block: Block::H,
                        row: pred.y[r],
                        col: pred.y[c],
                        orders: None,
                        tf: hm[r][c].clone(),
                    });
                }
            }
        }
    }
    let target = match entries.iter().find(|e| e.block == Block::G && e.row == pred.j && e.col == pred.i) {
        Some(e) => Some(relative_error(
            &e.tf,
            net.module(pred.i, pred.j),
            &FrequencyGrid::uniform_closed(opts.error_grid),
        )?),
        None => None,
    };
    debug_assert_eq!(theta.len(), p);
    Ok(EstimationResult {
        entries,
        noise_inverse: a[1..]
            .iter()
            .map(|m| (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect())
            .collect(),
        parameters: theta,
        cost: out.cost,
        trace: out.trace,
        start_costs,
        converged: out.converged,
        target,
    })
}

fn argmin(v: &[f64]) -> usize {
    let mut k = 0;
    for (i, x) in v.iter().enumerate() {
        if *x < v[k] || !v[k].is_finite() {
            k = i;
        }
    }
    k
}
