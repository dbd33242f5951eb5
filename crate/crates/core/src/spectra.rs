//! Model-based spectra on a frequency grid, projections onto orthogonal
//! complements, positive-definiteness tests and innovation factorization.
//!
//! Every signal is written as a map `A(z)` applied to the white source
//! vector `s = (r̃, e)`, where `r = F r̃` for a coloring filter `F`. Spectra are
//! `A Σ A^*` with `Σ = diag(var(r̃), Λ)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::model::{Network, PredictorModel};
use crate::sets::Source;
use crate::ss::{realize, StateSpace};

pub type CMat = DMatrix<Complex64>;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const ISOLATED_ALLOWANCE: usize = 2;
const SINGULAR_TOL: f64 = 1e-12;
const RIDGE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Signal {
    Node(usize),
    Source(Source),
}

impl Signal {
    pub fn label(self, net: &Network) -> String {
        match self {
            Signal::Node(k) => net.labels[k].clone(),
            Signal::Source(s) => s.label(net),
        }
    }
}

pub fn source_count(net: &Network) -> usize {
    net.excitations.len() + net.size()
}

pub fn source_cov(net: &Network) -> DMatrix<f64> {
    let k = net.excitations.len();
    let l = net.size();
    let mut s = DMatrix::zeros(k + l, k + l);
    for (kk, e) in net.excitations.iter().enumerate() {
        s[(kk, kk)] = e.variance.max(0.0);
    }
    s.view_mut((k, k), (l, l)).copy_from(&net.noise_cov);
    s
}

fn to_c(m: &DMatrix<f64>) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `[R F(z), H(z)]`.
pub fn input_map(net: &Network, z: Complex64) -> Result<CMat> {
    let k = net.excitations.len();
    let l = net.size();
    let mut m = CMat::zeros(l, k + l);
    for (kk, e) in net.excitations.iter().enumerate() {
        m[(e.node, kk)] = match &e.filter {
            Some(f) => f.eval(z)?,
            None => Complex64::new(1.0, 0.0),
        };
    }
    m.view_mut((0, k), (l, l)).copy_from(&net.h.eval(z)?);
    Ok(m)
}

fn inverse(m: CMat, omega: f64) -> Result<CMat> {
    let n = m.nrows();
    if n == 0 {
        return Ok(m);
    }
    let lu = m.lu();
    let det = lu.determinant().norm();
    if det < SINGULAR_TOL {
        return Err(Error::SingularAtFrequency { omega });
    }
    lu.try_inverse().ok_or(Error::SingularAtFrequency { omega })
}

fn omega_of(z: Complex64) -> f64 {
    -z.arg()
}

/// `(I − G(z))^{-1} [R F(z), H(z)]`, nodes × sources.
pub fn closed_loop_map(net: &Network, z: Complex64) -> Result<CMat> {
    let l = net.size();
    let ig = CMat::identity(l, l) - net.g.eval(z)?;
    Ok(inverse(ig, omega_of(z))? * input_map(net, z)?)
}

/// Row selecting one source signal (filtered for excitations).
pub fn source_row(net: &Network, s: Source, z: Complex64) -> Result<CMat> {
    let mut m = CMat::zeros(1, source_count(net));
    match s {
        Source::R(k) => {
            m[(0, k)] = match &net.excitations[k].filter {
                Some(f) => f.eval(z)?,
                None => Complex64::new(1.0, 0.0),
            }
        }
        Source::E(l) => m[(0, net.excitations.len() + l)] = Complex64::new(1.0, 0.0),
    }
    Ok(m)
}

pub fn signal_map(net: &Network, signals: &[Signal], z: Complex64) -> Result<CMat> {
    let cl = if signals.iter().any(|s| matches!(s, Signal::Node(_))) {
        Some(closed_loop_map(net, z)?)
    } else {
        None
    };
    let mut m = CMat::zeros(signals.len(), source_count(net));
    for (r, s) in signals.iter().enumerate() {
        match *s {
            Signal::Node(k) => m.row_mut(r).copy_from(&cl.as_ref().unwrap().row(k)),
            Signal::Source(src) => m.row_mut(r).copy_from(&source_row(net, src, z)?.row(0)),
        }
    }
    Ok(m)
}

/// `A Σ A^*`, symmetrized.
pub fn spectrum(a: &CMat, sigma: &DMatrix<f64>) -> CMat {
    let p = a * to_c(sigma) * a.adjoint();
    hermitize(p)
}

pub fn hermitize(p: CMat) -> CMat {
    let t = p.adjoint();
    (p + t).map(|x| x * 0.5)
}

fn ridge_inverse(phi: &CMat) -> (CMat, bool) {
    let n = phi.nrows();
    if n == 0 {
        return (phi.clone(), false);
    }
    if let Some(inv) = phi.clone().try_inverse() {
        if inv.iter().all(|x| x.is_finite()) && min_eig(phi) > RIDGE * trace(phi).max(f64::MIN_POSITIVE) {
            return (inv, false);
        }
    }
    let r = RIDGE * trace(phi).max(1.0);
    let reg = phi + CMat::identity(n, n).map(|x| x * r);
    (reg.try_inverse().unwrap_or_else(|| CMat::zeros(n, n)), true)
}

/// Map of `v` with its projection on `χ` removed:
/// `A_v − Φ_{vχ} Φ_χ^{-1} A_χ`. The flag reports a regularized inverse.
pub fn project_map(a_v: &CMat, a_chi: &CMat, sigma: &DMatrix<f64>) -> (CMat, bool) {
    if a_chi.nrows() == 0 {
        return (a_v.clone(), false);
    }
    let s = to_c(sigma);
    let phi_vc = a_v * &s * a_chi.adjoint();
    let phi_c = hermitize(a_chi * &s * a_chi.adjoint());
    let (inv, reg) = ridge_inverse(&phi_c);
    (a_v - phi_vc * inv * a_chi, reg)
}

/// Schur complement of the trailing `n − nv` block of a joint spectrum.
pub fn schur(phi: &CMat, nv: usize) -> (CMat, bool) {
    let n = phi.nrows();
    let nc = n - nv;
    if nc == 0 {
        return (phi.clone(), false);
    }
    let pv = phi.view((0, 0), (nv, nv)).into_owned();
    let pvc = phi.view((0, nv), (nv, nc)).into_owned();
    let pc = phi.view((nv, nv), (nc, nc)).into_owned();
    let (inv, reg) = ridge_inverse(&pc);
    (hermitize(pv - &pvc * inv * pvc.adjoint()), reg)
}

pub fn trace(p: &CMat) -> f64 {
    (0..p.nrows()).map(|k| p[(k, k)].re).sum()
}

pub fn eigenvalues(p: &CMat) -> Vec<f64> {
    if p.nrows() == 0 {
        return vec![];
    }
    let mut e: Vec<f64> = p.clone().symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    e
}

pub fn min_eig(p: &CMat) -> f64 {
    eigenvalues(p).first().copied().unwrap_or(f64::INFINITY)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdVerdict {
    pub positive_definite: bool,
    pub tol: f64,
    /// Smallest `λ_min / (trace / n)` over the grid.
    pub worst_ratio: f64,
    pub omega_at_worst: f64,
    pub offending_frequencies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    pub signals: Vec<String>,
    pub omegas: Vec<f64>,
    pub values: Vec<CMat>,
    pub min_eigs: Vec<f64>,
    pub regularized: bool,
}

impl SpectrumGrid {
    pub fn new(signals: Vec<String>, omegas: Vec<f64>, values: Vec<CMat>) -> Self {
        let values: Vec<CMat> = values.into_iter().map(hermitize).collect();
        let min_eigs = values.iter().map(min_eig).collect();
        SpectrumGrid {
            signals,
            omegas,
            values,
            min_eigs,
            regularized: false,
        }
    }

    /// Spectra of `maps(z)` applied to the sources.
    pub fn from_maps<F>(signals: Vec<String>, grid: &FrequencyGrid, sigma: &DMatrix<f64>, mut maps: F) -> Result<Self>
    where
        F: FnMut(Complex64) -> Result<CMat>,
    {
        let mut values = Vec::with_capacity(grid.len());
        for (_, z) in grid.points() {
            values.push(spectrum(&maps(z)?, sigma));
        }
        Ok(Self::new(signals, grid.omegas.clone(), values))
    }

    pub fn dim(&self) -> usize {
        self.signals.len()
    }

    /// Keeps the leading `nv` signals, projected on the orthogonal
    /// complement of the rest.
    pub fn project_out(&self, nv: usize) -> SpectrumGrid {
        let mut reg = false;
        let values = self
            .values
            .iter()
            .map(|p| {
                let (s, r) = schur(p, nv);
                reg |= r;
                s
            })
            .collect();
        let mut out = SpectrumGrid::new(self.signals[..nv].to_vec(), self.omegas.clone(), values);
        out.regularized = reg || self.regularized;
        out
    }

    /// Positive definite at every grid point except at most
    /// [`ISOLATED_ALLOWANCE`] isolated ones, relative to `trace / n`.
    pub fn pd_almost_all(&self, tol: f64) -> PdVerdict {
        let n = self.dim();
        if n == 0 {
            return PdVerdict {
                positive_definite: true,
                tol,
                worst_ratio: f64::INFINITY,
                omega_at_worst: 0.0,
                offending_frequencies: vec![],
            };
        }
        let mut bad = vec![];
        let mut worst = f64::INFINITY;
        let mut at = 0.0;
        for (k, p) in self.values.iter().enumerate() {
            let scale = trace(p) / n as f64;
            let ratio = if scale > 0.0 { self.min_eigs[k] / scale } else { 0.0 };
            if ratio < worst {
                worst = ratio;
                at = self.omegas[k];
            }
            if !(ratio >= tol) {
                bad.push(k);
            }
        }
        let isolated = bad.windows(2).all(|w| w[1] > w[0] + 1);
        let ok = bad.len() <= ISOLATED_ALLOWANCE && isolated && bad.len() < self.values.len();
        PdVerdict {
            positive_definite: ok,
            tol,
            worst_ratio: worst,
            omega_at_worst: at,
            offending_frequencies: bad.iter().map(|&k| self.omegas[k]).collect(),
        }
    }
}

pub fn signal_spectrum(net: &Network, signals: &[Signal], grid: &FrequencyGrid) -> Result<SpectrumGrid> {
    let sigma = source_cov(net);
    let labels = signals.iter().map(|s| s.label(net)).collect();
    SpectrumGrid::from_maps(labels, grid, &sigma, |z| signal_map(net, signals, z))
}

/// Steady-state innovation form `v = H̄ ξ` with `H̄(z) = I + z C (I − zA)^{-1} K`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnovationModel {
    pub a: DMatrix<f64>,
    pub k: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub cov: DMatrix<f64>,
    pub iterations: usize,
}

impl InnovationModel {
    pub fn outputs(&self) -> usize {
        self.c.nrows()
    }

    pub fn eval(&self, z: Complex64) -> CMat {
        let p = self.outputs();
        let n = self.a.nrows();
        if n == 0 {
            return CMat::identity(p, p);
        }
        let m = CMat::identity(n, n) - to_c(&self.a).map(|x| x * z);
        let inv = m.try_inverse().unwrap_or_else(|| CMat::zeros(n, n));
        CMat::identity(p, p) + to_c(&self.c) * inv * to_c(&self.k) * z
    }

    pub fn inverse_state_matrix(&self) -> DMatrix<f64> {
        &self.a - &self.k * &self.c
    }

    /// `H̄^{-1}(z) = I − z C (I − z(A − KC))^{-1} K`.
    pub fn eval_inverse(&self, z: Complex64) -> CMat {
        let p = self.outputs();
        let n = self.a.nrows();
        if n == 0 {
            return CMat::identity(p, p);
        }
        let m = CMat::identity(n, n) - to_c(&self.inverse_state_matrix()).map(|x| x * z);
        let inv = m.try_inverse().unwrap_or_else(|| CMat::zeros(n, n));
        CMat::identity(p, p) - to_c(&self.c) * inv * to_c(&self.k) * z
    }

    pub fn is_min_phase(&self) -> bool {
        crate::ss::spectral_radius(&self.inverse_state_matrix()) < 1.0 - crate::ss::STABILITY_TOL
    }
}

pub const RICCATI_MAX_ITER: usize = 10_000;
pub const RICCATI_TOL: f64 = 1e-12;

/// Innovation form of `v = (D + zC(I − zA)^{-1}B) e`, `cov(e) = Λ`, by
/// fixed-point iteration of the filtering Riccati equation.
pub fn innovation_factorization(ss: &StateSpace, lambda: &DMatrix<f64>) -> Result<InnovationModel> {
    let (a, b, c, d) = (&ss.a, &ss.b, &ss.c, &ss.d);
    let q = b * lambda * b.transpose();
    let r = d * lambda * d.transpose();
    let s = b * lambda * d.transpose();
    let n = a.nrows();
    let p_out = c.nrows();
    let mut p = q.clone();
    let mut iterations = 0;
    let mut converged = n == 0;
    while !converged && iterations < RICCATI_MAX_ITER {
        iterations += 1;
        let re = c * &p * c.transpose() + &r;
        let g = a * &p * c.transpose() + &s;
        let inv = re
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NoiseSingular("innovation covariance is singular".into()))?;
        let next = a * &p * a.transpose() + &q - &g * inv * g.transpose();
        let next = (&next + next.transpose()) * 0.5;
        let delta = (&next - &p).abs().max();
        let scale = next.abs().max().max(1.0);
        p = next;
        if !p.iter().all(|x| x.is_finite()) {
            return Err(Error::RiccatiDivergence { iterations });
        }
        if delta <= RICCATI_TOL * scale {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::RiccatiDivergence { iterations });
    }
    let cov = c * &p * c.transpose() + &r;
    let cov = (&cov + cov.transpose()) * 0.5;
    if p_out > 0 {
        let e = cov.clone().symmetric_eigenvalues();
        let max = e.max().max(f64::MIN_POSITIVE);
        if e.min() <= 1e-12 * max {
            return Err(Error::NoiseSingular("innovation covariance is singular".into()));
        }
    }
    let inv = cov.clone().try_inverse().unwrap_or_else(|| DMatrix::zeros(p_out, p_out));
    let k = (a * &p * c.transpose() + &s) * inv;
    let model = InnovationModel {
        a: a.clone(),
        k,
        c: c.clone(),
        cov,
        iterations,
    };
    if n > 0 && !model.is_min_phase() {
        return Err(Error::NoiseSingular("noise spectrum has zeros on the unit circle".into()));
    }
    Ok(model)
}

/// Noise acting on the predictor rows: row `y` is `w_y` of the network with
/// `𝒟 \ {y}` held at zero and all excitations removed.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorNoise {
    /// Positions in `𝒴` that carry noise.
    pub rows: Vec<usize>,
    pub ss: StateSpace,
}

fn free_nodes(net: &Network, pred: &PredictorModel, y: usize) -> Vec<usize> {
    let clamped = pred.clamped(net.size(), y);
    (0..net.size()).filter(|&k| !clamped[k]).collect()
}

fn row_realization(net: &Network, pred: &PredictorModel, y: usize) -> Result<StateSpace> {
    let free = free_nodes(net, pred, y);
    let all: Vec<usize> = (0..net.size()).collect();
    let g = realize(&net.g.submatrix(&free, &free))?;
    let h = realize(&net.h.submatrix(&free, &all))?;
    let (ng, nh) = (g.order(), h.order());
    let n = ng + nh;
    let nf = free.len();
    let l = net.size();
    let mut a = DMatrix::zeros(n, n);
    a.view_mut((0, 0), (ng, ng)).copy_from(&(&g.a + &g.b * &g.c));
    a.view_mut((0, ng), (ng, nh)).copy_from(&(&g.b * &h.c));
    a.view_mut((ng, ng), (nh, nh)).copy_from(&h.a);
    let mut b = DMatrix::zeros(n, l);
    b.view_mut((0, 0), (ng, l)).copy_from(&(&g.b * &h.d));
    b.view_mut((ng, 0), (nh, l)).copy_from(&h.b);
    let mut c = DMatrix::zeros(nf, n);
    c.view_mut((0, 0), (nf, ng)).copy_from(&g.c);
    c.view_mut((0, ng), (nf, nh)).copy_from(&h.c);
    let full = StateSpace { a, b, c, d: h.d.clone() };
    let pos = free.iter().position(|&k| k == y).unwrap();
    Ok(full.select_outputs(&[pos]))
}

/// Pointwise noise of predictor row `y`, 1 × L.
pub fn row_noise_map(net: &Network, pred: &PredictorModel, y: usize, z: Complex64) -> Result<CMat> {
    let free = free_nodes(net, pred, y);
    let all: Vec<usize> = (0..net.size()).collect();
    let nf = free.len();
    let ig = CMat::identity(nf, nf) - net.g.submatrix(&free, &free).eval(z)?;
    let m = inverse(ig, omega_of(z))? * net.h.submatrix(&free, &all).eval(z)?;
    let pos = free.iter().position(|&k| k == y).unwrap();
    Ok(m.rows(pos, 1).into_owned())
}

pub fn predictor_noise(net: &Network, pred: &PredictorModel) -> Result<PredictorNoise> {
    let mut rows = vec![];
    let mut parts = vec![];
    for (r, &y) in pred.y.iter().enumerate() {
        let part = row_realization(net, pred, y)?;
        let carries = {
            let gram = &part.b * &net.noise_cov * part.b.transpose();
            let dd = &part.d * &net.noise_cov * part.d.transpose();
            gram.abs().max() > 0.0 || dd.abs().max() > 0.0
        };
        if carries {
            rows.push(r);
            parts.push(part);
        }
    }
    let ss = if parts.is_empty() {
        StateSpace {
            a: DMatrix::zeros(0, 0),
            b: DMatrix::zeros(0, net.size()),
            c: DMatrix::zeros(0, 0),
            d: DMatrix::zeros(0, net.size()),
        }
    } else {
        StateSpace::stack_outputs(&parts)
    };
    Ok(PredictorNoise { rows, ss })
}

/// Innovation signals of the predictor together with the maps producing them.
#[derive(Debug, Clone)]
pub struct PredictorInnovation {
    pub noise: PredictorNoise,
    pub model: InnovationModel,
}

impl PredictorInnovation {
    pub fn new(net: &Network, pred: &PredictorModel) -> Result<Self> {
        let noise = predictor_noise(net, pred)?;
        let model = innovation_factorization(&noise.ss, &net.noise_cov)?;
        Ok(PredictorInnovation { noise, model })
    }

    /// Maps of `ξ` components at the given positions of `𝒴` (must carry
    /// noise), padded to all sources.
    pub fn map(&self, net: &Network, pred: &PredictorModel, positions: &[usize], z: Complex64) -> Result<CMat> {
        let k = net.excitations.len();
        let l = net.size();
        let nr = self.noise.rows.len();
        let mut nz = CMat::zeros(nr, l);
        for (a, &r) in self.noise.rows.iter().enumerate() {
            nz.row_mut(a).copy_from(&row_noise_map(net, pred, pred.y[r], z)?.row(0));
        }
        let xi = self.model.eval_inverse(z) * nz;
        let mut out = CMat::zeros(positions.len(), k + l);
        for (a, &p) in positions.iter().enumerate() {
            let idx = self
                .noise
                .rows
                .iter()
                .position(|&r| r == p)
                .ok_or_else(|| Error::Invalid("innovation requested for a noise-free output".into()))?;
            out.view_mut((a, k), (1, l)).copy_from(&xi.row(idx));
        }
        Ok(out)
    }
}
