//! Sample-by-sample simulation of `w = G w + H e + R r`.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Network;
use crate::tf::RationalTF;

pub const BLOWUP: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub seed: u64,
    pub burn_in: usize,
    pub store_noise: bool,
}

impl SimConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        SimConfig {
            n,
            seed,
            burn_in: 500,
            store_noise: false,
        }
    }
}

/// Series indexed `[signal][t]`. `r` holds the white excitation sequences
/// before any excitation filter, which is the signal `T̄` acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct DataRecord {
    pub w: Vec<Vec<f64>>,
    pub r: Vec<Vec<f64>>,
    pub e: Option<Vec<Vec<f64>>>,
}

impl DataRecord {
    pub fn len(&self) -> usize {
        self.w.first().map(|s| s.len()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// First `n` samples.
    pub fn prefix(&self, n: usize) -> DataRecord {
        let cut = |v: &Vec<Vec<f64>>| v.iter().map(|s| s[..n.min(s.len())].to_vec()).collect();
        DataRecord {
            w: cut(&self.w),
            r: cut(&self.r),
            e: self.e.as_ref().map(cut),
        }
    }
}

/// Direct-form II transposed filter.
#[derive(Debug, Clone)]
pub struct Filter {
    b: Vec<f64>,
    a: Vec<f64>,
    s: Vec<f64>,
}

impl Filter {
    pub fn new(tf: &RationalTF) -> Self {
        let n = tf.num.coeffs().len().max(tf.den.coeffs().len());
        let mut b = tf.num.coeffs().to_vec();
        let mut a = tf.den.coeffs().to_vec();
        b.resize(n, 0.0);
        a.resize(n, 0.0);
        Filter {
            b,
            a,
            s: vec![0.0; n.saturating_sub(1)],
        }
    }

    /// Output contribution that does not depend on the current input.
    pub fn peek(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }

    pub fn step(&mut self, x: f64) -> f64 {
        let y = self.b[0] * x + self.peek();
        let n = self.s.len();
        for k in 0..n {
            let next = if k + 1 < n { self.s[k + 1] } else { 0.0 };
            self.s[k] = next + self.b[k + 1] * x - self.a[k + 1] * y;
        }
        y
    }
}

/// Filters `x` through `tf` from zero initial conditions.
pub fn lfilter(tf: &RationalTF, x: &[f64]) -> Vec<f64> {
    let mut f = Filter::new(tf);
    x.iter().map(|&v| f.step(v)).collect()
}

fn noise_factor(lambda: &DMatrix<f64>) -> DMatrix<f64> {
    let n = lambda.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let sym = (lambda + lambda.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut d = DMatrix::zeros(n, n);
    for k in 0..n {
        d[(k, k)] = eig.eigenvalues[k].max(0.0).sqrt();
    }
    &eig.eigenvectors * d
}

pub fn simulate(net: &Network, cfg: &SimConfig) -> Result<DataRecord> {
    let l = net.size();
    let kx = net.excitations.len();
    if net.g.nonzeros().any(|(_, _, t)| !t.strictly_proper()) {
        return Err(Error::NotProper("simulation needs strictly proper modules".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let lf = noise_factor(&net.noise_cov);
    let mut gf: Vec<(usize, usize, Filter)> = net.g.nonzeros().map(|(r, c, t)| (r, c, Filter::new(t))).collect();
    let mut hf: Vec<(usize, usize, Filter)> = net.h.nonzeros().map(|(r, c, t)| (r, c, Filter::new(t))).collect();
    let mut rf: Vec<Option<Filter>> = net.excitations.iter().map(|e| e.filter.as_ref().map(Filter::new)).collect();
    let sd: Vec<f64> = net.excitations.iter().map(|e| e.variance.max(0.0).sqrt()).collect();
    let total = cfg.n + cfg.burn_in;
    let mut w_out = vec![Vec::with_capacity(cfg.n); l];
    let mut r_out = vec![Vec::with_capacity(cfg.n); kx];
    let mut e_out = if cfg.store_noise { Some(vec![Vec::with_capacity(cfg.n); l]) } else { None };
    let mut z = vec![0.0; l];
    let mut e = vec![0.0; l];
    let mut r = vec![0.0; kx];
    let mut rw = vec![0.0; kx];
    let mut w = vec![0.0; l];
    for t in 0..total {
        for v in z.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        for (a, ea) in e.iter_mut().enumerate() {
            *ea = (0..l).map(|b| lf[(a, b)] * z[b]).sum();
        }
        for k in 0..kx {
            let x: f64 = StandardNormal.sample(&mut rng);
            let x = x * sd[k];
            rw[k] = x;
            r[k] = match rf[k].as_mut() {
                Some(f) => f.step(x),
                None => x,
            };
        }
        w.iter_mut().for_each(|v| *v = 0.0);
        for (row, col, f) in hf.iter_mut() {
            w[*row] += f.step(e[*col]);
        }
        for (k, ex) in net.excitations.iter().enumerate() {
            w[ex.node] += r[k];
        }
        for (row, _, f) in gf.iter() {
            w[*row] += f.peek();
        }
        for (_, col, f) in gf.iter_mut() {
            f.step(w[*col]);
        }
        if w.iter().any(|v| !v.is_finite() || v.abs() > BLOWUP) {
            return Err(Error::NumericalBlowup { sample: t });
        }
        if t >= cfg.burn_in {
            for a in 0..l {
                w_out[a].push(w[a]);
            }
            for k in 0..kx {
                r_out[k].push(rw[k]);
            }
            if let Some(eo) = e_out.as_mut() {
                for a in 0..l {
                    eo[a].push(e[a]);
                }
            }
        }
    }
    Ok(DataRecord {
        w: w_out,
        r: r_out,
        e: e_out,
    })
}
