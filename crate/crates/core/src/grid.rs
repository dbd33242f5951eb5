//! Frequency grids on `(0, π)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_JITTER_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub omegas: Vec<f64>,
}

impl FrequencyGrid {
    /// Points clustered logarithmically near 0 and π, with a uniform fill
    /// and a small deterministic jitter. Strictly inside `(0, π)`, sorted.
    pub fn clustered(n: usize, seed: u64) -> Self {
        use std::f64::consts::PI;
        if n == 0 {
            return FrequencyGrid { omegas: vec![] };
        }
        let quarter = n / 4;
        let uniform = n - 2 * quarter;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut omegas = Vec::with_capacity(n);
        let (lo, hi) = (1e-3f64.ln(), 0.3f64.ln());
        for k in 0..quarter {
            let t = (k as f64 + 0.5) / quarter as f64;
            let w = (lo + t * (hi - lo)).exp();
            omegas.push(w);
            omegas.push(PI - w);
        }
        for k in 0..uniform {
            omegas.push(PI * (k as f64 + 0.5) / uniform as f64);
        }
        omegas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let base = omegas.clone();
        for (k, w) in omegas.iter_mut().enumerate() {
            let prev = if k == 0 { 0.0 } else { base[k - 1] };
            let next = if k + 1 == base.len() { PI } else { base[k + 1] };
            let gap = (base[k] - prev).min(next - base[k]);
            let jitter: f64 = rng.random_range(-1.0..1.0);
            *w += 0.2 * gap * jitter;
        }
        FrequencyGrid { omegas }
    }

    pub fn default_grid() -> Self {
        Self::clustered(DEFAULT_GRID, DEFAULT_JITTER_SEED)
    }

    /// `n` equally spaced points on `[0, π]` including both ends.
    pub fn uniform_closed(n: usize) -> Self {
        use std::f64::consts::PI;
        let omegas = match n {
            0 => vec![],
            1 => vec![0.0],
            _ => (0..n).map(|k| PI * k as f64 / (n - 1) as f64).collect(),
        };
        FrequencyGrid { omegas }
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn z(&self, k: usize) -> Complex64 {
        Complex64::from_polar(1.0, -self.omegas[k])
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.omegas
            .iter()
            .map(|&w| (w, Complex64::from_polar(1.0, -w)))
    }
}
