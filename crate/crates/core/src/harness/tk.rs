//! Prediction-error maps of the four-input open-loop example against their
//! closed forms.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::model::Network;
use crate::spectra::closed_loop_map;
use crate::tf::RationalTF;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TkReport {
    pub points: usize,
    /// `max_ω |T_k − T_k^closed|` for k = 1..4.
    pub residual: [f64; 4],
    pub max_residual: f64,
    /// `max_ω |T_k|`.
    pub magnitude: [f64; 4],
}

/// `T_k` at one frequency from the module values `G_21, G_23, G_32, G_34`
/// and the four `ΔG_{jk}`.
pub fn closed_form(g21: C64, g23: C64, g32: C64, g34: C64, d: [C64; 4]) -> [C64; 4] {
    let delta = 1.0 - g32 * g23;
    [
        d[0] + d[1] * g21 / delta + d[2] * g32 * g21 / delta,
        d[1] / delta + d[2] * g32 / delta,
        d[1] * g23 / delta + d[2] / delta,
        d[1] * g23 * g34 / delta + d[2] * g34 / delta + d[3],
    ]
}

/// `ε − e = Σ ΔG_{jk} u_k = Σ T_k x_k`, with `u` from the closed-loop map of
/// `net` (nodes `u1..u4`, excitations `x1..x4`).
pub fn tk_closed_form_check(net: &Network, deltas: &[RationalTF; 4], grid: &FrequencyGrid) -> Result<TkReport> {
    let u: Vec<usize> = (1..=4)
        .map(|k| net.node_or_err(&format!("u{k}")))
        .collect::<Result<_>>()?;
    let x: Vec<usize> = (1..=4)
        .map(|k| {
            net.excitation(&format!("x{k}"))
                .ok_or_else(|| Error::Invalid(format!("excitation x{k} missing")))
        })
        .collect::<Result<_>>()?;
    let mut report = TkReport {
        points: grid.len(),
        residual: [0.0; 4],
        max_residual: 0.0,
        magnitude: [0.0; 4],
    };
    for (_, z) in grid.points() {
        let cl = closed_loop_map(net, z)?;
        let d: Vec<_> = deltas.iter().map(|t| t.eval(z)).collect::<Result<_>>()?;
        let g = |to: usize, from: usize| net.module(u[from], u[to]).eval(z);
        let closed = closed_form(g(1, 0)?, g(1, 2)?, g(2, 1)?, g(2, 3)?, [d[0], d[1], d[2], d[3]]);
        for k in 0..4 {
            let t: C64 = (0..4).map(|m| d[m] * cl[(u[m], x[k])]).sum();
            report.residual[k] = report.residual[k].max((t - closed[k]).norm());
            report.magnitude[k] = report.magnitude[k].max(t.norm());
        }
    }
    report.max_residual = report.residual.iter().copied().fold(0.0, f64::max);
    Ok(report)
}
