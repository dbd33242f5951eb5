//! Pointwise elimination of node signals and the decomposition
//! `w_T = T_s w_𝒟c + R_s x_T*`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::model::Network;
use crate::sets::{present_sources, Sets, Source};
use crate::spectra::{input_map, source_count, CMat};

pub const STRUCTURAL_TOL: f64 = 1e-8;
pub const ILL_CONDITIONED: f64 = 1e10;

/// Reduced network on the retained nodes at one frequency:
/// `w_ret = T w_ret + X s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Immersed {
    pub t: CMat,
    pub x: CMat,
    pub condition: f64,
}

fn condition_number(m: &CMat) -> f64 {
    if m.nrows() == 0 {
        return 1.0;
    }
    let sv = m.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Eliminates `remove` from `w = G w + [R F, H] s` at `z`.
pub fn immerse_at(net: &Network, remove: &[usize], z: Complex64) -> Result<Immersed> {
    let l = net.size();
    let ret: Vec<usize> = (0..l).filter(|k| !remove.contains(k)).collect();
    let g = net.g.eval(z)?;
    let b = input_map(net, z)?;
    let nf = remove.len();
    let sel = |m: &CMat, rows: &[usize], cols: &[usize]| m.select_rows(rows).select_columns(cols);
    let all_src: Vec<usize> = (0..source_count(net)).collect();
    let g_rr = sel(&g, &ret, &ret);
    let b_r = b.select_rows(&ret);
    if nf == 0 {
        return Ok(Immersed {
            t: g_rr,
            x: b_r,
            condition: 1.0,
        });
    }
    let g_rf = sel(&g, &ret, remove);
    let g_fr = sel(&g, remove, &ret);
    let g_ff = sel(&g, remove, remove);
    let b_f = b.select_rows(remove).select_columns(&all_src);
    let m = CMat::identity(nf, nf) - g_ff;
    let condition = condition_number(&m);
    let inv = m.try_inverse().ok_or(Error::SingularAtFrequency { omega: -z.arg() })?;
    if !condition.is_finite() {
        return Err(Error::SingularAtFrequency { omega: -z.arg() });
    }
    Ok(Immersed {
        t: g_rr + &g_rf * &inv * g_fr,
        x: b_r + g_rf * inv * b_f,
        condition,
    })
}

/// Frequency responses of the immersed network on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ImmersionResult {
    pub retained: Vec<usize>,
    pub omegas: Vec<f64>,
    pub t_values: Vec<CMat>,
    pub x_values: Vec<CMat>,
    pub max_condition: f64,
}

impl ImmersionResult {
    pub fn ill_conditioned(&self) -> bool {
        self.max_condition > ILL_CONDITIONED
    }

    /// `(I − T)^{-1} X`: retained nodes as functions of the sources.
    pub fn closed_loop(&self, k: usize) -> Result<CMat> {
        let n = self.retained.len();
        let m = CMat::identity(n, n) - &self.t_values[k];
        let inv = m.try_inverse().ok_or(Error::SingularAtFrequency { omega: self.omegas[k] })?;
        Ok(inv * &self.x_values[k])
    }
}

pub fn immerse(net: &Network, remove: &[usize], grid: &FrequencyGrid) -> Result<ImmersionResult> {
    let l = net.size();
    let retained: Vec<usize> = (0..l).filter(|k| !remove.contains(k)).collect();
    let mut t_values = vec![];
    let mut x_values = vec![];
    let mut max_condition: f64 = 1.0;
    for (_, z) in grid.points() {
        let im = immerse_at(net, remove, z)?;
        max_condition = max_condition.max(im.condition);
        t_values.push(im.t);
        x_values.push(im.x);
    }
    Ok(ImmersionResult {
        retained,
        omegas: grid.omegas.clone(),
        t_values,
        x_values,
        max_condition,
    })
}

/// `T_s`, `R_s` per grid point, with the size of the block that must vanish.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub w_t: Vec<usize>,
    pub dc: Vec<usize>,
    pub x_tstar: Vec<Source>,
    pub omegas: Vec<f64>,
    #[serde(skip)]
    pub t_s: Vec<CMat>,
    #[serde(skip)]
    pub r_s: Vec<CMat>,
    /// `max |T̃_31|` over the grid.
    pub zero_block_max: f64,
    /// Present source columns outside `x_T*` that reach `w_T` numerically.
    pub stray_source_max: f64,
}

fn source_col(net: &Network, s: Source) -> usize {
    match s {
        Source::R(k) => k,
        Source::E(l) => net.excitations.len() + l,
    }
}

/// Keeps `w_i`, `w_𝒟c` and `w_T`, eliminates every other node, and solves
/// the `w_T` rows for `T_s` and `R_s`.
pub fn decompose_ts_rs(net: &Network, sets: &Sets, grid: &FrequencyGrid) -> Result<Decomposition> {
    let mut out = Decomposition {
        w_t: sets.w_t.clone(),
        dc: sets.dc.clone(),
        x_tstar: sets.x_tstar.clone(),
        omegas: grid.omegas.clone(),
        t_s: vec![],
        r_s: vec![],
        zero_block_max: 0.0,
        stray_source_max: 0.0,
    };
    if sets.w_t.is_empty() {
        return Ok(out);
    }
    let mut keep = vec![sets.i];
    keep.extend(&sets.dc);
    keep.extend(&sets.w_t);
    let remove: Vec<usize> = (0..net.size()).filter(|k| !keep.contains(k)).collect();
    let ret: Vec<usize> = (0..net.size()).filter(|k| !remove.contains(k)).collect();
    let pos = |k: usize| ret.iter().position(|&r| r == k).unwrap();
    let p1 = vec![pos(sets.i)];
    let p2: Vec<usize> = sets.dc.iter().map(|&k| pos(k)).collect();
    let p3: Vec<usize> = sets.w_t.iter().map(|&k| pos(k)).collect();
    let xcols: Vec<usize> = sets.x_tstar.iter().map(|&s| source_col(net, s)).collect();
    let other: Vec<usize> = present_sources(net)
        .into_iter()
        .map(|s| source_col(net, s))
        .filter(|c| !xcols.contains(c))
        .collect();
    let nt = p3.len();
    for (k, (_, z)) in grid.points().enumerate() {
        let im = immerse_at(net, &remove, z)?;
        let t31 = im.t.select_rows(&p3).select_columns(&p1);
        let m31 = t31.iter().map(|x| x.norm()).fold(0.0, f64::max);
        out.zero_block_max = out.zero_block_max.max(m31);
        if m31 > STRUCTURAL_TOL {
            return Err(Error::StructuralViolation { max: m31 });
        }
        let t33 = im.t.select_rows(&p3).select_columns(&p3);
        let inv = (CMat::identity(nt, nt) - t33)
            .try_inverse()
            .ok_or(Error::SingularAtFrequency { omega: grid.omegas[k] })?;
        let t32 = im.t.select_rows(&p3).select_columns(&p2);
        let x3 = im.x.select_rows(&p3);
        let stray = (&inv * x3.select_columns(&other)).iter().map(|x| x.norm()).fold(0.0, f64::max);
        out.stray_source_max = out.stray_source_max.max(stray);
        out.t_s.push(&inv * t32);
        out.r_s.push(inv * x3.select_columns(&xcols));
    }
    Ok(out)
}

/// Source-column selector for `x_T*`, sources × |x_T*|.
pub fn source_selector(net: &Network, xs: &[Source]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(source_count(net), xs.len());
    for (c, &s) in xs.iter().enumerate() {
        m[(source_col(net, s), c)] = 1.0;
    }
    m
}
