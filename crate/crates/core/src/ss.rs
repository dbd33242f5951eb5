//! Discrete-time state-space realizations.
//!
//! `x(t+1) = A x(t) + B u(t)`, `y(t) = C x(t) + D u(t)`; the transfer
//! function in the backward shift is `D + z C (I - zA)^{-1} B`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tf::{RationalTF, TfMatrix};

pub const STABILITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
}

pub fn spectral_radius(a: &DMatrix<f64>) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    a.complex_eigenvalues()
        .iter()
        .map(|l| l.norm())
        .fold(0.0, f64::max)
}

/// Observable-canonical realization of a scalar entry: `(A, B, C, d)`.
pub fn realize_siso(tf: &RationalTF) -> (DMatrix<f64>, DVector<f64>, DVector<f64>, f64) {
    let d0 = tf.num.constant();
    // num = d0 * den + rem, rem[0] = 0
    let den = tf.den.coeffs();
    let num = tf.num.coeffs();
    let n = den.len().max(num.len()) - 1;
    let mut a = DMatrix::zeros(n, n);
    let mut b = DVector::zeros(n);
    let mut c = DVector::zeros(n);
    if n > 0 {
        c[0] = 1.0;
    }
    for k in 1..=n {
        let ak = den.get(k).copied().unwrap_or(0.0);
        let nk = num.get(k).copied().unwrap_or(0.0);
        a[(k - 1, 0)] = -ak;
        if k < n {
            a[(k - 1, k)] = 1.0;
        }
        b[k - 1] = nk - d0 * ak;
    }
    (a, b, c, d0)
}

impl StateSpace {
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.d.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.d.nrows()
    }

    pub fn spectral_radius(&self) -> f64 {
        spectral_radius(&self.a)
    }

    pub fn is_stable(&self) -> bool {
        self.spectral_radius() < 1.0 - STABILITY_TOL
    }

    pub fn eval(&self, z: Complex64) -> Result<DMatrix<Complex64>> {
        let n = self.order();
        let dc = self.d.map(|x| Complex64::new(x, 0.0));
        if n == 0 {
            return Ok(dc);
        }
        let ac = self.a.map(|x| Complex64::new(x, 0.0));
        let m = DMatrix::<Complex64>::identity(n, n) - ac * z;
        let bc = self.b.map(|x| Complex64::new(x, 0.0));
        let sol = m.lu().solve(&bc).ok_or(Error::SingularAtFrequency {
            omega: -z.arg(),
        })?;
        let cc = self.c.map(|x| Complex64::new(x, 0.0));
        Ok(dc + cc * sol * z)
    }

    /// Keep a subset of outputs.
    pub fn select_outputs(&self, rows: &[usize]) -> StateSpace {
        StateSpace {
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.select_rows(rows),
            d: self.d.select_rows(rows),
        }
    }

    /// Block-diagonal states, stacked outputs, shared inputs.
    pub fn stack_outputs(parts: &[StateSpace]) -> StateSpace {
        let m = parts.first().map(|p| p.inputs()).unwrap_or(0);
        let n: usize = parts.iter().map(|p| p.order()).sum();
        let p: usize = parts.iter().map(|s| s.outputs()).sum();
        let mut a = DMatrix::zeros(n, n);
        let mut b = DMatrix::zeros(n, m);
        let mut c = DMatrix::zeros(p, n);
        let mut d = DMatrix::zeros(p, m);
        let (mut xo, mut yo) = (0, 0);
        for s in parts {
            let (ns, ps) = (s.order(), s.outputs());
            a.view_mut((xo, xo), (ns, ns)).copy_from(&s.a);
            b.view_mut((xo, 0), (ns, m)).copy_from(&s.b);
            c.view_mut((yo, xo), (ps, ns)).copy_from(&s.c);
            d.view_mut((yo, 0), (ps, m)).copy_from(&s.d);
            xo += ns;
            yo += ps;
        }
        StateSpace { a, b, c, d }
    }
}

/// Realization that stacks one observable-canonical block per nonzero entry.
/// Not minimal, but exact.
pub fn realize(m: &TfMatrix) -> Result<StateSpace> {
    let blocks: Vec<_> = m
        .nonzeros()
        .map(|(r, c, t)| (r, c, realize_siso(t)))
        .collect();
    let n: usize = blocks.iter().map(|(_, _, b)| b.0.nrows()).sum();
    let mut a = DMatrix::zeros(n, n);
    let mut bm = DMatrix::zeros(n, m.cols());
    let mut cm = DMatrix::zeros(m.rows(), n);
    let mut d = DMatrix::zeros(m.rows(), m.cols());
    let mut off = 0;
    for (r, c, (ab, bb, cb, db)) in blocks {
        let k = ab.nrows();
        a.view_mut((off, off), (k, k)).copy_from(&ab);
        bm.view_mut((off, c), (k, 1)).copy_from(&bb);
        cm.view_mut((r, off), (1, k)).copy_from(&cb.transpose());
        d[(r, c)] += db;
        off += k;
    }
    Ok(StateSpace { a, b: bm, c: cm, d })
}
