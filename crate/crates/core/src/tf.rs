//! Polynomials and rational transfer functions in the backward shift.
//!
//! Coefficient `k` multiplies `q^{-k}`. Frequency responses are taken at
//! `z = e^{-iω}`, so evaluating a polynomial is plain Horner in `z`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_DEGREE_CAP: usize = 64;
const POLE_TOL: f64 = 1e-12;

/// Real polynomial in the unit delay. Never empty; the zero polynomial is `[0.0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl From<Vec<f64>> for Poly {
    fn from(v: Vec<f64>) -> Self {
        Poly::new(v)
    }
}

impl From<Poly> for Vec<f64> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![0.0] }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1.0] }
    }

    /// `c q^{-k}`
    pub fn monomial(c: f64, k: usize) -> Self {
        let mut v = vec![0.0; k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn constant(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + other.coeffs.get(k).unwrap_or(&0.0))
            .collect();
        Poly::new(v)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut v = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

/// Model orders of a parametrized entry: `B(q)/F(q)` with `nb` numerator
/// coefficients starting at delay `nk`, and `nf` denominator coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orders {
    pub nb: usize,
    pub nf: usize,
    pub nk: usize,
}

impl Orders {
    pub fn fir(nb: usize, nk: usize) -> Self {
        Orders { nb, nf: 0, nk }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    StructuralZero,
    Known,
    Parametrized { orders: Option<Orders> },
}

impl Status {
    pub fn parametrized() -> Self {
        Status::Parametrized { orders: None }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Status::StructuralZero)
    }

    pub fn is_parametrized(&self) -> bool {
        matches!(self, Status::Parametrized { .. })
    }

    fn combine(a: Status, b: Status) -> Status {
        match (a, b) {
            (Status::Parametrized { .. }, _) | (_, Status::Parametrized { .. }) => {
                Status::parametrized()
            }
            _ => Status::Known,
        }
    }
}

/// Scalar rational transfer function `num(q^{-1}) / den(q^{-1})` with
/// `den[0] = 1` after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalTF {
    pub num: Poly,
    pub den: Poly,
    pub status: Status,
}

impl RationalTF {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        Self::with_status(num, den, Status::Known)
    }

    pub fn with_status(num: Poly, den: Poly, status: Status) -> Result<Self> {
        let d0 = den.constant();
        if d0 == 0.0 || !d0.is_finite() {
            return Err(Error::NotProper(
                "denominator constant term must be nonzero".into(),
            ));
        }
        let (num, den) = if d0 == 1.0 {
            (num, den)
        } else {
            (num.scale(1.0 / d0), den.scale(1.0 / d0))
        };
        if status.is_zero() && !num.is_zero() {
            return Err(Error::Invalid(
                "structural zero with nonzero numerator".into(),
            ));
        }
        let status = if num.is_zero() && !status.is_parametrized() {
            Status::StructuralZero
        } else {
            status
        };
        Ok(RationalTF { num, den, status })
    }

    pub fn from_coeffs(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(Poly::new(num.to_vec()), Poly::new(den.to_vec()))
    }

    pub fn zero() -> Self {
        RationalTF {
            num: Poly::zero(),
            den: Poly::one(),
            status: Status::StructuralZero,
        }
    }

    pub fn one() -> Self {
        Self::gain(1.0)
    }

    pub fn gain(g: f64) -> Self {
        if g == 0.0 {
            return Self::zero();
        }
        RationalTF {
            num: Poly::new(vec![g]),
            den: Poly::one(),
            status: Status::Known,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.status.is_zero()
    }

    pub fn strictly_proper(&self) -> bool {
        self.num.constant() == 0.0
    }

    pub fn direct_term(&self) -> f64 {
        self.num.constant()
    }

    pub fn set_status(mut self, status: Status) -> Self {
        if !self.is_zero() || status.is_parametrized() {
            self.status = status;
        }
        self
    }

    /// Frequency response at `z` (backward-shift convention `z = e^{-iω}`).
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if self.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let d = self.den.eval(z);
        if d.norm() < POLE_TOL {
            return Err(Error::PoleOnGrid { z_re: z.re, z_im: z.im });
        }
        Ok(self.num.eval(z) / d)
    }

    pub fn eval_at(&self, omega: f64) -> Result<Complex64> {
        self.eval(Complex64::from_polar(1.0, -omega))
    }

    fn check_cap(num: &Poly, den: &Poly, cap: usize) -> Result<()> {
        let d = num.degree().max(den.degree());
        if d > cap {
            Err(Error::DegreeOverflow { degree: d, cap })
        } else {
            Ok(())
        }
    }

    pub fn add_capped(&self, other: &RationalTF, cap: usize) -> Result<RationalTF> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let (num, den) = if self.den == other.den {
            (self.num.add(&other.num), self.den.clone())
        } else {
            (
                self.num.mul(&other.den).add(&other.num.mul(&self.den)),
                self.den.mul(&other.den),
            )
        };
        Self::check_cap(&num, &den, cap)?;
        let status = Status::combine(self.status, other.status);
        RationalTF::with_status(num, den, status)
    }

    pub fn mul_capped(&self, other: &RationalTF, cap: usize) -> Result<RationalTF> {
        if self.is_zero() || other.is_zero() {
            return Ok(RationalTF::zero());
        }
        let num = self.num.mul(&other.num);
        let den = self.den.mul(&other.den);
        Self::check_cap(&num, &den, cap)?;
        RationalTF::with_status(num, den, Status::combine(self.status, other.status))
    }

    pub fn neg(&self) -> RationalTF {
        RationalTF {
            num: self.num.neg(),
            den: self.den.clone(),
            status: self.status,
        }
    }

    pub fn add(&self, other: &RationalTF) -> Result<RationalTF> {
        self.add_capped(other, DEFAULT_DEGREE_CAP)
    }

    pub fn sub(&self, other: &RationalTF) -> Result<RationalTF> {
        self.add_capped(&other.neg(), DEFAULT_DEGREE_CAP)
    }

    pub fn mul(&self, other: &RationalTF) -> Result<RationalTF> {
        self.mul_capped(other, DEFAULT_DEGREE_CAP)
    }
}

/// Dense matrix of rational entries, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RationalTF>,
}

impl TfMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        TfMatrix {
            rows,
            cols,
            entries: vec![RationalTF::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, RationalTF::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &RationalTF {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, tf: RationalTF) {
        self.entries[r * self.cols + c] = tf;
    }

    /// Nonzero entries as `(row, col, tf)`.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &RationalTF)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.is_zero())
            .map(move |(k, t)| (k / self.cols, k % self.cols, t))
    }

    pub fn is_hollow(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|k| self.get(k, k).is_zero())
    }

    pub fn is_monic(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        (0..self.rows).all(|r| {
            (0..self.cols).all(|c| {
                let t = self.get(r, c);
                if r == c {
                    !t.is_zero() && t.direct_term() == 1.0
                } else {
                    t.strictly_proper()
                }
            })
        })
    }

    pub fn eval(&self, z: Complex64) -> Result<DMatrix<Complex64>> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (r, c, t) in self.nonzeros() {
            m[(r, c)] = t.eval(z)?;
        }
        Ok(m)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> TfMatrix {
        let mut m = TfMatrix::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                m.set(a, b, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn max_degree(&self) -> usize {
        self.entries
            .iter()
            .map(|t| t.num.degree().max(t.den.degree()))
            .max()
            .unwrap_or(0)
    }
}
