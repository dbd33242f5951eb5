//! Closed-loop maps evaluated entry by entry.

use netinform::model::Network;
use netinform::spectra::CMat;
use netinform::tf::RationalTF;
use num_complex::Complex64 as C64;

pub fn horner(c: &[f64], z: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &x| acc * z + x)
}

pub fn eval(tf: &RationalTF, z: C64) -> C64 {
    horner(tf.num.coeffs(), z) / horner(tf.den.coeffs(), z)
}

/// `(I − G)^{-1} [R, H]` assembled entry by entry.
pub fn full_closed_loop(net: &Network, z: C64) -> CMat {
    let l = net.size();
    let k = net.excitations.len();
    let g = CMat::from_fn(l, l, |r, c| eval(net.g.get(r, c), z));
    let mut b = CMat::zeros(l, k + l);
    for (kk, e) in net.excitations.iter().enumerate() {
        b[(e.node, kk)] = C64::new(1.0, 0.0);
    }
    for r in 0..l {
        for c in 0..l {
            b[(r, k + c)] = eval(net.h.get(r, c), z);
        }
    }
    (CMat::identity(l, l) - g).try_inverse().unwrap() * b
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}
