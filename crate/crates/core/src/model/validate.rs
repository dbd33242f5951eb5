use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::model::network::Network;
use crate::ss::{realize, spectral_radius, StateSpace, STABILITY_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub check: String,
    pub passed: bool,
    pub location: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| !f.passed)
    }

    pub fn failed(&self, check: &str) -> bool {
        self.findings.iter().any(|f| f.check == check && !f.passed)
    }
}

/// State matrix of `w = G w + ...` closed over a strictly proper `G`.
pub fn closed_loop_state_matrix(net: &Network) -> DMatrix<f64> {
    let sg = realize(&net.g).expect("entries are proper");
    &sg.a + &sg.b * &sg.c
}

/// Realization of `H^{-1}` for a monic `H`.
pub fn inverse_noise_state_matrix(h: &StateSpace) -> DMatrix<f64> {
    &h.a - &h.b * &h.c
}

pub fn validate(net: &Network) -> ValidationReport {
    let mut f = vec![];
    let l = net.size();
    let lab = |r: usize, c: usize| format!("[{},{}]", net.labels[r], net.labels[c]);
    let mut push = |check: &str, passed: bool, location: Option<String>, message: String| {
        f.push(Finding {
            check: check.into(),
            passed,
            location,
            message,
        })
    };

    let mut ok = true;
    for k in 0..l {
        if !net.g.get(k, k).is_zero() {
            ok = false;
            push("hollow", false, Some(format!("G{}", lab(k, k))), "diagonal module must be zero".into());
        }
    }
    if ok {
        push("hollow", true, None, "G has zero diagonal".into());
    }

    let mut ok = true;
    for (r, c, t) in net.g.nonzeros() {
        if !t.strictly_proper() {
            ok = false;
            push("strictly_proper", false, Some(format!("G{}", lab(r, c))), "module has a direct term".into());
        }
    }
    if ok {
        push("strictly_proper", true, None, "every module is strictly proper".into());
    }

    let monic = net.h.is_monic();
    push(
        "noise_monic",
        monic,
        None,
        if monic { "H is monic".into() } else { "H must have unit direct diagonal and strictly proper off-diagonal entries".into() },
    );

    let sh = realize(&net.h).expect("entries are proper");
    let rho_h = sh.spectral_radius();
    push("noise_stable", rho_h < 1.0 - STABILITY_TOL, None, format!("spectral radius of H realization {rho_h:.6}"));
    if monic {
        let rho_i = spectral_radius(&inverse_noise_state_matrix(&sh));
        push(
            "noise_stably_invertible",
            rho_i < 1.0 - STABILITY_TOL,
            None,
            format!("spectral radius of H^-1 realization {rho_i:.6}"),
        );
    }

    // det(I - G) at q^{-1} = 0
    let mut g0 = DMatrix::<f64>::identity(l, l);
    for (r, c, t) in net.g.nonzeros() {
        g0[(r, c)] -= t.direct_term();
    }
    let det = g0.determinant();
    push("well_posed", det.abs() > 1e-12, None, format!("det(I - G) direct term {det:.6}"));

    if l > 0 {
        let rho = spectral_radius(&closed_loop_state_matrix(net));
        push("stable", rho < 1.0 - STABILITY_TOL, None, format!("closed-loop spectral radius {rho:.6}"));
    } else {
        push("stable", true, None, "empty network".into());
    }

    let mut ok = true;
    for e in &net.excitations {
        if e.node >= l || !(e.variance >= 0.0) {
            ok = false;
            push("excitations", false, Some(e.label.clone()), "excitation node or variance invalid".into());
        }
        if let Some(flt) = &e.filter {
            let mut m = crate::tf::TfMatrix::zeros(1, 1);
            m.set(0, 0, flt.clone());
            if !realize(&m).map(|s| s.is_stable()).unwrap_or(false) {
                ok = false;
                push("excitations", false, Some(e.label.clone()), "excitation filter unstable".into());
            }
        }
    }
    if ok {
        push("excitations", true, None, "R is binary and filters are stable".into());
    }

    let cov = &net.noise_cov;
    let sym = (0..l).all(|r| (0..l).all(|c| (cov[(r, c)] - cov[(c, r)]).abs() <= 1e-12 * (1.0 + cov[(r, c)].abs())));
    let psd = sym && {
        let e = SymmetricEigen::new(cov.clone());
        let scale = e.eigenvalues.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        e.eigenvalues.iter().all(|&x| x >= -1e-10 * scale)
    };
    push("noise_cov", psd, None, if psd { "covariance symmetric PSD".into() } else { "covariance must be symmetric PSD".into() });

    let passed = f.iter().all(|x| x.passed);
    ValidationReport { passed, findings: f }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tf::RationalTF;

    #[test]
    fn unstable_module_fails() {
        let mut n = Network::with_nodes(2);
        n.set_module(0, 1, RationalTF::from_coeffs(&[0.0, 1.0], &[1.0, -1.05]).unwrap());
        let r = validate(&n);
        assert!(r.failed("stable"));
        assert!(!r.failed("hollow"));
    }

    #[test]
    fn self_loop_fails_hollow() {
        let mut n = Network::with_nodes(2);
        n.set_module(0, 0, RationalTF::from_coeffs(&[0.0, 0.2], &[1.0]).unwrap());
        assert!(validate(&n).failed("hollow"));
    }
}
