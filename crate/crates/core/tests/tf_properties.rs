mod common;

use common::*;
use netinform::model::doc::{self, Document};
use netinform::model::PredictorModel;
use netinform::tf::{Poly, RationalTF};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn horner(c: &[f64], z: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &x| acc * z + x)
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-2.0f64..2.0, 1..=n)
}

/// Monic denominator with roots inside a disc of radius 0.8.
fn stable_den() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec((-0.8f64..0.8, 0.0f64..0.8), 0..=2).prop_map(|roots| {
        let mut d = Poly::one();
        for (re, im) in roots {
            // (1 - p z)(1 - p* z) = 1 - 2 Re p z + |p|^2 z^2
            let m2 = re * re + im * im;
            let m = if m2 > 0.64 { 0.64 / m2 } else { 1.0 };
            d = d.mul(&Poly::new(vec![1.0, -2.0 * re * m.sqrt(), m2 * m]));
        }
        d.coeffs().to_vec()
    })
}

fn tf() -> impl Strategy<Value = RationalTF> {
    (coeffs(4), stable_den()).prop_map(|(n, d)| RationalTF::from_coeffs(&n, &d).unwrap())
}

fn unit_point() -> impl Strategy<Value = C64> {
    (0.0f64..std::f64::consts::TAU).prop_map(|w| C64::from_polar(1.0, -w))
}

proptest! {
    #[test]
    fn eval_matches_horner(t in tf(), z in unit_point()) {
        let want = horner(t.num.coeffs(), z) / horner(t.den.coeffs(), z);
        prop_assert!((t.eval(z).unwrap() - want).norm() < 1e-12 * want.norm().max(1.0));
    }

    #[test]
    fn sum_is_pointwise(a in tf(), b in tf(), z in unit_point()) {
        let s = a.add(&b).unwrap().eval(z).unwrap();
        let want = a.eval(z).unwrap() + b.eval(z).unwrap();
        prop_assert!((s - want).norm() < 1e-12 * want.norm().max(1.0));
    }

    #[test]
    fn product_is_pointwise(a in tf(), b in tf(), z in unit_point()) {
        let p = a.mul(&b).unwrap().eval(z).unwrap();
        let want = a.eval(z).unwrap() * b.eval(z).unwrap();
        prop_assert!((p - want).norm() < 1e-11 * want.norm().max(1.0));
    }

    #[test]
    fn difference_with_self_vanishes(a in tf(), z in unit_point()) {
        prop_assert!(a.sub(&a).unwrap().eval(z).unwrap().norm() < 1e-12);
    }

    #[test]
    fn strict_properness_follows_leading_coefficient(n in coeffs(4), d in stable_den()) {
        let t = RationalTF::from_coeffs(&n, &d).unwrap();
        prop_assert_eq!(t.strictly_proper(), n[0] == 0.0);
        prop_assert_eq!(t.direct_term(), n[0]);
    }
}

#[test]
fn documents_round_trip() {
    let mut r = rng(31);
    for _ in 0..50 {
        use rand::Rng;
        let l = r.random_range(2..=7);
        let net = random_network(&mut r, l, 0.4, 0.6, 0.4);
        let (j, i) = match net.g.nonzeros().next() {
            Some((row, col, _)) => (row, col),
            None => continue,
        };
        let pred = PredictorModel::new(vec![i], vec![j], j, i);
        let d = Document {
            network: net,
            predictor: Some(pred),
        };
        let text = doc::to_string_pretty(&d);
        let back = doc::parse_str(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(doc::to_string_pretty(&back), text);
    }
    for name in ["five_node.json", "six_node.json", "two_node.json"] {
        let d = doc::load(&example_path(name)).unwrap();
        assert_eq!(doc::parse_value(&doc::to_value(&d)).unwrap(), d);
    }
}
