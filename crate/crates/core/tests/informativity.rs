mod common;

use common::*;
use netinform::error::Error;
use netinform::graph::NetGraph;
use netinform::inform::{
    check_identifiability, check_network, check_openloop, compare, generic_rank_probe, Agreement, CheckOptions, Mode,
    Outcome,
};
use netinform::model::{Network, OpenLoopSystem, PredictorModel};
use netinform::tf::RationalTF;
use proptest::prelude::*;

fn tf(b: f64, a: f64) -> RationalTF {
    RationalTF::from_coeffs(&[0.0, b], &[1.0, a]).unwrap()
}

#[test]
fn two_node_probe_with_single_excitation() {
    let opts = CheckOptions::default();
    let (net, pred) = load("two_node.json");
    let net = only_sources(&net, &["u1", "e1", "e2"]);
    let p = generic_rank_probe(&net, &pred, 100, 1, &opts).unwrap();
    assert_eq!(p.generic, Some(Outcome::Satisfied));
    assert!(p.numeric_satisfied >= 98, "{p:?}");
}

#[test]
fn fixed_cut_replaces_search() {
    let (net, pred) = load("five_node.json");
    let net = only_sources(&net, &["x1", "x2", "e5"]);
    let known = pred.clone().known_g(node(&net, "y"), node(&net, "u2"), None);
    let sys = OpenLoopSystem::new(net.clone(), known).unwrap();
    let searched = check_openloop(&sys, Mode::Generic, &CheckOptions::default()).unwrap();
    assert_eq!(searched.evidence.cut, ["u2"]);
    assert!(searched.evidence.cut_primary);
    for mode in [Mode::Generic, Mode::Numeric] {
        let opts = CheckOptions {
            cut: Some(vec![node(&net, "u3")]),
            ..CheckOptions::default()
        };
        let v = check_openloop(&sys, mode, &opts).unwrap();
        assert_eq!(v.result, Outcome::Satisfied, "{mode:?}");
        assert_eq!(v.evidence.cut, ["u3"]);
        assert!(!v.evidence.cut_primary);
        assert_eq!(v.evidence.cuts_tried, 1);
    }
    // u3 alone leaves u1 -> u2 -> y when every module is parametrized
    let sys = OpenLoopSystem::new(net.clone(), pred).unwrap();
    let opts = CheckOptions {
        cut: Some(vec![node(&net, "u3")]),
        ..CheckOptions::default()
    };
    assert!(matches!(check_openloop(&sys, Mode::Generic, &opts), Err(Error::Invalid(_))));
}

#[test]
fn probe_of_unsatisfied_case_never_satisfies() {
    let opts = CheckOptions::default();
    let (net, pred) = load("five_node.json");
    let net = only_sources(&net, &["x1", "x4", "e_y"]);
    let p = generic_rank_probe(&net, &pred, 100, 2, &opts).unwrap();
    assert_eq!(p.generic, Some(Outcome::NotSatisfied));
    assert_eq!(p.numeric_satisfied, 0);
}

#[test]
fn zero_trial_probe_is_empty() {
    let (net, pred) = load("two_node.json");
    let p = generic_rank_probe(&net, &pred, 0, 0, &CheckOptions::default()).unwrap();
    assert_eq!((p.generic, p.numeric_satisfied, p.agreement), (None, 0, None));
}

#[test]
fn silent_network_is_not_informative() {
    let (net, pred) = load("six_node.json");
    let net = only_sources(&net, &[]);
    let v = check_network(&net, &pred, Mode::Generic, &CheckOptions::default()).unwrap();
    assert_eq!(v.result, Outcome::NotSatisfied);
    assert!(v.evidence.sources.is_empty() && v.evidence.paths.is_empty());
}

#[test]
fn violated_hypothesis_is_reported() {
    let (net, mut pred) = load("six_node.json");
    pred.row_independent = false;
    let r = check_network(&net, &pred, Mode::Generic, &CheckOptions::default());
    assert!(matches!(r, Err(Error::HypothesisViolation(_))));
}

/// w2 -> w1 (target), w2 -> w3 -> w1, e5 -> w5 -> {w3, w4}; outputs w1 and w4.
fn two_output_case() -> (Network, PredictorModel) {
    let mut net = Network::with_nodes(5);
    net.set_module(1, 0, tf(0.8, -0.3));
    net.set_module(2, 0, tf(0.5, 0.2));
    net.set_module(1, 2, tf(0.6, 0.0));
    net.set_module(4, 2, tf(0.7, -0.4));
    net.set_module(4, 3, tf(0.9, 0.1));
    for k in [0, 3, 4] {
        net.noise_cov[(k, k)] = 1.0;
    }
    net.set_excitation("r2", 1, 1.0);
    let pred = PredictorModel::new(vec![1, 2], vec![0, 3], 0, 1);
    (net, pred)
}

#[test]
fn multi_output_conservatism() {
    let (net, pred) = two_output_case();
    let opts = CheckOptions::default();
    let c = compare(&net, &pred, &opts).unwrap();
    assert!(!c.single_output);
    assert_eq!(c.identifiability, Outcome::Satisfied);
    assert_eq!(c.informativity, Outcome::NotSatisfied);
    assert_eq!(c.agreement, Agreement::IdentifiabilityOnly);
    assert!(c.set_difference.contains(&"e5".to_string()), "{c:?}");
}

#[test]
fn noise_free_network_reduces_to_excitations() {
    let (net, pred) = load("six_node.json");
    let opts = CheckOptions::default();
    for keep in [vec!["u5", "u3"], vec!["u5"]] {
        let mut n = net.clone();
        n.set_excitation("u3", node(&n, "w3"), 1.0);
        let n = only_sources(&n, &keep);
        let a = check_network(&n, &pred, Mode::Generic, &opts).unwrap().result;
        let b = check_identifiability(&n, &pred, &opts).unwrap().result;
        assert_eq!(a, b, "{keep:?}");
    }
}

#[test]
fn openloop_detection() {
    let (net, pred) = load("five_node.json");
    assert!(OpenLoopSystem::from_network(&net, &pred).is_some());
    let (net, pred) = load("six_node.json");
    assert!(OpenLoopSystem::from_network(&net, &pred).is_none());
}

fn seeds() -> impl Strategy<Value = (u64, usize)> {
    (any::<u64>(), 3usize..=7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adding_an_excitation_keeps_satisfied((seed, l) in seeds(), at in 0usize..7) {
        let mut r = rng(seed);
        let net = random_network(&mut r, l, 0.35, 0.4, 0.2);
        let Some((j, i, _)) = net.g.nonzeros().next() else { return Ok(()); };
        let d: Vec<usize> = (0..l).filter(|&a| !net.module(a, j).is_zero()).collect();
        let pred = PredictorModel::new(d, vec![j], j, i);
        let opts = CheckOptions::default();
        let before = check_network(&net, &pred, Mode::Generic, &opts).unwrap().result;
        let mut more = net.clone();
        more.set_excitation("extra", at % l, 1.0);
        let after = check_network(&more, &pred, Mode::Generic, &opts).unwrap().result;
        if before == Outcome::Satisfied {
            prop_assert_eq!(after, Outcome::Satisfied);
        }
    }

    #[test]
    fn witness_paths_are_valid((seed, l) in seeds()) {
        let mut r = rng(seed);
        let net = random_network(&mut r, l, 0.35, 0.5, 0.3);
        let Some((j, i, _)) = net.g.nonzeros().next() else { return Ok(()); };
        let d: Vec<usize> = (0..l).filter(|&a| !net.module(a, j).is_zero()).collect();
        let pred = PredictorModel::new(d, vec![j], j, i);
        let v = check_network(&net, &pred, Mode::Generic, &CheckOptions::default()).unwrap();
        let g = NetGraph::build(&net);
        let idx = |names: &[String]| -> Vec<usize> {
            names.iter().map(|n| g.labels.iter().position(|x| x == n).unwrap()).collect()
        };
        let paths: Vec<Vec<usize>> = v.evidence.paths.iter().map(|p| idx(p)).collect();
        prop_assert_eq!(paths.len(), v.evidence.found);
        prop_assert!(g.verify_paths(&paths, &idx(&v.evidence.sources), &idx(&v.evidence.sinks), &idx(&v.evidence.forbidden)));
    }
}
