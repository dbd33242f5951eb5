#![allow(dead_code)]

pub mod graph_oracle;
pub mod loop_oracle;
pub mod miso;

use std::path::PathBuf;

use netinform::model::{doc, Network, PredictorModel};

pub fn example_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

pub fn load(name: &str) -> (Network, PredictorModel) {
    let doc = doc::load(&example_path(name)).unwrap();
    (doc.network, doc.predictor.unwrap())
}

pub fn node(net: &Network, l: &str) -> usize {
    net.node(l).unwrap()
}

/// Keep only the listed excitations and noise sources present.
pub fn only_sources(net: &Network, keep: &[&str]) -> Network {
    let mut n = net.clone();
    for e in n.excitations.iter_mut() {
        if !keep.contains(&e.label.as_str()) {
            e.variance = 0.0;
        } else if e.variance == 0.0 {
            e.variance = 1.0;
        }
    }
    for l in 0..n.size() {
        let lab = n.noise_label(l);
        if !keep.contains(&lab.as_str()) {
            n.noise_cov[(l, l)] = 0.0;
        } else if n.noise_cov[(l, l)] == 0.0 {
            n.noise_cov[(l, l)] = 1.0;
        }
    }
    n
}

/// Six-node network with the listed sources; `u3`/`u6` are added when named.
/// e1 and e2 stay present.
pub fn six_node(sources: &[&str]) -> (Network, PredictorModel) {
    let (mut net, pred) = load("six_node.json");
    for (lab, node) in [("u3", "w3"), ("u6", "w6")] {
        if sources.contains(&lab) {
            let n = net.node(node).unwrap();
            net.set_excitation(lab, n, 1.0);
        }
    }
    let mut keep = vec!["e1", "e2"];
    keep.extend_from_slice(sources);
    let mut n = only_sources(&net, &keep);
    n.noise_cov[(0, 0)] = 0.1;
    n.noise_cov[(1, 1)] = 0.1;
    (n, pred)
}

pub fn labels(net: &Network, v: &[usize]) -> Vec<String> {
    v.iter().map(|&k| net.labels[k].clone()).collect()
}

use netinform::harness::estimate::Problem;
use netinform::harness::{simulate, EstimateOptions, SimConfig};
use netinform::model::predictor::ParamMap;
use netinform::tf::{Orders, RationalTF};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// First-order strictly proper module `b q^-1 / (1 + a q^-1)`.
pub fn first_order(rng: &mut ChaCha8Rng, scale: f64) -> RationalTF {
    let b = rng.random_range(0.2..1.0) * scale * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let a = rng.random_range(-0.6..0.6);
    RationalTF::from_coeffs(&[0.0, b], &[1.0, a]).unwrap()
}

/// Random stable network on `l` nodes. Edges appear with probability `p`;
/// every node carries a noise source with probability `p_noise` and an
/// excitation with probability `p_exc`.
pub fn random_network(rng: &mut ChaCha8Rng, l: usize, p: f64, p_noise: f64, p_exc: f64) -> Network {
    loop {
        let mut net = Network::with_nodes(l);
        let scale = 0.9 / (l as f64).sqrt();
        for a in 0..l {
            for b in 0..l {
                if a != b && rng.random_bool(p) {
                    let tf = first_order(rng, scale);
                    net.set_module(a, b, tf);
                }
            }
        }
        for k in 0..l {
            if rng.random_bool(p_noise) {
                net.noise_cov[(k, k)] = rng.random_range(0.5..1.5);
            }
        }
        for k in 0..l {
            if rng.random_bool(p_exc) {
                net.set_excitation(&format!("r{}", k + 1), k, 1.0);
            }
        }
        if netinform::model::validate(&net).passed {
            return net;
        }
    }
}

pub fn rational_problem_options() -> EstimateOptions {
    EstimateOptions {
        g_orders: Orders { nb: 2, nf: 1, nk: 1 },
        t_orders: Orders { nb: 2, nf: 1, nk: 0 },
        noise_order: 2,
        ..EstimateOptions::default()
    }
}

/// Largest central-difference gradient error, relative to the largest
/// gradient entry, on the six-node `{u5, e3}` problem at a perturbed start.
pub fn fd_gradient_error(n: usize, sim_seed: u64, seed: u64) -> f64 {
    let (net, pred) = six_node(&["u5", "e3"]);
    let data = simulate(&net, &SimConfig::new(n, sim_seed)).unwrap();
    let pm = ParamMap::derive(&net, &pred).unwrap();
    let p = Problem::new(&data, &pred, &pm, &rational_problem_options()).unwrap();
    let mut r = rng(seed);
    let theta: Vec<f64> = p.initial().iter().map(|t| t + r.random_range(-0.05..0.05)).collect();
    let g = p.gradient(&theta);
    let scale = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut worst = 0.0f64;
    for k in 0..theta.len() {
        let h = 1e-6 * theta[k].abs().max(1.0);
        let mut up = theta.clone();
        let mut dn = theta.clone();
        up[k] += h;
        dn[k] -= h;
        let fd = (p.cost(&up) - p.cost(&dn)) / (2.0 * h);
        worst = worst.max((fd - g[k]).abs() / scale);
    }
    worst
}
