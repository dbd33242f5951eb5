//! Random single-output predictor problems.

use netinform::model::{Network, PredictorModel};
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{random_network, rng};

/// Single-output predictor: `Y = {j}`, `D` holds the in-neighbours of `j`
/// and a few extra nodes.
pub fn miso_predictor(rng: &mut ChaCha8Rng, net: &Network) -> Option<PredictorModel> {
    let l = net.size();
    let targets: Vec<usize> = (0..l).filter(|&j| (0..l).any(|a| !net.module(a, j).is_zero())).collect();
    let &j = targets.choose(rng)?;
    let ins: Vec<usize> = (0..l).filter(|&a| !net.module(a, j).is_zero()).collect();
    let &i = ins.choose(rng)?;
    let mut d = ins;
    for k in 0..l {
        if k != j && !d.contains(&k) && rng.random_bool(0.2) {
            d.push(k);
        }
    }
    d.sort();
    Some(PredictorModel::new(d, vec![j], j, i))
}

pub fn corpus(n: usize, seed: u64) -> Vec<(Network, PredictorModel)> {
    let mut r = rng(seed);
    let mut out = vec![];
    while out.len() < n {
        let l = r.random_range(3..=8);
        let net = random_network(&mut r, l, 0.35, 0.3, 0.15);
        if let Some(p) = miso_predictor(&mut r, &net) {
            out.push((net, p));
        }
    }
    out
}
