//! Verdict flips of the six-node network as sources are moved around, with
//! the witness paths of the satisfied cases.

use std::path::Path;

use netinform::inform::{check_network, CheckOptions, Mode};
use netinform::model::{doc, Network};

fn configure(base: &Network, sources: &[&str]) -> Network {
    let mut net = base.clone();
    for (lab, node) in [("u3", "w3"), ("u6", "w6")] {
        if sources.contains(&lab) {
            let k = net.node(node).unwrap();
            net.set_excitation(lab, k, 1.0);
        }
    }
    for l in 2..net.size() {
        let present = sources.contains(&net.noise_label(l).as_str());
        net.noise_cov[(l, l)] = if present { 1.0 } else { 0.0 };
    }
    net
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = doc::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/six_node.json"))?;
    let pred = d.predictor.expect("predictor");
    let opts = CheckOptions::default();
    for sources in [vec!["u5", "u3"], vec!["u5", "e3"], vec!["u5", "u6"], vec!["u5", "e6"], vec!["u5"]] {
        let net = configure(&d.network, &sources);
        let g = check_network(&net, &pred, Mode::Generic, &opts)?;
        let n = check_network(&net, &pred, Mode::Numeric, &opts)?;
        println!("{:<10} generic {:?}, numeric {:?}", sources.join("+"), g.result, n.result);
        for p in &g.evidence.paths {
            println!("           {}", p.join(" -> "));
        }
        for note in &g.notes {
            println!("           note: {note}");
        }
    }
    Ok(())
}
