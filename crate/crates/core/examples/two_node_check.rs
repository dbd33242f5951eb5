//! The two-node feedback loop with either, both or no excitation.

use std::path::Path;

use netinform::inform::{check_network, CheckOptions, Mode};
use netinform::model::doc;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = doc::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/two_node.json"))?;
    let pred = d.predictor.expect("predictor");
    let opts = CheckOptions::default();
    let w2 = d.network.node_or_err("w2")?;
    for (u1, u2) in [(true, false), (false, true), (true, true), (false, false)] {
        let mut net = d.network.clone();
        net.set_excitation("u2", w2, if u2 { 1.0 } else { 0.0 });
        let k = net.excitation("u1").unwrap();
        net.excitations[k].variance = if u1 { 1.0 } else { 0.0 };
        let g = check_network(&net, &pred, Mode::Generic, &opts)?;
        let n = check_network(&net, &pred, Mode::Numeric, &opts)?;
        println!("u1={u1:<5} u2={u2:<5} generic {:?}, numeric {:?}", g.result, n.result);
    }
    Ok(())
}
