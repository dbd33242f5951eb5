//! All minimal disconnecting sets when the module from u2 is known, and the
//! verdicts obtained with each of them.

use std::path::Path;

use netinform::graph::DEFAULT_MAX_CARD;
use netinform::model::{doc, OpenLoopSystem};
use netinform::sets::minimal_cuts;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = doc::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/five_node.json"))?;
    let net = d.network;
    let (y, u2) = (net.node_or_err("y")?, net.node_or_err("u2")?);
    let pred = d.predictor.expect("predictor").known_g(y, u2, None);
    let cuts = minimal_cuts(&net, &pred, DEFAULT_MAX_CARD)?;
    for c in &cuts.sets {
        let names: Vec<&str> = c.iter().map(|&k| net.labels[k].as_str()).collect();
        println!("disconnecting set {{{}}}", names.join(", "));
    }
    let sys = OpenLoopSystem::new(net, pred)?;
    println!("inputs {:?}, outputs {:?}", sys.inputs(), sys.outputs());
    Ok(())
}
