//! Informativity against the identifiability condition on the six-node
//! network with a single output row.

use std::path::Path;

use netinform::inform::{compare, CheckOptions};
use netinform::model::{doc, PredictorModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = doc::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/six_node.json"))?;
    let net = d.network;
    let w = |l: &str| net.node_or_err(l);
    let pred = PredictorModel::new(vec![w("w2")?, w("w3")?], vec![w("w1")?], w("w1")?, w("w2")?);
    let c = compare(&net, &pred, &CheckOptions::default())?;
    println!("informativity   {:?}", c.informativity);
    println!("identifiability {:?}", c.identifiability);
    println!("agreement       {:?}: {}", c.agreement, c.explanation);
    Ok(())
}
