//! Generic and numeric informativity of the four-input open-loop example for
//! every pair of active excitations.

use std::path::Path;

use netinform::inform::{check_openloop, CheckOptions, Mode};
use netinform::model::{doc, OpenLoopSystem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = doc::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/five_node.json"))?;
    let pred = d.predictor.expect("predictor");
    let opts = CheckOptions::default();
    let labels = ["x1", "x2", "x3", "x4"];
    for a in 0..4 {
        for b in a + 1..4 {
            let mut net = d.network.clone();
            for e in net.excitations.iter_mut() {
                e.variance = if e.label == labels[a] || e.label == labels[b] { 1.0 } else { 0.0 };
            }
            let sys = OpenLoopSystem::new(net, pred.clone())?;
            let g = check_openloop(&sys, Mode::Generic, &opts)?;
            let n = check_openloop(&sys, Mode::Numeric, &opts)?;
            println!(
                "{{{}, {}}}  generic {:?}  numeric {:?}  paths {}/{}",
                labels[a], labels[b], g.result, n.result, g.evidence.found, g.evidence.required
            );
        }
    }
    Ok(())
}
