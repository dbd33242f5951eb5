//! Monte-Carlo consistency runs for the six-node network with e3 present and
//! with e6 in its place.
//!
//! cargo run --release --example consistency -- [RUNS]

use std::path::Path;

use netinform::harness::{consistency_experiment, ExperimentConfig};
use netinform::model::doc;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let runs = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let d = doc::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/six_node.json"))?;
    let pred = d.predictor.expect("predictor");
    let (w3, w6) = (d.network.node_or_err("w3")?, d.network.node_or_err("w6")?);
    let mut swapped = d.network.clone();
    swapped.noise_cov[(w3, w3)] = 0.0;
    swapped.noise_cov[(w6, w6)] = 1.0;
    let cfg = ExperimentConfig {
        runs,
        ..ExperimentConfig::default()
    };
    for (name, net) in [("e3", &d.network), ("e6", &swapped)] {
        let r = consistency_experiment(net, &pred, &cfg)?;
        println!("{name}: verdict {:?}, trend {:?}, agrees {}", r.verdict, r.trend, r.consistent_with_verdict);
        for row in &r.rows {
            println!("  N = {:>6}  median {:.4}  IQR [{:.4}, {:.4}]", row.n, row.median.unwrap(), row.q25.unwrap(), row.q75.unwrap());
        }
    }
    Ok(())
}
