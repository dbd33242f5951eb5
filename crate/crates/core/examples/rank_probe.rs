//! Numeric verdicts of random instantiations against the generic verdict.
//!
//! cargo run --release --example rank_probe -- [TRIALS]

use std::path::Path;

use netinform::inform::{generic_rank_probe, CheckOptions};
use netinform::model::doc;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let opts = CheckOptions::default();
    for name in ["five_node.json", "six_node.json", "two_node.json"] {
        let d = doc::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name))?;
        let pred = d.predictor.expect("predictor");
        let p = generic_rank_probe(&d.network, &pred, trials, 7, &opts)?;
        println!(
            "{name:<15} generic {:?}: numeric satisfied {}, not satisfied {}, failed {}, agreement {:.2}",
            p.generic.unwrap(),
            p.numeric_satisfied,
            p.numeric_not_satisfied,
            p.failed_instantiations,
            p.agreement.unwrap_or(0.0)
        );
    }
    Ok(())
}
