//! One simulation and one direct-method estimate on the six-node network.
//!
//! cargo run --release --example simulate_estimate -- [N] [SEED]

use std::path::Path;

use netinform::harness::{estimate_direct, simulate, EstimateOptions, SimConfig};
use netinform::model::{doc, Block};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|s| s.parse().ok()).unwrap_or(8192);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let d = doc::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/six_node.json"))?;
    let pred = d.predictor.expect("predictor");
    let data = simulate(&d.network, &SimConfig::new(n, seed))?;
    let est = estimate_direct(&data, &d.network, &pred, &EstimateOptions::default())?;
    println!("cost {:.5} after {} accepted steps (converged {})", est.cost, est.trace.len() - 1, est.converged);
    let net = &d.network;
    for e in &est.entries {
        let col = match e.block {
            Block::T => net.excitations[e.col].label.clone(),
            _ => net.labels[e.col].clone(),
        };
        let num: Vec<String> = e.tf.num.coeffs().iter().map(|c| format!("{c:.3}")).collect();
        println!("{:?}[{}, {col}] num {}", e.block, net.labels[e.row], num.join(" "));
    }
    println!("target relative error {:.4}", est.target_error().unwrap_or(f64::NAN));
    Ok(())
}
