//! Load a network document, validate it and print every finding.
//!
//! cargo run --example validate -- [FILE]

use std::path::PathBuf;

use netinform::model::{doc, validate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/six_node.json"));
    let d = doc::load(&path)?;
    let net = &d.network;
    println!("{} nodes, {} modules, {} excitations", net.size(), net.g.nonzeros().count(), net.excitations.len());
    let report = validate(net);
    for f in &report.findings {
        let mark = if f.passed { "ok  " } else { "FAIL" };
        println!("{mark} {:<24} {}", f.check, f.message);
    }
    println!("passed: {}", report.passed);

    // documents round-trip through the serializer
    let again = doc::parse_str(&doc::to_string_pretty(&d))?;
    assert_eq!(again, d);
    Ok(())
}
