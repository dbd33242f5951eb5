//! Signal sets of the four-input example: disconnecting set, `w_T`,
//! `x_T*` and the rest of the selection bundle.

use std::path::Path;

use netinform::model::doc;
use netinform::sets::{derive_sets, selections};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = doc::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/five_node.json"))?;
    let pred = d.predictor.expect("predictor");
    let sets = derive_sets(&d.network, &pred)?;
    for s in selections(&d.network, &sets) {
        println!("{:<10} {{{}}}", s.name, s.members.join(", "));
        for line in &s.derivation {
            println!("           {line}");
        }
    }
    Ok(())
}
