//! Immersion of the four-input example onto `{u1, u2, u3, u4}` minus the
//! disconnecting set, and the `T_s`, `R_s` decomposition.

use std::path::Path;

use netinform::grid::FrequencyGrid;
use netinform::immersion::{decompose_ts_rs, immerse};
use netinform::model::doc;
use netinform::sets::derive_sets;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = doc::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/five_node.json"))?;
    let net = d.network;
    let pred = d.predictor.expect("predictor");
    let grid = FrequencyGrid::uniform_closed(5);
    let u3 = net.node_or_err("u3")?;
    let im = immerse(&net, &[u3], &grid)?;
    println!("retained {:?}, max condition {:.3}", im.retained, im.max_condition);
    for (k, w) in grid.omegas.iter().enumerate() {
        let t = &im.t_values[k];
        println!("omega {w:.3}: |T(u2,u4)| = {:.4}", t[(1, 3)].norm());
    }
    let sets = derive_sets(&net, &pred)?;
    let dec = decompose_ts_rs(&net, &sets, &grid)?;
    println!("zero block max {:.2e}, stray sources {:.2e}", dec.zero_block_max, dec.stray_source_max);
    println!("T_s at omega 0:\n{}", dec.t_s[0]);
    Ok(())
}
