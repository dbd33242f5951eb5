//! Prediction-error maps of the four-input example against their closed
//! forms, for one random perturbation of the target row.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use netinform::grid::FrequencyGrid;
use netinform::harness::tk_closed_form_check;
use netinform::model::doc;
use netinform::tf::RationalTF;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = doc::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/five_node.json"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut delta = || RationalTF::from_coeffs(&[0.0, rng.random_range(-1.0..1.0)], &[1.0, rng.random_range(-0.5..0.5)]);
    let deltas = [delta()?, delta()?, delta()?, delta()?];
    let r = tk_closed_form_check(&d.network, &deltas, &FrequencyGrid::default_grid())?;
    for k in 0..4 {
        println!("T_{}: max |T| {:.4}, residual {:.2e}", k + 1, r.magnitude[k], r.residual[k]);
    }
    println!("max residual {:.2e} over {} points", r.max_residual, r.points);
    Ok(())
}
