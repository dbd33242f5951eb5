//! Innovation form of the predictor noise of the two-node loop and the
//! positive-definiteness test of a projected spectrum.

use std::path::Path;

use netinform::grid::FrequencyGrid;
use netinform::model::doc;
use netinform::spectra::{signal_spectrum, PredictorInnovation, Signal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = doc::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/two_node.json"))?;
    let net = d.network;
    let pred = d.predictor.expect("predictor");
    let inn = PredictorInnovation::new(&net, &pred)?;
    println!("Riccati iterations {}", inn.model.iterations);
    println!("innovation covariance\n{}", inn.model.cov);
    println!("minimum phase: {}", inn.model.is_min_phase());

    let grid = FrequencyGrid::default_grid();
    let signals = [Signal::Node(0), Signal::Node(1)];
    let phi = signal_spectrum(&net, &signals, &grid)?;
    let pd = phi.pd_almost_all(1e-8);
    println!("spectrum of (w1, w2) positive definite: {} (worst ratio {:.3e})", pd.positive_definite, pd.worst_ratio);
    let cond = phi.project_out(1).pd_almost_all(1e-8);
    println!("w1 given w2 positive definite: {}", cond.positive_definite);
    Ok(())
}
