use crate::error::{Error, Result};
use crate::model::network::Network;
use crate::model::predictor::PredictorModel;

/// A network whose predictor inputs form the input network
/// `u = G_u u + R_u x` and whose outputs are driven by the inputs only.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenLoopSystem {
    pub net: Network,
    pub pred: PredictorModel,
}

impl OpenLoopSystem {
    pub fn new(net: Network, pred: PredictorModel) -> Result<Self> {
        pred.check(&net)?;
        let is_u = |k: usize| pred.d.contains(&k);
        let is_y = |k: usize| pred.y.contains(&k);
        if pred.d.iter().any(|&k| is_y(k)) {
            return Err(Error::Invalid("inputs and outputs must be disjoint".into()));
        }
        for (to, from, _) in net.g.nonzeros() {
            let ok = (is_u(to) && is_u(from)) || (is_y(to) && is_u(from));
            if !ok {
                return Err(Error::Invalid(format!(
                    "edge {} -> {} breaks the open-loop shape",
                    net.labels[from], net.labels[to]
                )));
            }
        }
        for &u in &pred.d {
            if net.noise_present(u) {
                return Err(Error::Invalid(format!("input {} carries noise", net.labels[u])));
            }
        }
        for e in &net.excitations {
            if !is_u(e.node) {
                return Err(Error::Invalid(format!("excitation {} does not enter an input", e.label)));
            }
        }
        Ok(OpenLoopSystem { net, pred })
    }

    pub fn from_network(net: &Network, pred: &PredictorModel) -> Option<Self> {
        Self::new(net.clone(), pred.clone()).ok()
    }

    pub fn inputs(&self) -> &[usize] {
        &self.pred.d
    }

    pub fn outputs(&self) -> &[usize] {
        &self.pred.y
    }
}
