pub mod doc;
pub mod network;
pub mod openloop;
pub mod predictor;
pub mod validate;

pub use doc::Document;
pub use network::{Excitation, Network};
pub use openloop::OpenLoopSystem;
pub use predictor::{Block, EntryOverride, EntryStatus, KnownKind, OverrideStatus, ParamMap, PredictorModel};
pub use validate::{validate, ValidationReport};
