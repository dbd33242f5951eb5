//! Data-informativity analysis for single-module identification in linear
//! dynamic networks.

pub mod error;
pub mod graph;
pub mod grid;
pub mod harness;
pub mod immersion;
pub mod inform;
pub mod model;
pub mod report;
pub mod service;
pub mod sets;
pub mod spectra;
pub mod ss;
pub mod tf;

pub use error::{Error, Result};
