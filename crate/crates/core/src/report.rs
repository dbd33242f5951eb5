//! Versioned JSON reports shared by the command line and the service.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest as _, Sha256};

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::harness::experiment::{consistency_experiment_with, ConsistencyReport, ExperimentConfig, Progress};
use crate::inform::{self, CheckOptions, Comparison, Mode, Outcome, ProbeReport, Verdict};
use crate::model::{doc, validate, Network, OpenLoopSystem, PredictorModel, ValidationReport};
use crate::sets::{derive_sets, selections, SignalSelection};

pub const SCHEMA: &str = "netinform-report/1";
pub const TOOL: &str = "netinform";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub sha256: String,
    pub document: Value,
}

impl InputDigest {
    fn of(v: &Value) -> Self {
        let bytes = serde_json::to_vec(v).expect("json value");
        InputDigest {
            sha256: hex::encode(Sha256::digest(&bytes)),
            document: v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSection {
    pub network: InputDigest,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predictor: Option<InputDigest>,
}

/// Parsed network and predictor together with the documents they came from.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub network: Network,
    pub predictor: Option<PredictorModel>,
    network_value: Value,
    predictor_value: Option<Value>,
}

fn read_json(path: &Path) -> Result<Value> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_slice(&bytes).map_err(|e| Error::Schema {
        pointer: String::new(),
        message: format!("{}: {e}", path.display()),
    })
}

impl Inputs {
    /// `predictor` may be a predictor object or a document holding one under
    /// `predictor`; without it the network document's own predictor is used.
    pub fn from_values(network: Value, predictor: Option<Value>) -> Result<Self> {
        let d = doc::parse_value(&network)?;
        let pred = match &predictor {
            Some(v) => Some(doc::parse_predictor_doc(v, &d.network)?),
            None => d.predictor.clone(),
        };
        Ok(Inputs {
            network: d.network,
            predictor: pred,
            network_value: network,
            predictor_value: predictor,
        })
    }

    pub fn from_files(network: &Path, predictor: Option<&Path>) -> Result<Self> {
        let n = read_json(network)?;
        let p = predictor.map(read_json).transpose()?;
        Self::from_values(n, p)
    }

    pub fn predictor(&self) -> Result<&PredictorModel> {
        self.predictor
            .as_ref()
            .ok_or_else(|| Error::Invalid("no predictor model given".into()))
    }

    pub fn section(&self) -> InputSection {
        InputSection {
            network: InputDigest::of(&self.network_value),
            predictor: self.predictor_value.as_ref().map(InputDigest::of),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool: Tool,
    pub command: String,
    pub config: Value,
    pub inputs: InputSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub selections: Vec<SignalSelection>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub rowwise: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ConsistencyReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub errors: Vec<String>,
}

impl Report {
    fn new(command: &str, config: Value, inputs: &Inputs) -> Self {
        Report {
            schema: SCHEMA.into(),
            tool: Tool {
                name: TOOL.into(),
                version: VERSION.into(),
            },
            command: command.into(),
            config,
            inputs: inputs.section(),
            outcome: None,
            exit_code: 0,
            validation: None,
            selections: vec![],
            verdicts: vec![],
            rowwise: vec![],
            comparison: None,
            probe: None,
            experiment: None,
            errors: vec![],
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSelection {
    Generic,
    Numeric,
    Both,
}

impl ModeSelection {
    fn modes(self) -> Vec<Mode> {
        match self {
            ModeSelection::Generic => vec![Mode::Generic],
            ModeSelection::Numeric => vec![Mode::Numeric],
            ModeSelection::Both => vec![Mode::Generic, Mode::Numeric],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    pub mode: ModeSelection,
    pub grid: usize,
    pub tol: f64,
    pub probe: usize,
    pub seed: u64,
    /// Node labels of a fixed disconnecting set.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cut: Vec<String>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            mode: ModeSelection::Generic,
            grid: crate::grid::DEFAULT_GRID,
            tol: crate::spectra::DEFAULT_TOL,
            probe: 100,
            seed: 0,
            cut: vec![],
        }
    }
}

impl CheckConfig {
    pub fn options(&self, net: &Network) -> Result<CheckOptions> {
        if self.grid == 0 {
            return Err(Error::Invalid("grid must have at least one point".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Invalid("tol must be positive".into()));
        }
        let cut = if self.cut.is_empty() {
            None
        } else {
            let node = |(k, l): (usize, &String)| {
                net.node(l).ok_or_else(|| Error::UnknownLabel {
                    label: l.clone(),
                    pointer: format!("/options/cut/{k}"),
                })
            };
            Some(self.cut.iter().enumerate().map(node).collect::<Result<_>>()?)
        };
        Ok(CheckOptions {
            grid: FrequencyGrid::clustered(self.grid, crate::grid::DEFAULT_JITTER_SEED),
            tol: self.tol,
            cut,
            ..CheckOptions::default()
        })
    }
}

/// Combined outcome over modes: agreement is kept, disagreement is
/// inconclusive.
pub fn combine(outcomes: &[Outcome]) -> Outcome {
    match outcomes.first() {
        None => Outcome::Inconclusive,
        Some(&o) if outcomes.iter().all(|&x| x == o) => o,
        _ => Outcome::Inconclusive,
    }
}

pub fn run_validate(inputs: &Inputs) -> Report {
    let mut r = Report::new("validate", json!({}), inputs);
    let v = validate(&inputs.network);
    r.exit_code = if v.passed { 0 } else { 1 };
    r.validation = Some(v);
    r
}

pub fn run_sets(inputs: &Inputs) -> Result<Report> {
    let mut r = Report::new("sets", json!({}), inputs);
    let pred = inputs.predictor()?;
    let s = derive_sets(&inputs.network, pred)?;
    r.selections = selections(&inputs.network, &s);
    Ok(r)
}

pub fn run_check(inputs: &Inputs, cfg: &CheckConfig) -> Result<Report> {
    let opts = cfg.options(&inputs.network)?;
    let net = &inputs.network;
    let pred = inputs.predictor()?;
    let mut r = Report::new("check", serde_json::to_value(cfg).expect("config"), inputs);
    let v = validate(net);
    let valid = v.passed;
    r.validation = Some(v);
    if !valid {
        r.errors.push("network failed validation".into());
        r.outcome = Some(Outcome::Inconclusive);
        r.exit_code = Outcome::Inconclusive.exit_code();
        return Ok(r);
    }
    if let Ok(s) = derive_sets(net, pred) {
        r.selections = selections(net, &s);
    }
    let mut outcomes = vec![];
    for mode in cfg.mode.modes() {
        match inform::check(net, pred, mode, &opts) {
            Ok(v) => {
                outcomes.push(v.result);
                r.verdicts.push(v);
            }
            Err(e @ Error::HypothesisViolation(_)) => {
                r.errors.push(e.to_string());
                outcomes.push(Outcome::Inconclusive);
            }
            Err(e) => return Err(e),
        }
    }
    if r.errors.is_empty() {
        if let Ok(rows) = inform::check_rowwise(net, pred, Mode::Generic, &opts) {
            r.rowwise = rows;
        }
        if OpenLoopSystem::from_network(net, pred).is_none() {
            r.comparison = inform::compare(net, pred, &opts).ok();
        }
        if cfg.probe > 0 {
            r.probe = Some(inform::generic_rank_probe(net, pred, cfg.probe, cfg.seed, &opts)?);
        }
    }
    let outcome = combine(&outcomes);
    r.outcome = Some(outcome);
    r.exit_code = outcome.exit_code();
    Ok(r)
}

pub fn run_probe(inputs: &Inputs, cfg: &CheckConfig) -> Result<Report> {
    let opts = cfg.options(&inputs.network)?;
    let pred = inputs.predictor()?;
    let mut r = Report::new("probe", serde_json::to_value(cfg).expect("config"), inputs);
    let p = inform::generic_rank_probe(&inputs.network, pred, cfg.probe, cfg.seed, &opts)?;
    r.outcome = p.generic;
    r.probe = Some(p);
    Ok(r)
}

pub fn run_experiment(
    inputs: &Inputs,
    cfg: &ExperimentConfig,
    progress: &(dyn Fn(Progress) + Sync),
) -> Result<Report> {
    let pred = inputs.predictor()?;
    let mut config = serde_json::to_value(cfg).expect("config");
    if let Some(o) = config.as_object_mut() {
        o.remove("jobs");
    }
    let mut r = Report::new("experiment", config, inputs);
    let e = consistency_experiment_with(&inputs.network, pred, cfg, progress)?;
    r.outcome = Some(e.verdict);
    r.experiment = Some(e);
    Ok(r)
}
