//! Monte-Carlo consistency runs over a grid of sample sizes.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inform::{generic_verdict, CheckOptions, Outcome};
use crate::model::{Network, PredictorModel};

use super::estimate::{estimate_direct, EstimateOptions};
use super::sim::{simulate, SimConfig};

pub const VANISHING: f64 = 0.05;
pub const BOUNDED_AWAY: f64 = 0.10;
pub const MAX_N: usize = 1 << 16;
pub const MAX_RUNS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_grid: Vec<usize>,
    pub runs: usize,
    pub seed: u64,
    pub burn_in: usize,
    pub jobs: usize,
    pub estimate: EstimateOptions,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_grid: (12..=16).map(|k| 1usize << k).collect(),
            runs: MAX_RUNS,
            seed: 1,
            burn_in: 500,
            jobs: 1,
            estimate: EstimateOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Progress {
    pub run: usize,
    pub seed: u64,
    pub n: usize,
    pub error: Option<f64>,
    pub done: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub n: usize,
    /// Per run, `None` when the run failed.
    pub errors: Vec<Option<f64>>,
    pub median: Option<f64>,
    pub q25: Option<f64>,
    pub q75: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Vanishing,
    BoundedAway,
    Unclear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub run: usize,
    pub seed: u64,
    pub n: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub target: String,
    pub verdict: Outcome,
    pub seeds: Vec<u64>,
    pub rows: Vec<SampleRow>,
    pub monotone_decreasing: bool,
    pub final_median: Option<f64>,
    pub trend: Trend,
    pub consistent_with_verdict: bool,
    pub failures: Vec<RunFailure>,
}

fn quantile(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Some(sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64))
}

fn summarize(n: usize, errors: Vec<Option<f64>>) -> SampleRow {
    let mut v: Vec<f64> = errors.iter().flatten().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    SampleRow {
        n,
        median: quantile(&v, 0.5),
        q25: quantile(&v, 0.25),
        q75: quantile(&v, 0.75),
        min: v.first().copied(),
        max: v.last().copied(),
        errors,
    }
}

pub fn check_config(cfg: &ExperimentConfig) -> Result<()> {
    if let Some(&n) = cfg.n_grid.iter().find(|&&n| n > MAX_N) {
        return Err(Error::Invalid(format!("N = {n} exceeds the cap {MAX_N}")));
    }
    if cfg.runs > MAX_RUNS {
        return Err(Error::Invalid(format!("runs = {} exceeds the cap {MAX_RUNS}", cfg.runs)));
    }
    Ok(())
}

pub fn consistency_experiment(net: &Network, pred: &PredictorModel, cfg: &ExperimentConfig) -> Result<ConsistencyReport> {
    consistency_experiment_with(net, pred, cfg, &|_| {})
}

/// As [`consistency_experiment`], reporting each finished estimate.
pub fn consistency_experiment_with(
    net: &Network,
    pred: &PredictorModel,
    cfg: &ExperimentConfig,
    progress: &(dyn Fn(Progress) + Sync),
) -> Result<ConsistencyReport> {
    let verdict = generic_verdict(net, pred, &CheckOptions::default())?;
    let mut grid = cfg.n_grid.clone();
    grid.sort_unstable();
    grid.dedup();
    let seeds: Vec<u64> = (0..cfg.runs as u64).map(|r| cfg.seed.wrapping_add(r)).collect();
    let total = grid.len() * seeds.len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let one_run = |run: usize| -> Result<Vec<std::result::Result<f64, String>>> {
        let seed = seeds[run];
        let Some(&nmax) = grid.last() else { return Ok(vec![]) };
        let sim = SimConfig {
            n: nmax,
            seed,
            burn_in: cfg.burn_in,
            store_noise: false,
        };
        let data = simulate(net, &sim)?;
        Ok(grid
            .iter()
            .map(|&n| {
                let opts = EstimateOptions {
                    seed,
                    ..cfg.estimate.clone()
                };
                let res = estimate_direct(&data.prefix(n), net, pred, &opts)
                    .map_err(|e| e.to_string())
                    .and_then(|r| r.target_error().ok_or_else(|| "target entry is not parametrized".to_string()));
                let d = done.fetch_add(1, std::sync::atomic::Ordering::SeqCst) + 1;
                progress(Progress {
                    run,
                    seed,
                    n,
                    error: res.as_ref().ok().copied(),
                    done: d,
                    total,
                });
                res
            })
            .collect())
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let results: Vec<Vec<std::result::Result<f64, String>>> =
        pool.install(|| (0..seeds.len()).into_par_iter().map(one_run).collect::<Result<_>>())?;
    let mut failures = vec![];
    let mut rows = vec![];
    for (k, &n) in grid.iter().enumerate() {
        let errs: Vec<Option<f64>> = results
            .iter()
            .enumerate()
            .map(|(run, r)| match &r[k] {
                Ok(e) => Some(*e),
                Err(m) => {
                    failures.push(RunFailure {
                        run,
                        seed: seeds[run],
                        n,
                        message: m.clone(),
                    });
                    None
                }
            })
            .collect();
        rows.push(summarize(n, errs));
    }
    let medians: Vec<Option<f64>> = rows.iter().map(|r| r.median).collect();
    let monotone_decreasing = !medians.is_empty()
        && medians.iter().all(|m| m.is_some())
        && medians.windows(2).all(|w| w[1].unwrap() < w[0].unwrap());
    let final_median = medians.last().copied().flatten();
    let trend = match final_median {
        Some(m) if monotone_decreasing && m < VANISHING => Trend::Vanishing,
        Some(m) if m > BOUNDED_AWAY => Trend::BoundedAway,
        _ => Trend::Unclear,
    };
    let consistent_with_verdict = matches!(
        (verdict, trend),
        (Outcome::Satisfied, Trend::Vanishing) | (Outcome::NotSatisfied, Trend::BoundedAway)
    );
    Ok(ConsistencyReport {
        target: format!("G_{}{}", net.labels[pred.j], net.labels[pred.i]),
        verdict,
        seeds,
        rows,
        monotone_decreasing,
        final_median,
        trend,
        consistent_with_verdict,
        failures,
    })
}

impl ConsistencyReport {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(["n", "run", "seed", "error"]).map_err(io)?;
        for row in &self.rows {
            for (run, e) in row.errors.iter().enumerate() {
                let e = e.map(|x| format!("{x:.10e}")).unwrap_or_default();
                out.write_record([row.n.to_string(), run.to_string(), self.seeds[run].to_string(), e])
                    .map_err(io)?;
            }
        }
        out.flush().map_err(|e| Error::Io(e.to_string()))
    }

    /// Writes `errors.csv` and `summary.json` into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::Io(e.to_string());
        std::fs::create_dir_all(dir).map_err(io)?;
        self.write_csv(std::fs::File::create(dir.join("errors.csv")).map_err(io)?)?;
        let json = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(dir.join("summary.json"), json).map_err(io)
    }
}
