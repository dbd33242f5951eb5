use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use netinform::harness::experiment::{ExperimentConfig, Progress};
use netinform::report::{self, CheckConfig, Inputs, ModeSelection, Report};
use netinform::service::{self, ServiceConfig};
use netinform::Error;

#[derive(Parser)]
#[command(name = "netinform", version, about = "Data-informativity checks for dynamic networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Generic,
    Numeric,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Structural and stability checks of a network file.
    Validate {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Informativity verdicts with evidence.
    Check {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        predictor: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "generic")]
        mode: ModeArg,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        probe: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixed disconnecting set, comma-separated node labels.
        #[arg(long, value_delimiter = ',')]
        cut: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo consistency runs of the direct method.
    Experiment {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        predictor: Option<PathBuf>,
        #[arg(long = "N-grid", value_delimiter = ',', default_value = "4096,8192,16384,32768,65536")]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// HTTP service; NETINFORM_ADDR and NETINFORM_JOBS apply unless overridden.
    Serve {
        #[arg(long)]
        addr: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::NumericalBlowup { .. } | Error::NonConvergence(_) => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}

fn emit(r: &Report, out: Option<&Path>) -> Result<(), Error> {
    let json = r.to_json();
    match out {
        Some(p) => std::fs::write(p, json + "\n").map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn finish(r: Result<Report, Error>, out: Option<&Path>) -> ExitCode {
    match r.and_then(|r| {
        emit(&r, out)?;
        Ok(r)
    }) {
        Ok(r) => {
            if let Some(o) = r.outcome {
                eprintln!("outcome: {}", serde_json::to_value(o).unwrap().as_str().unwrap_or(""));
            }
            for e in &r.errors {
                eprintln!("note: {e}");
            }
            ExitCode::from(r.exit_code as u8)
        }
        Err(e) => fail(&e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { network, out } => {
            let r = Inputs::from_files(&network, None).map(|i| report::run_validate(&i));
            finish(r, out.as_deref())
        }
        Command::Check {
            network,
            predictor,
            mode,
            grid,
            tol,
            probe,
            seed,
            cut,
            out,
        } => {
            if grid == 0 {
                eprintln!("error: --grid must be at least 1");
                return ExitCode::from(2);
            }
            let cfg = CheckConfig {
                mode: match mode {
                    ModeArg::Generic => ModeSelection::Generic,
                    ModeArg::Numeric => ModeSelection::Numeric,
                    ModeArg::Both => ModeSelection::Both,
                },
                grid,
                tol,
                probe,
                seed,
                cut,
            };
            let r = Inputs::from_files(&network, predictor.as_deref()).and_then(|i| report::run_check(&i, &cfg));
            finish(r, out.as_deref())
        }
        Command::Experiment {
            network,
            predictor,
            n_grid,
            runs,
            seed,
            out,
            jobs,
        } => {
            let cfg = ExperimentConfig {
                n_grid,
                runs,
                seed,
                jobs,
                ..ExperimentConfig::default()
            };
            let progress = |p: Progress| match p.error {
                Some(e) => eprintln!("[{}/{}] run {} N={} error={e:.4}", p.done, p.total, p.run, p.n),
                None => eprintln!("[{}/{}] run {} N={} failed", p.done, p.total, p.run, p.n),
            };
            let r = Inputs::from_files(&network, predictor.as_deref())
                .and_then(|i| report::run_experiment(&i, &cfg, &progress));
            let r = match (r, &out) {
                (Ok(r), Some(dir)) => r
                    .experiment
                    .as_ref()
                    .expect("experiment section")
                    .save(dir)
                    .map(|_| r),
                (r, _) => r,
            };
            let target = out.as_ref().map(|d| d.join("report.json"));
            finish(r, target.as_deref())
        }
        Command::Serve { addr, jobs } => {
            let mut cfg = ServiceConfig::from_env();
            if let Some(a) = addr {
                cfg.addr = a;
            }
            if let Some(j) = jobs {
                cfg.jobs = j.max(1);
            }
            let rt = match tokio::runtime::Runtime::new() {
                Ok(rt) => rt,
                Err(e) => return fail(&Error::Io(e.to_string())),
            };
            eprintln!("listening on {}", cfg.addr);
            match rt.block_on(service::serve(cfg)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(&Error::Io(e.to_string())),
            }
        }
    }
}
