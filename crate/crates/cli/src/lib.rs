//! Command-line front-end: resolves parameters from a JSON config file and
//! flags, runs one experiment and writes `<out>.csv` plus
//! `<out>.manifest.json`.

pub mod output;
pub mod params;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use duplex_core::experiments::{
    run_antenna_scaling, run_candidate_prob_check, run_clustered_snr_sweep, run_gap_vs_n_with,
    run_sidechannel_check, run_trial, SweepOptions,
};
use duplex_core::{BenchmarkPolicy, EpsilonSchedule, ExperimentTable, ModelKind, NetworkConfig};
use serde::Serialize;
use thiserror::Error;

use output::{to_csv, with_suffix, write_file, RunManifest};
use params::Params;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_RUNTIME: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("runtime error: {0}")]
    Runtime(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Parameter(_) => EXIT_CONFIG,
            CliError::Runtime(_) | CliError::Io(_) => EXIT_RUNTIME,
        }
    }
}

impl From<duplex_core::Error> for CliError {
    fn from(e: duplex_core::Error) -> Self {
        use duplex_core::Error as E;
        match e {
            E::InvalidParameter(_) | E::TooFewUsers { .. } | E::IndexOutOfRange { .. } | E::SubsetCapExceeded { .. } => {
                CliError::Parameter(e.to_string())
            }
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "duplexsim", version, about = "Full-duplex opportunistic scheduling simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gap to isolated uplink/downlink capacity as n grows.
    GapVsN(RunArgs),
    /// Per-stream rate with antennas scaling like alpha * ln n.
    AntennaScaling(RunArgs),
    /// Clustered-network gap between isolated capacity and the full-duplex bound.
    ClusteredSweep(RunArgs),
    /// Side-channel replication scheme against the isolated capacity.
    SidechannelCheck(RunArgs),
    /// Empirical candidate-set membership against the analytic probabilities.
    CandidateProb(RunArgs),
    /// One scheduling trial, printed as JSON.
    SingleTrial(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON config file (flat keys) or a previous run manifest.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path prefix.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; never changes the output.
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    params: Params,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::GapVsN(_) => "gap-vs-n",
            Command::AntennaScaling(_) => "antenna-scaling",
            Command::ClusteredSweep(_) => "clustered-sweep",
            Command::SidechannelCheck(_) => "sidechannel-check",
            Command::CandidateProb(_) => "candidate-prob",
            Command::SingleTrial(_) => "single-trial",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::GapVsN(a)
            | Command::AntennaScaling(a)
            | Command::ClusteredSweep(a)
            | Command::SidechannelCheck(a)
            | Command::CandidateProb(a)
            | Command::SingleTrial(a) => a,
        }
    }
}

/// Fills every key a subcommand reads with its default.
pub fn resolve(subcommand: &str, p: &Params) -> Params {
    let mut r = p.clone();
    macro_rules! default {
        ($field:ident, $value:expr) => {
            if r.$field.is_none() {
                r.$field = Some($value);
            }
        };
    }
    default!(seed, 0);
    match subcommand {
        "gap-vs-n" | "antenna-scaling" | "single-trial" => {
            default!(m, 2);
            default!(p, 10.0);
            default!(pbar, 10.0);
            default!(model, "homogeneous".into());
            if r.eps_const.is_none() {
                if subcommand == "antenna-scaling" {
                    r.eps_const = Some(4.0);
                } else {
                    default!(eps_c, 1.0);
                }
            }
            if r.model.as_deref() == Some("clustered") {
                default!(h, 1.0);
                default!(g, 1.0);
            }
            match subcommand {
                "gap-vs-n" => {
                    default!(n_list, vec![16, 64, 256, 1024]);
                    default!(trials, duplex_core::experiments::DEFAULT_GAP_TRIALS);
                    default!(delta, 1.0);
                    default!(subset_cap, duplex_core::capacity::DEFAULT_SUBSET_CAP as u64);
                }
                "antenna-scaling" => {
                    default!(n_list, vec![64, 256, 1024, 4096]);
                    default!(trials, duplex_core::experiments::DEFAULT_SCALING_TRIALS);
                    default!(alpha, 0.5);
                }
                _ => {
                    default!(n, 16);
                    default!(trial, 0);
                    default!(subset_cap, duplex_core::capacity::DEFAULT_SUBSET_CAP as u64);
                }
            }
        }
        "clustered-sweep" => {
            default!(alpha, 1.0);
            default!(beta, 1.0);
            default!(m, 2);
            default!(snr_list, vec![1e2, 1e3, 1e4, 1e5, 1e6]);
            default!(zero_g, false);
        }
        "sidechannel-check" => {
            default!(m_list, vec![1, 2, 4, 8]);
            default!(h, 1.0);
            default!(p, 10.0);
            default!(pbar, 10.0);
        }
        "candidate-prob" => {
            default!(m, 3);
            default!(eps_const, 0.5);
            default!(n, 4);
            default!(draws, 100_000);
        }
        _ => {}
    }
    r
}

fn need<T: Clone>(v: &Option<T>, key: &str) -> Result<T, CliError> {
    v.clone().ok_or_else(|| CliError::Parameter(format!("missing value for {key}")))
}

fn network_config(r: &Params, n: usize) -> Result<NetworkConfig, CliError> {
    let epsilon = match (r.eps_const, r.eps_c) {
        (Some(eps), _) => EpsilonSchedule::Constant { eps },
        (None, Some(c)) => EpsilonSchedule::Decaying { c },
        (None, None) => return Err(CliError::Parameter("missing eps_c or eps_const".into())),
    };
    let model = match need(&r.model, "model")?.as_str() {
        "homogeneous" => ModelKind::Homogeneous,
        "clustered" => ModelKind::Clustered { h: need(&r.h, "h")?, g: need(&r.g, "g")? },
        other => return Err(CliError::Parameter(format!("unknown model {other:?}"))),
    };
    Ok(NetworkConfig {
        n,
        antennas: need(&r.m, "m")?,
        downlink_power: need(&r.p, "p")?,
        uplink_power: need(&r.pbar, "pbar")?,
        epsilon,
        model,
        seed: need(&r.seed, "seed")?,
    })
}

/// Runs one subcommand on resolved parameters and returns its table.
pub fn run_experiment(subcommand: &str, r: &Params, workers: usize) -> Result<ExperimentTable, CliError> {
    let table = match subcommand {
        "gap-vs-n" => {
            let n_list = need(&r.n_list, "n_list")?;
            let config = network_config(r, n_list.first().copied().unwrap_or(1).max(1))?;
            let policy = BenchmarkPolicy::Auto { subset_cap: need(&r.subset_cap, "subset_cap")? as u128 };
            run_gap_vs_n_with(&config, &n_list, need(&r.trials, "trials")?, need(&r.delta, "delta")?, workers, policy)?
        }
        "antenna-scaling" => {
            let n_list = need(&r.n_list, "n_list")?;
            let config = network_config(r, n_list.first().copied().unwrap_or(1).max(1))?;
            run_antenna_scaling(&config, need(&r.alpha, "alpha")?, &n_list, need(&r.trials, "trials")?, workers)?
        }
        "clustered-sweep" => run_clustered_snr_sweep(
            need(&r.alpha, "alpha")?,
            need(&r.beta, "beta")?,
            need(&r.m, "m")?,
            &need(&r.snr_list, "snr_list")?,
            SweepOptions { force_zero_interference: need(&r.zero_g, "zero_g")? },
        )?,
        "sidechannel-check" => {
            run_sidechannel_check(&need(&r.m_list, "m_list")?, need(&r.h, "h")?, need(&r.p, "p")?, need(&r.pbar, "pbar")?)?
        }
        "candidate-prob" => run_candidate_prob_check(
            need(&r.m, "m")?,
            need(&r.eps_const, "eps_const")?,
            need(&r.n, "n")?,
            need(&r.draws, "draws")?,
            need(&r.seed, "seed")?,
            workers,
        )?,
        other => return Err(CliError::Parameter(format!("{other} does not produce a table"))),
    };
    Ok(table)
}

#[derive(Serialize)]
struct SingleTrialView<'a> {
    trial: u64,
    schedule: &'a duplex_core::Schedule,
    rates: &'a duplex_core::RateReport,
    benchmark_mode: Option<duplex_core::BenchmarkMode>,
}

/// JSON description of one pipeline trial.
pub fn single_trial_json(r: &Params) -> Result<String, CliError> {
    let config = network_config(r, need(&r.n, "n")?)?;
    let policy = BenchmarkPolicy::Auto { subset_cap: need(&r.subset_cap, "subset_cap")? as u128 };
    let report = run_trial(&config, need(&r.trial, "trial")?, policy)?;
    let view = SingleTrialView {
        trial: report.trial,
        schedule: &report.schedule,
        rates: &report.rates,
        benchmark_mode: report.benchmark_mode,
    };
    serde_json::to_string_pretty(&view).map_err(|e| CliError::Runtime(e.to_string()))
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn execute(command: &Command) -> Result<(), CliError> {
    let name = command.name();
    let args = command.args();
    let file = match &args.config {
        Some(path) => Params::load(path)?,
        None => Params::default(),
    };
    let resolved = resolve(name, &args.params.over(&file));
    let workers = args.workers.unwrap_or_else(default_workers);
    if workers == 0 {
        return Err(CliError::Parameter("--workers must be >= 1".into()));
    }
    let started = Instant::now();

    if name == "single-trial" {
        let json = single_trial_json(&resolved)?;
        println!("{json}");
        if let Some(out) = &args.out {
            write_file(&with_suffix(out, ".json"), &(json + "\n"))?;
        }
        return Ok(());
    }

    let table = run_experiment(name, &resolved, workers)?;
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from(name));
    let csv_path = with_suffix(&out, ".csv");
    let manifest_path = with_suffix(&out, ".manifest.json");
    write_file(&csv_path, &to_csv(&table))?;
    let manifest = RunManifest {
        subcommand: name.into(),
        seed: resolved.seed.unwrap_or_default(),
        resolved_config: resolved,
        outputs: vec![csv_path.clone(), manifest_path.clone()],
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        schema: table.schema.clone(),
        metadata: table.metadata.clone(),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Runtime(e.to_string()))?;
    write_file(&manifest_path, &(json + "\n"))?;
    eprintln!("wrote {} and {}", csv_path.display(), manifest_path.display());
    Ok(())
}

/// Parses `argv`, runs the subcommand and returns the process exit status.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("duplexsim: {e}");
            e.exit_code()
        }
    }
}
