//! Monte Carlo experiments.
//!
//! Every table is a pure function of its inputs and master seed. Trials run in
//! parallel on a dedicated pool, but results are gathered in trial order, so
//! the worker count never changes a single output bit.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{
    binomial, bc_sum_capacity_dpc, clustered_fd_upper_bound, clustered_isolated_capacity, mac_m_capacity_bound,
    mac_m_sum_capacity_exact, snr_parameterization, ClusteredBoundInputs, SnrParams, DEFAULT_BC_MAX_ITERS,
    DEFAULT_BC_TOL, DEFAULT_SUBSET_CAP,
};
use crate::channel::{sample_realization, ChannelRealization, ModelKind, NetworkConfig};
use crate::error::{Error, Result};
use crate::linalg::{sample_cn, sample_haar_unitary, ComplexMatrix};
use crate::rates::{downlink_stream_rates, sidechannel_clustered_rates, uplink_stream_rates, Benchmarks, RateReport};
use crate::scheduler::{epsilon_value, schedule_downlink, schedule_uplink, BeamGains, Schedule};
use crate::streams::StreamKey;

const LABEL_UPLINK_BEAMS: &str = "beams/uplink";
const LABEL_DOWNLINK_BEAMS: &str = "beams/downlink";
const LABEL_EXTREME: &str = "extreme-value";

pub const DEFAULT_GAP_TRIALS: usize = 500;
pub const DEFAULT_SCALING_TRIALS: usize = 200;

/// A table column with its unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    fn new(name: &str, unit: &str) -> Self {
        Self { name: name.into(), unit: unit.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(v) => Some(v as f64),
            Cell::Float(v) => Some(v),
            Cell::Text(_) => None,
        }
    }
}

/// Aggregated experiment output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentTable {
    pub schema: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: BTreeMap<String, String>,
}

impl ExperimentTable {
    fn new(experiment: &str, schema: Vec<Column>) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert("experiment".into(), experiment.into());
        metadata.insert("code_version".into(), env!("CARGO_PKG_VERSION").into());
        Self { schema, rows: Vec::new(), metadata }
    }

    fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.insert(key.into(), value.to_string());
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|c| c.name == name)
    }

    /// Numeric values of one column, `None` for text cells.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    /// Numeric column, panicking on missing column or text cells.
    pub fn floats(&self, name: &str) -> Vec<f64> {
        self.column(name)
            .unwrap_or_else(|| panic!("no column {name}"))
            .into_iter()
            .map(|v| v.unwrap_or_else(|| panic!("column {name} is not numeric")))
            .collect()
    }
}

/// Which sum-capacity benchmark backed a gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchmarkMode {
    Exact,
    Bound,
}

impl BenchmarkMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BenchmarkMode::Exact => "exact",
            BenchmarkMode::Bound => "bound",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BenchmarkPolicy {
    /// Rates only.
    Skip,
    /// Exact MAC-M when at most `subset_cap` subsets exist, its bound
    /// otherwise; exact BC always.
    Auto { subset_cap: u128 },
}

impl Default for BenchmarkPolicy {
    fn default() -> Self {
        BenchmarkPolicy::Auto { subset_cap: DEFAULT_SUBSET_CAP }
    }
}

/// Everything one pass of the scheduling pipeline produced.
#[derive(Debug, Clone)]
pub struct TrialReport {
    pub trial: u64,
    pub schedule: Schedule,
    pub rates: RateReport,
    pub benchmark_mode: Option<BenchmarkMode>,
    pub uplink_beams: ComplexMatrix,
    pub downlink_beams: ComplexMatrix,
    pub realization: ChannelRealization,
}

/// Channels → random beams → uplink schedule → downlink schedule → rates →
/// benchmarks.
pub fn run_trial(config: &NetworkConfig, trial: u64, policy: BenchmarkPolicy) -> Result<TrialReport> {
    config.validate()?;
    let m = config.antennas;
    let realization = sample_realization(config, trial)?;
    let eps = epsilon_value(config.epsilon, config.n)?;
    let uplink_beams = sample_haar_unitary(m, &mut StreamKey::new(config.seed, trial, LABEL_UPLINK_BEAMS).rng());
    let downlink_beams = sample_haar_unitary(m, &mut StreamKey::new(config.seed, trial, LABEL_DOWNLINK_BEAMS).rng());

    let uplink = schedule_uplink(realization.uplink(), &uplink_beams, eps)?;
    let interference = realization.interference_columns(&uplink.users)?;
    let downlink = schedule_downlink(realization.downlink(), &interference, &downlink_beams, &uplink.users, eps)?;

    let up_rates = uplink_stream_rates(realization.uplink(), &uplink_beams, &uplink.users, config.uplink_power)?;
    let down_rates = downlink_stream_rates(
        realization.downlink(),
        &interference,
        &downlink_beams,
        &downlink.users,
        &uplink.users,
        config.downlink_power,
        config.uplink_power,
    )?;
    let mut rates = RateReport::new(up_rates, down_rates);

    let benchmark_mode = match policy {
        BenchmarkPolicy::Skip => None,
        BenchmarkPolicy::Auto { subset_cap } => {
            let (mac_m, mode) = if binomial(config.n, m) <= subset_cap {
                (mac_m_sum_capacity_exact(realization.uplink(), config.uplink_power, m, subset_cap)?, BenchmarkMode::Exact)
            } else {
                (mac_m_capacity_bound(realization.uplink(), config.uplink_power, m), BenchmarkMode::Bound)
            };
            let bc = bc_sum_capacity_dpc(realization.downlink(), config.downlink_power, DEFAULT_BC_TOL, DEFAULT_BC_MAX_ITERS)?;
            rates = rates.with_benchmarks(Benchmarks { mac_m, bc });
            Some(mode)
        }
    };

    Ok(TrialReport {
        trial,
        schedule: Schedule::new(uplink, downlink, eps),
        rates,
        benchmark_mode,
        uplink_beams,
        downlink_beams,
        realization,
    })
}

/// Runs `f` over trial indices on `workers` threads, returning results in
/// trial order and the lowest-indexed error, if any.
pub fn par_trials<T, F>(trials: usize, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot build worker pool: {e}")))?;
    let results: Vec<Result<T>> = pool.install(|| (0..trials as u64).into_par_iter().map(&f).collect());
    results.into_iter().collect()
}

fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn fallback_count(flags: &[bool]) -> usize {
    flags.iter().filter(|&&f| f).count()
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    Ok(())
}

/// Uplink gap, downlink gap, uplink sum, downlink sum, fallback counts, benchmark.
type GapOutcome = (f64, f64, f64, f64, usize, usize, BenchmarkMode);

/// Gap to the isolated-system capacities as the user population grows.
pub fn run_gap_vs_n(config: &NetworkConfig, n_list: &[usize], trials: usize, delta: f64, workers: usize) -> Result<ExperimentTable> {
    run_gap_vs_n_with(config, n_list, trials, delta, workers, BenchmarkPolicy::default())
}

pub fn run_gap_vs_n_with(
    config: &NetworkConfig,
    n_list: &[usize],
    trials: usize,
    delta: f64,
    workers: usize,
    policy: BenchmarkPolicy,
) -> Result<ExperimentTable> {
    check_trials(trials)?;
    if n_list.is_empty() {
        return Err(Error::InvalidParameter("n list is empty".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be > 0, got {delta}")));
    }
    if matches!(policy, BenchmarkPolicy::Skip) {
        return Err(Error::InvalidParameter("gap experiment needs benchmarks".into()));
    }
    let schema = vec![
        Column::new("n", "users"),
        Column::new("M", "antennas"),
        Column::new("epsilon", "linear"),
        Column::new("trials", "count"),
        Column::new("mean_gap", "nats"),
        Column::new("mean_gap_bits", "bits"),
        Column::new("se_gap", "nats"),
        Column::new("min_gap", "nats"),
        Column::new("p_gap_exceeds_delta", "probability"),
        Column::new("se_p_gap_exceeds_delta", "probability"),
        Column::new("mean_uplink_gap", "nats"),
        Column::new("mean_downlink_gap", "nats"),
        Column::new("mean_uplink_sum_rate", "nats"),
        Column::new("mean_downlink_sum_rate", "nats"),
        Column::new("uplink_fallback_rate", "fraction of streams"),
        Column::new("downlink_fallback_rate", "fraction of streams"),
        Column::new("benchmark", "exact|bound|mixed"),
    ];
    let mut table = ExperimentTable::new("gap-vs-n", schema);
    table.meta("seed", config.seed);
    table.meta("trials", trials);
    table.meta("delta_nats", delta);

    for &n in n_list {
        let cfg = NetworkConfig { n, ..config.clone() };
        cfg.validate()?;
        let m = cfg.antennas;
        let eps = epsilon_value(cfg.epsilon, n)?;
        let outcomes = par_trials(trials, workers, |t| {
            let report = run_trial(&cfg, t, policy)?;
            let r = &report.rates;
            Ok((
                r.uplink_gap.expect("benchmarks attached"),
                r.downlink_gap.expect("benchmarks attached"),
                r.uplink_sum,
                r.downlink_sum,
                fallback_count(&report.schedule.uplink_fallback_flags),
                fallback_count(&report.schedule.downlink_fallback_flags),
                report.benchmark_mode.expect("benchmarks attached"),
            ))
        })?;
        let gaps: Vec<f64> = outcomes.iter().map(|o| o.0 + o.1).collect();
        let (mean_gap, se_gap) = mean_se(&gaps);
        let t = trials as f64;
        let p_exceed = gaps.iter().filter(|&&g| g > delta).count() as f64 / t;
        let mean_of = |f: &dyn Fn(&GapOutcome) -> f64| {
            outcomes.iter().map(f).sum::<f64>() / t
        };
        let modes: Vec<BenchmarkMode> = outcomes.iter().map(|o| o.6).collect();
        let mode = if modes.iter().all(|&b| b == modes[0]) { modes[0].as_str() } else { "mixed" };
        table.rows.push(vec![
            n.into(),
            m.into(),
            eps.into(),
            trials.into(),
            mean_gap.into(),
            (mean_gap / std::f64::consts::LN_2).into(),
            se_gap.into(),
            gaps.iter().cloned().fold(f64::INFINITY, f64::min).into(),
            p_exceed.into(),
            (p_exceed * (1.0 - p_exceed) / t).sqrt().into(),
            mean_of(&|o| o.0).into(),
            mean_of(&|o| o.1).into(),
            mean_of(&|o| o.2).into(),
            mean_of(&|o| o.3).into(),
            (mean_of(&|o| o.4 as f64) / m as f64).into(),
            (mean_of(&|o| o.5 as f64) / m as f64).into(),
            mode.into(),
        ]);
    }
    Ok(table)
}

/// Antenna count used at population `n`: `max(1, round(α·ln n))`.
pub fn scaled_antennas(alpha: f64, n: usize) -> usize {
    ((alpha * (n as f64).ln()).round() as usize).max(1)
}

/// Per-stream sum rate `(R̄ + R)/(2M)` with `M` growing like `α·ln n`.
pub fn run_antenna_scaling(config: &NetworkConfig, alpha: f64, n_list: &[usize], trials: usize, workers: usize) -> Result<ExperimentTable> {
    check_trials(trials)?;
    if !config.epsilon.is_constant() {
        return Err(Error::InvalidParameter("antenna scaling needs a constant epsilon".into()));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
    }
    if n_list.is_empty() {
        return Err(Error::InvalidParameter("n list is empty".into()));
    }
    let schema = vec![
        Column::new("n", "users"),
        Column::new("M", "antennas"),
        Column::new("epsilon", "linear"),
        Column::new("trials", "count"),
        Column::new("mean_rate_per_stream", "nats"),
        Column::new("mean_rate_per_stream_bits", "bits"),
        Column::new("se_rate_per_stream", "nats"),
        Column::new("mean_uplink_sum_rate", "nats"),
        Column::new("mean_downlink_sum_rate", "nats"),
        Column::new("uplink_fallback_rate", "fraction of streams"),
        Column::new("downlink_fallback_rate", "fraction of streams"),
    ];
    let mut table = ExperimentTable::new("antenna-scaling", schema);
    table.meta("seed", config.seed);
    table.meta("trials", trials);
    table.meta("alpha", alpha);

    for &n in n_list {
        let m = scaled_antennas(alpha, n);
        let cfg = NetworkConfig { n, antennas: m, ..config.clone() };
        cfg.validate()?;
        let eps = epsilon_value(cfg.epsilon, n)?;
        let outcomes = par_trials(trials, workers, |t| {
            let report = run_trial(&cfg, t, BenchmarkPolicy::Skip)?;
            Ok((
                report.rates.uplink_sum,
                report.rates.downlink_sum,
                fallback_count(&report.schedule.uplink_fallback_flags),
                fallback_count(&report.schedule.downlink_fallback_flags),
            ))
        })?;
        let ratios: Vec<f64> = outcomes.iter().map(|o| (o.0 + o.1) / (2.0 * m as f64)).collect();
        let (mean, se) = mean_se(&ratios);
        let t = trials as f64;
        table.rows.push(vec![
            n.into(),
            m.into(),
            eps.into(),
            trials.into(),
            mean.into(),
            (mean / std::f64::consts::LN_2).into(),
            se.into(),
            (outcomes.iter().map(|o| o.0).sum::<f64>() / t).into(),
            (outcomes.iter().map(|o| o.1).sum::<f64>() / t).into(),
            (outcomes.iter().map(|o| o.2).sum::<usize>() as f64 / (t * m as f64)).into(),
            (outcomes.iter().map(|o| o.3).sum::<usize>() as f64 / (t * m as f64)).into(),
        ]);
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    /// Evaluate the bound with `g = 0` regardless of `α`.
    pub force_zero_interference: bool,
}

/// Ordinary least-squares slope of `y` on `x`.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Isolated capacity against the full-duplex upper bound across SNR.
///
/// The `topdecade_slope` column (gap against `M·ln SNR`, fitted over points
/// with `SNR ≥ SNR_max/10`) is present only when that decade holds at least
/// two points.
pub fn run_clustered_snr_sweep(alpha: f64, beta: f64, clusters: usize, snr_list: &[f64], options: SweepOptions) -> Result<ExperimentTable> {
    if snr_list.is_empty() {
        return Err(Error::InvalidParameter("SNR list is empty".into()));
    }
    if snr_list.iter().any(|&s| !(s > 1.0)) || snr_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("SNR list must be strictly increasing and > 1".into()));
    }
    let mut points = Vec::with_capacity(snr_list.len());
    for &snr in snr_list {
        let mut inputs = snr_parameterization(&SnrParams { snr, alpha, beta, clusters })?;
        if options.force_zero_interference {
            inputs.g = 0.0;
        }
        let isolated = clustered_isolated_capacity(&inputs);
        let bound = clustered_fd_upper_bound(&inputs);
        points.push((snr, isolated, bound, isolated - bound));
    }
    let m = clusters as f64;
    let top = snr_list[snr_list.len() - 1] / 10.0;
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        points.iter().filter(|p| p.0 >= top * (1.0 - 1e-12)).map(|p| (m * p.0.ln(), p.3)).unzip();
    let slope = least_squares_slope(&xs, &ys);

    let mut schema = vec![
        Column::new("snr", "linear"),
        Column::new("M", "clusters"),
        Column::new("isolated_capacity", "nats"),
        Column::new("fd_upper_bound", "nats"),
        Column::new("gap", "nats"),
        Column::new("gap_bits", "bits"),
        Column::new("gap_ratio", "gap/(M ln snr)"),
    ];
    if slope.is_some() {
        schema.push(Column::new("topdecade_slope", "nats per nat"));
    }
    let mut table = ExperimentTable::new("clustered-sweep", schema);
    table.meta("alpha", alpha);
    table.meta("beta", beta);
    table.meta("force_zero_interference", options.force_zero_interference);
    for (snr, isolated, bound, gap) in points {
        let mut row: Vec<Cell> = vec![
            snr.into(),
            clusters.into(),
            isolated.into(),
            bound.into(),
            gap.into(),
            (gap / std::f64::consts::LN_2).into(),
            (gap / (m * snr.ln())).into(),
        ];
        if let Some(s) = slope {
            row.push(s.into());
        }
        table.rows.push(row);
    }
    Ok(table)
}

/// Side-channel scheme against the isolated capacity, per cluster count.
pub fn run_sidechannel_check(cluster_list: &[usize], h: f64, downlink_power: f64, uplink_power: f64) -> Result<ExperimentTable> {
    let schema = vec![
        Column::new("M", "clusters"),
        Column::new("isolated_capacity", "nats"),
        Column::new("scheme_sum_rate", "nats"),
        Column::new("difference", "nats"),
        Column::new("difference_bits", "bits"),
        Column::new("bound_2M_log2", "nats"),
        Column::new("within_bound", "bool"),
    ];
    let mut table = ExperimentTable::new("sidechannel-check", schema);
    table.meta("h", h);
    table.meta("downlink_power", downlink_power);
    table.meta("uplink_power", uplink_power);
    for &m in cluster_list {
        let inputs = ClusteredBoundInputs { clusters: m, h, g: 0.0, downlink_power, uplink_power };
        inputs.validate()?;
        let isolated = clustered_isolated_capacity(&inputs);
        let net = crate::channel::ClusteredNetwork { clusters: m, h, g: 0.0, membership: (0..m).collect() };
        let (up, down) = sidechannel_clustered_rates(&net, downlink_power, uplink_power);
        let difference = isolated - (up + down);
        let bound = 2.0 * m as f64 * std::f64::consts::LN_2;
        table.rows.push(vec![
            m.into(),
            isolated.into(),
            (up + down).into(),
            difference.into(),
            (difference / std::f64::consts::LN_2).into(),
            bound.into(),
            (difference <= bound + 1e-12).into(),
        ]);
    }
    Ok(table)
}

/// Analytic candidate-set membership probabilities for CN(0,1) gains:
/// `(1 − e^{−ε})^{M−1}` for the uplink and `(1 − e^{−ε})^{2M−1}` for the downlink.
pub fn candidate_probabilities(streams: usize, eps: f64) -> (f64, f64) {
    let a = 1.0 - (-eps).exp();
    (a.powi(streams as i32 - 1), a.powi(2 * streams as i32 - 1))
}

/// Empirical membership frequency of an arbitrary user in the stream-0
/// candidate sets, against [`candidate_probabilities`]. Each of `draws`
/// networks contributes all of its `n` users.
pub fn run_candidate_prob_check(streams: usize, eps: f64, n: usize, draws: usize, seed: u64, workers: usize) -> Result<ExperimentTable> {
    if draws < 10_000 {
        return Err(Error::InvalidParameter(format!("need at least 10^4 draws, got {draws}")));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be > 0, got {eps}")));
    }
    let config = NetworkConfig {
        n,
        antennas: streams,
        epsilon: crate::scheduler::EpsilonSchedule::Constant { eps },
        model: ModelKind::Homogeneous,
        seed,
        ..Default::default()
    };
    config.validate()?;
    let counts = par_trials(draws, workers, |t| {
        let real = sample_realization(&config, t)?;
        let ubeams = sample_haar_unitary(streams, &mut StreamKey::new(seed, t, LABEL_UPLINK_BEAMS).rng());
        let dbeams = sample_haar_unitary(streams, &mut StreamKey::new(seed, t, LABEL_DOWNLINK_BEAMS).rng());
        let up_gains = BeamGains::uplink(real.uplink(), &ubeams)?;
        let up = (0..n).filter(|&k| up_gains.cross_beams_within(0, k, eps)).count();
        let scheduled = schedule_uplink(real.uplink(), &ubeams, eps)?;
        let cols = real.interference_columns(&scheduled.users)?;
        let down_gains = BeamGains::downlink(real.downlink(), &dbeams)?;
        let down = (0..n)
            .filter(|&k| down_gains.cross_beams_within(0, k, eps) && cols.values().all(|c| c[k].norm_sqr() <= eps))
            .count();
        Ok((up, down))
    })?;
    let samples = draws * n;
    let (p_up, p_down) = candidate_probabilities(streams, eps);
    let schema = vec![
        Column::new("link", "uplink|downlink"),
        Column::new("M", "antennas"),
        Column::new("epsilon", "linear"),
        Column::new("samples", "count"),
        Column::new("empirical", "probability"),
        Column::new("analytic", "probability"),
        Column::new("std_error", "probability"),
        Column::new("z", "std errors"),
    ];
    let mut table = ExperimentTable::new("candidate-prob", schema);
    table.meta("seed", seed);
    table.meta("draws", draws);
    table.meta("users_per_draw", n);
    for (link, hits, p) in [
        ("uplink", counts.iter().map(|c| c.0).sum::<usize>(), p_up),
        ("downlink", counts.iter().map(|c| c.1).sum::<usize>(), p_down),
    ] {
        let empirical = hits as f64 / samples as f64;
        let se = (p * (1.0 - p) / samples as f64).sqrt();
        let z = if se > 0.0 {
            (empirical - p) / se
        } else if empirical == p {
            0.0
        } else {
            f64::INFINITY
        };
        table.rows.push(vec![
            link.into(),
            streams.into(),
            eps.into(),
            samples.into(),
            empirical.into(),
            p.into(),
            se.into(),
            z.into(),
        ]);
    }
    Ok(table)
}

/// Extreme-value sanity of maxima of `population` i.i.d. gains, repeated
/// `reps` times. Rows:
/// * `exp_max_below`: max of Exp(1) variables below `ln N − ln ln N`
///   (probability at most about `1/N`);
/// * `norm_max_above`: max of `‖h‖²`, `h ~ CN(0, I_M)`, above
///   `ln N + (M+1)·ln ln N` (vanishing in `N`).
pub fn run_extreme_value_check(population: usize, reps: usize, streams: usize, seed: u64, workers: usize) -> Result<ExperimentTable> {
    if population < 3 || reps == 0 || streams == 0 {
        return Err(Error::InvalidParameter("need population >= 3, reps >= 1, M >= 1".into()));
    }
    let n = population as f64;
    let lower = n.ln() - n.ln().ln();
    let upper = n.ln() + (streams as f64 + 1.0) * n.ln().ln();
    let maxima = par_trials(reps, workers, |t| {
        let mut rng = StreamKey::new(seed, t, LABEL_EXTREME).rng();
        let mut exp_max = 0.0f64;
        let mut norm_max = 0.0f64;
        for _ in 0..population {
            exp_max = exp_max.max(sample_cn(&mut rng).norm_sqr());
            let norm: f64 = (0..streams).map(|_| sample_cn(&mut rng).norm_sqr()).sum();
            norm_max = norm_max.max(norm);
        }
        Ok((exp_max, norm_max))
    })?;
    let schema = vec![
        Column::new("statistic", "name"),
        Column::new("population", "count"),
        Column::new("threshold", "linear"),
        Column::new("reps", "count"),
        Column::new("violations", "count"),
        Column::new("empirical", "probability"),
        Column::new("reference", "probability"),
    ];
    let mut table = ExperimentTable::new("extreme-value", schema);
    table.meta("seed", seed);
    table.meta("M", streams);
    let below = maxima.iter().filter(|m| m.0 < lower).count();
    let above = maxima.iter().filter(|m| m.1 > upper).count();
    for (name, threshold, violations, reference) in
        [("exp_max_below", lower, below, 2.0 / n), ("norm_max_above", upper, above, f64::NAN)]
    {
        table.rows.push(vec![
            name.into(),
            population.into(),
            threshold.into(),
            reps.into(),
            violations.into(),
            (violations as f64 / reps as f64).into(),
            reference.into(),
        ]);
    }
    Ok(table)
}

/// One trial with default benchmarks, for inspection.
pub fn single_trial(config: &NetworkConfig, trial: u64) -> Result<TrialReport> {
    run_trial(config, trial, BenchmarkPolicy::default())
}
