//! Achievable rates when interference is treated as noise, in nats.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{ClusteredNetwork, InterferenceColumns};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scheduler::BeamGains;

/// Benchmark capacities of the isolated uplink and downlink.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Benchmarks {
    pub mac_m: f64,
    pub bc: f64,
}

/// Per-stream and sum rates plus, when benchmarks are attached, the
/// uplink gap `η̄ = C_MAC-M − R̄` and downlink gap `η = C_BC − R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub uplink_stream_rates: Vec<f64>,
    pub downlink_stream_rates: Vec<f64>,
    pub uplink_sum: f64,
    pub downlink_sum: f64,
    pub benchmarks: Option<Benchmarks>,
    pub uplink_gap: Option<f64>,
    pub downlink_gap: Option<f64>,
}

impl RateReport {
    pub fn new(uplink_stream_rates: Vec<f64>, downlink_stream_rates: Vec<f64>) -> Self {
        let uplink_sum = uplink_stream_rates.iter().sum();
        let downlink_sum = downlink_stream_rates.iter().sum();
        Self {
            uplink_stream_rates,
            downlink_stream_rates,
            uplink_sum,
            downlink_sum,
            benchmarks: None,
            uplink_gap: None,
            downlink_gap: None,
        }
    }

    pub fn with_benchmarks(mut self, benchmarks: Benchmarks) -> Self {
        self.uplink_gap = Some(benchmarks.mac_m - self.uplink_sum);
        self.downlink_gap = Some(benchmarks.bc - self.downlink_sum);
        self.benchmarks = Some(benchmarks);
        self
    }

    /// `η̄ + η`, if benchmarks are attached.
    pub fn total_gap(&self) -> Option<f64> {
        Some(self.uplink_gap? + self.downlink_gap?)
    }
}

fn check_users(users: &[usize], streams: usize, n: usize) -> Result<()> {
    if users.len() != streams {
        return Err(Error::ShapeMismatch(format!("{} users scheduled on {streams} streams", users.len())));
    }
    if let Some(&u) = users.iter().find(|&&u| u >= n) {
        return Err(Error::IndexOutOfRange { index: u, len: n });
    }
    Ok(())
}

/// Uplink stream `m` decodes user `users[m]` through receive beam `m`, with
/// the other scheduled users as noise.
pub fn uplink_stream_rates(
    uplink: &ComplexMatrix,
    beams: &ComplexMatrix,
    users: &[usize],
    uplink_power: f64,
) -> Result<Vec<f64>> {
    let gains = BeamGains::uplink(uplink, beams)?;
    check_users(users, gains.streams(), gains.users())?;
    Ok((0..users.len())
        .map(|m| {
            let signal = uplink_power * gains.get(m, users[m]);
            let interference: f64 =
                users.iter().enumerate().filter(|&(r, _)| r != m).map(|(_, &u)| gains.get(m, u)).sum();
            (1.0 + signal / (1.0 + uplink_power * interference)).ln()
        })
        .collect())
}

/// Downlink stream `m` serves `downlink_users[m]` on transmit beam `m` with
/// power `P/M`; the other beams and every scheduled uplink user are noise.
pub fn downlink_stream_rates(
    downlink: &ComplexMatrix,
    interference: &InterferenceColumns,
    beams: &ComplexMatrix,
    downlink_users: &[usize],
    uplink_users: &[usize],
    downlink_power: f64,
    uplink_power: f64,
) -> Result<Vec<f64>> {
    let gains = BeamGains::downlink(downlink, beams)?;
    let streams = gains.streams();
    check_users(downlink_users, streams, gains.users())?;
    check_users(uplink_users, streams, gains.users())?;
    let columns: Vec<&[Complex64]> = uplink_users
        .iter()
        .map(|j| interference.get(j).map(Vec::as_slice).ok_or(Error::MissingInterferenceColumn(*j)))
        .collect::<Result<_>>()?;
    let per_stream = downlink_power / streams as f64;
    Ok(downlink_users
        .iter()
        .enumerate()
        .map(|(m, &k)| {
            let signal = per_stream * gains.get(m, k);
            let beams_noise: f64 = (0..streams).filter(|&r| r != m).map(|r| gains.get(r, k)).sum();
            let uplink_noise: f64 = columns.iter().map(|col| col[k].norm_sqr()).sum();
            (1.0 + signal / (1.0 + per_stream * beams_noise + uplink_power * uplink_noise)).ln()
        })
        .collect())
}

/// Lower bound on a downlink stream rate given the selected projection and
/// threshold: `log(1 + (P/M)·s / (1 + (2M−1)ε))`.
///
/// The `(2M−1)ε` denominator counts each residual interference term at unit
/// weight, so it bounds [`downlink_stream_rates`] only when
/// `(P/M)(M−1) + P̄·M ≤ 2M−1`. [`downlink_rate_floor_weighted`] holds for any powers.
pub fn downlink_rate_floor(max_proj: f64, downlink_power: f64, streams: usize, eps: f64) -> f64 {
    let m = streams as f64;
    (1.0 + downlink_power / m * max_proj / (1.0 + (2.0 * m - 1.0) * eps)).ln()
}

/// Power-weighted floor: `log(1 + (P/M)·s / (1 + ((P/M)(M−1) + P̄·M)ε))`.
/// Equals [`downlink_rate_floor`] at `P = M`, `P̄ = 1`.
pub fn downlink_rate_floor_weighted(
    max_proj: f64,
    downlink_power: f64,
    uplink_power: f64,
    streams: usize,
    eps: f64,
) -> f64 {
    let m = streams as f64;
    let per_stream = downlink_power / m;
    (1.0 + per_stream * max_proj / (1.0 + (per_stream * (m - 1.0) + uplink_power * m) * eps)).ln()
}

/// `log(1 + P̄·s / (1 + (M−1)·P̄·ε))`.
pub fn uplink_rate_floor(max_proj: f64, uplink_power: f64, streams: usize, eps: f64) -> f64 {
    (1.0 + uplink_power * max_proj / (1.0 + (streams as f64 - 1.0) * uplink_power * eps)).ln()
}

/// Uplink and downlink sum rates of the side-channel replication scheme on a
/// clustered network: each uplink user splits its power evenly between the
/// main and side channel, and each downlink user subtracts its side-channel
/// output, cancelling the interference at the cost of doubled noise.
pub fn sidechannel_clustered_rates(net: &ClusteredNetwork, downlink_power: f64, uplink_power: f64) -> (f64, f64) {
    let m = net.clusters as f64;
    let h2 = net.h * net.h;
    let uplink = m * (1.0 + h2 * uplink_power / 2.0).ln();
    let downlink = m * (1.0 + h2 * downlink_power / (2.0 * m)).ln();
    (uplink, downlink)
}
