//! Two-stage opportunistic scheduling with random beamforming.
//!
//! Uplink streams are filled first: a user is a candidate for stream `m` when
//! its projection onto every other receive beam is at most `ε`, and the
//! candidate with the largest projection onto beam `m` wins. Downlink
//! candidates must additionally receive at most `ε` from each scheduled uplink
//! user. Streams are filled in order, skipping users already placed; when no
//! candidate survives the thresholds the stream falls back to the strongest
//! remaining user and is flagged.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::InterferenceColumns;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Threshold sequence `ε_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum EpsilonSchedule {
    /// `ε_n = c / ln n`.
    Decaying { c: f64 },
    Constant { eps: f64 },
}

impl Default for EpsilonSchedule {
    fn default() -> Self {
        EpsilonSchedule::Decaying { c: 1.0 }
    }
}

impl EpsilonSchedule {
    pub fn validate(&self) -> Result<()> {
        let v = match *self {
            EpsilonSchedule::Decaying { c } => c,
            EpsilonSchedule::Constant { eps } => eps,
        };
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidParameter(format!("epsilon parameter must be > 0, got {v}")));
        }
        Ok(())
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, EpsilonSchedule::Constant { .. })
    }
}

pub fn epsilon_value(sched: EpsilonSchedule, n: usize) -> Result<f64> {
    sched.validate()?;
    match sched {
        EpsilonSchedule::Decaying { c } => {
            if n < 2 {
                return Err(Error::InvalidParameter(format!("decaying epsilon needs n >= 2, got {n}")));
            }
            Ok(c / (n as f64).ln())
        }
        EpsilonSchedule::Constant { eps } => Ok(eps),
    }
}

/// Stream-to-user assignment for one link direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkSchedule {
    /// `users[m]` is the user served on stream `m`.
    pub users: Vec<usize>,
    /// `fallback[m]` is set when stream `m` had no threshold-feasible candidate.
    pub fallback: Vec<bool>,
}

/// Joint uplink/downlink schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub uplink_users: Vec<usize>,
    pub downlink_users: Vec<usize>,
    pub uplink_fallback_flags: Vec<bool>,
    pub downlink_fallback_flags: Vec<bool>,
    pub epsilon_used: f64,
}

impl Schedule {
    pub fn new(uplink: LinkSchedule, downlink: LinkSchedule, epsilon: f64) -> Self {
        Self {
            uplink_users: uplink.users,
            downlink_users: downlink.users,
            uplink_fallback_flags: uplink.fallback,
            downlink_fallback_flags: downlink.fallback,
            epsilon_used: epsilon,
        }
    }

    pub fn any_fallback(&self) -> bool {
        self.uplink_fallback_flags.iter().chain(&self.downlink_fallback_flags).any(|&f| f)
    }
}

/// Squared beam projections `gains[m][k]` of `streams` beams against `users` users.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamGains {
    streams: usize,
    users: usize,
    data: Vec<f64>,
}

impl BeamGains {
    /// `|φ̄_m* h̄_k|²` for an `M × n` uplink matrix and receive beams `Φ̄`.
    pub fn uplink(uplink: &ComplexMatrix, beams: &ComplexMatrix) -> Result<Self> {
        check_beams(beams, uplink.rows())?;
        let y = beams.adjoint_mul(uplink)?;
        Ok(Self { streams: y.rows(), users: y.cols(), data: y.as_slice().iter().map(|z| z.norm_sqr()).collect() })
    }

    /// `|φ_m* h_k|²` for an `n × M` downlink matrix with rows `h_k*`.
    pub fn downlink(downlink: &ComplexMatrix, beams: &ComplexMatrix) -> Result<Self> {
        check_beams(beams, downlink.cols())?;
        let y = downlink.mul(beams)?;
        let (users, streams) = (y.rows(), y.cols());
        let mut data = vec![0.0; streams * users];
        for k in 0..users {
            for m in 0..streams {
                data[m * users + k] = y[(k, m)].norm_sqr();
            }
        }
        Ok(Self { streams, users, data })
    }

    #[inline]
    pub fn get(&self, stream: usize, user: usize) -> f64 {
        self.data[stream * self.users + user]
    }

    pub fn streams(&self) -> usize {
        self.streams
    }

    pub fn users(&self) -> usize {
        self.users
    }

    /// Whether every cross-beam projection of `user` away from `stream` is within `eps`.
    pub fn cross_beams_within(&self, stream: usize, user: usize, eps: f64) -> bool {
        (0..self.streams).all(|r| r == stream || self.get(r, user) <= eps)
    }
}

fn check_beams(beams: &ComplexMatrix, antennas: usize) -> Result<()> {
    if beams.rows() != antennas || beams.cols() != antennas {
        return Err(Error::ShapeMismatch(format!(
            "beamforming matrix is {}x{}, expected {antennas}x{antennas}",
            beams.rows(),
            beams.cols()
        )));
    }
    Ok(())
}

fn greedy_assign(gains: &BeamGains, eligible: impl Fn(usize, usize) -> bool) -> Result<LinkSchedule> {
    let (streams, users) = (gains.streams(), gains.users());
    if users < streams {
        return Err(Error::TooFewUsers { streams, users });
    }
    let mut taken = vec![false; users];
    let mut out = LinkSchedule { users: Vec::with_capacity(streams), fallback: Vec::with_capacity(streams) };
    for m in 0..streams {
        let best = |filter: &dyn Fn(usize) -> bool| {
            let mut best: Option<(usize, f64)> = None;
            for k in (0..users).filter(|&k| !taken[k] && filter(k)) {
                let g = gains.get(m, k);
                if best.is_none_or(|(_, b)| g > b) {
                    best = Some((k, g));
                }
            }
            best.map(|(k, _)| k)
        };
        let (user, fell_back) = match best(&|k| eligible(m, k)) {
            Some(k) => (k, false),
            None => (best(&|_| true).expect("users >= streams"), true),
        };
        taken[user] = true;
        out.users.push(user);
        out.fallback.push(fell_back);
    }
    Ok(out)
}

/// Uplink stage: assigns one user per receive beam of `beams` (`Φ̄`).
pub fn schedule_uplink(uplink: &ComplexMatrix, beams: &ComplexMatrix, eps: f64) -> Result<LinkSchedule> {
    let gains = BeamGains::uplink(uplink, beams)?;
    greedy_assign(&gains, |m, k| gains.cross_beams_within(m, k, eps))
}

/// Downlink stage: assigns one user per transmit beam of `beams` (`Φ`), given
/// the scheduled uplink users and their interference columns.
pub fn schedule_downlink(
    downlink: &ComplexMatrix,
    interference: &InterferenceColumns,
    beams: &ComplexMatrix,
    uplink_users: &[usize],
    eps: f64,
) -> Result<LinkSchedule> {
    let gains = BeamGains::downlink(downlink, beams)?;
    let columns: Vec<&[Complex64]> = uplink_users
        .iter()
        .map(|j| interference.get(j).map(Vec::as_slice).ok_or(Error::MissingInterferenceColumn(*j)))
        .collect::<Result<_>>()?;
    if let Some(col) = columns.iter().find(|c| c.len() != gains.users()) {
        return Err(Error::ShapeMismatch(format!(
            "interference column has {} entries for {} users",
            col.len(),
            gains.users()
        )));
    }
    let quiet: Vec<bool> =
        (0..gains.users()).map(|k| columns.iter().all(|col| col[k].norm_sqr() <= eps)).collect();
    greedy_assign(&gains, |m, k| quiet[k] && gains.cross_beams_within(m, k, eps))
}
