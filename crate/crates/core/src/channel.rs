//! Channel realizations for the homogeneous i.i.d. Rayleigh model and the
//! `(M, h, g)`-clustered model.
//!
//! User indices are zero-based throughout the crate.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{sample_cn, sample_gaussian_matrix, ComplexMatrix};
use crate::scheduler::EpsilonSchedule;
use crate::streams::StreamKey;

pub(crate) const LABEL_UPLINK: &str = "channel/uplink";
pub(crate) const LABEL_DOWNLINK: &str = "channel/downlink";
pub(crate) const LABEL_INTERFERENCE: &str = "channel/interference";

/// Fading model of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ModelKind {
    Homogeneous,
    /// All-or-none clustered model with channel magnitude `h` and intra-cluster
    /// interference magnitude `g`.
    Clustered { h: f64, g: f64 },
}

/// Scenario parameters shared by every experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Number of uplink users, equal to the number of downlink users.
    pub n: usize,
    /// Base-station antenna count.
    pub antennas: usize,
    /// Total downlink block power (linear).
    pub downlink_power: f64,
    /// Per-user uplink block power (linear).
    pub uplink_power: f64,
    pub epsilon: EpsilonSchedule,
    pub model: ModelKind,
    pub seed: u64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            n: 16,
            antennas: 2,
            downlink_power: 10.0,
            uplink_power: 10.0,
            epsilon: EpsilonSchedule::Decaying { c: 1.0 },
            model: ModelKind::Homogeneous,
            seed: 0,
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.antennas < 1 {
            return Err(Error::InvalidParameter("antenna count must be >= 1".into()));
        }
        if self.n < self.antennas {
            return Err(Error::TooFewUsers { streams: self.antennas, users: self.n });
        }
        if !(self.downlink_power > 0.0) || !self.downlink_power.is_finite() {
            return Err(Error::InvalidParameter(format!("P must be > 0, got {}", self.downlink_power)));
        }
        if !(self.uplink_power > 0.0) || !self.uplink_power.is_finite() {
            return Err(Error::InvalidParameter(format!("P_bar must be > 0, got {}", self.uplink_power)));
        }
        self.epsilon.validate()?;
        if let ModelKind::Clustered { h, g } = self.model {
            if !(h > 0.0) || !(g >= 0.0) {
                return Err(Error::InvalidParameter(format!("clustered model needs h > 0, g >= 0; got h={h}, g={g}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum InterferenceSource {
    Gaussian { seed: u64, trial: u64 },
    Clustered { g: f64, membership: Vec<usize> },
}

/// One draw of the link-gain triple: uplink `M × n`, downlink `n × M` (row `k`
/// is `h_k*`) and the uplink-to-downlink interference matrix, whose columns
/// are generated on first use.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    uplink: ComplexMatrix,
    downlink: ComplexMatrix,
    interference: InterferenceSource,
    columns: Vec<OnceLock<Vec<Complex64>>>,
    model: ModelKind,
}

impl ChannelRealization {
    pub fn uplink(&self) -> &ComplexMatrix {
        &self.uplink
    }

    pub fn downlink(&self) -> &ComplexMatrix {
        &self.downlink
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn users(&self) -> usize {
        self.uplink.cols()
    }

    pub fn antennas(&self) -> usize {
        self.uplink.rows()
    }

    /// Column `j` of the interference matrix: the gains from uplink user `j`
    /// to every downlink user. Generated once from `(seed, trial, j)` and cached.
    pub fn interference_column(&self, j: usize) -> Result<&[Complex64]> {
        let n = self.users();
        let cell = self.columns.get(j).ok_or(Error::IndexOutOfRange { index: j, len: n })?;
        Ok(cell.get_or_init(|| match &self.interference {
            InterferenceSource::Gaussian { seed, trial } => {
                let mut rng = StreamKey::new(*seed, *trial, LABEL_INTERFERENCE).sub_rng(j as u64);
                (0..n).map(|_| sample_cn(&mut rng)).collect()
            }
            InterferenceSource::Clustered { g, membership } => membership
                .iter()
                .map(|&c| if c == membership[j] { Complex64::new(*g, 0.0) } else { Complex64::new(0.0, 0.0) })
                .collect(),
        }))
    }

    /// Interference columns for a set of uplink users, keyed by user index.
    pub fn interference_columns(&self, users: &[usize]) -> Result<InterferenceColumns> {
        users.iter().map(|&j| Ok((j, self.interference_column(j)?.to_vec()))).collect()
    }

    /// Number of interference columns materialized so far.
    pub fn cached_columns(&self) -> usize {
        self.columns.iter().filter(|c| c.get().is_some()).count()
    }
}

/// Interference columns `g_{·j}` keyed by uplink user `j`.
pub type InterferenceColumns = std::collections::BTreeMap<usize, Vec<Complex64>>;

/// Samples the homogeneous model: every gain i.i.d. CN(0,1).
pub fn sample_homogeneous(config: &NetworkConfig, trial: u64) -> Result<ChannelRealization> {
    if config.model != ModelKind::Homogeneous {
        return Err(Error::InvalidParameter("sample_homogeneous needs the homogeneous model".into()));
    }
    config.validate()?;
    let (n, m) = (config.n, config.antennas);
    let uplink = sample_gaussian_matrix(m, n, &mut StreamKey::new(config.seed, trial, LABEL_UPLINK).rng());
    let downlink = sample_gaussian_matrix(n, m, &mut StreamKey::new(config.seed, trial, LABEL_DOWNLINK).rng());
    Ok(ChannelRealization {
        uplink,
        downlink,
        interference: InterferenceSource::Gaussian { seed: config.seed, trial },
        columns: (0..n).map(|_| OnceLock::new()).collect(),
        model: ModelKind::Homogeneous,
    })
}

/// Samples (or, for the clustered model, builds) the realization for a trial.
pub fn sample_realization(config: &NetworkConfig, trial: u64) -> Result<ChannelRealization> {
    match config.model {
        ModelKind::Homogeneous => sample_homogeneous(config, trial),
        ModelKind::Clustered { h, g } => {
            config.validate()?;
            Ok(make_clustered(config.antennas, config.n, h, g)?.realization())
        }
    }
}

/// `(M, h, g)`-clustered network with round-robin membership.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteredNetwork {
    pub clusters: usize,
    pub h: f64,
    pub g: f64,
    /// `membership[u]` is the zero-based cluster of user `u`.
    pub membership: Vec<usize>,
}

/// Distributes `n` users over `clusters` clusters, user `u` going to cluster `u mod M`.
pub fn make_clustered(clusters: usize, n: usize, h: f64, g: f64) -> Result<ClusteredNetwork> {
    if clusters < 1 {
        return Err(Error::InvalidParameter("cluster count must be >= 1".into()));
    }
    if n < clusters {
        return Err(Error::TooFewUsers { streams: clusters, users: n });
    }
    if !(h > 0.0) || !(g >= 0.0) || !h.is_finite() || !g.is_finite() {
        return Err(Error::InvalidParameter(format!("need h > 0 and g >= 0, got h={h}, g={g}")));
    }
    Ok(ClusteredNetwork { clusters, h, g, membership: (0..n).map(|u| u % clusters).collect() })
}

impl ClusteredNetwork {
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.clusters];
        for &c in &self.membership {
            sizes[c] += 1;
        }
        sizes
    }

    /// Cluster `i` uses direction `h·e_i`; both links share it.
    pub fn realization(&self) -> ChannelRealization {
        let (m, n) = (self.clusters, self.membership.len());
        let mut uplink = ComplexMatrix::zeros(m, n);
        let mut downlink = ComplexMatrix::zeros(n, m);
        for (u, &c) in self.membership.iter().enumerate() {
            uplink[(c, u)] = Complex64::new(self.h, 0.0);
            downlink[(u, c)] = Complex64::new(self.h, 0.0);
        }
        ChannelRealization {
            uplink,
            downlink,
            interference: InterferenceSource::Clustered { g: self.g, membership: self.membership.clone() },
            columns: (0..n).map(|_| OnceLock::new()).collect(),
            model: ModelKind::Clustered { h: self.h, g: self.g },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(n: usize, m: usize) -> NetworkConfig {
        NetworkConfig { n, antennas: m, seed: 11, ..Default::default() }
    }

    #[test]
    fn homogeneous_is_deterministic_per_trial() {
        let cfg = config(4, 2);
        let a = sample_homogeneous(&cfg, 0).unwrap();
        let b = sample_homogeneous(&cfg, 0).unwrap();
        assert_eq!(a.uplink(), b.uplink());
        assert_eq!(a.downlink(), b.downlink());
        let c = sample_homogeneous(&cfg, 1).unwrap();
        assert_ne!(a.uplink(), c.uplink());
        assert_eq!(a.uplink().rows(), 2);
        assert_eq!(a.downlink().rows(), 4);
        assert_eq!(a.cached_columns(), 0);
    }

    #[test]
    fn homogeneous_unit_variance() {
        let real = sample_homogeneous(&config(1000, 2), 0).unwrap();
        let mean = real.uplink().as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>() / 2000.0;
        assert!((mean - 1.0).abs() <= 3.0 / 2000f64.sqrt(), "mean {mean}");
    }

    #[test]
    fn interference_column_caches_and_bounds() {
        let real = sample_homogeneous(&config(8, 2), 3).unwrap();
        let first = real.interference_column(5).unwrap().to_vec();
        assert_eq!(first, real.interference_column(5).unwrap());
        assert_eq!(real.cached_columns(), 1);
        // Same (seed, trial, j) in a fresh realization gives the same column.
        let again = sample_homogeneous(&config(8, 2), 3).unwrap();
        assert_eq!(first, again.interference_column(5).unwrap());
        assert_eq!(real.interference_column(8), Err(Error::IndexOutOfRange { index: 8, len: 8 }));
    }

    #[test]
    fn interference_columns_uncorrelated() {
        let n = 10_000;
        let real = sample_homogeneous(&config(n, 1), 0).unwrap();
        let a: Vec<f64> = real.interference_column(0).unwrap().iter().map(|z| z.norm()).collect();
        let b: Vec<f64> = real.interference_column(1).unwrap().iter().map(|z| z.norm()).collect();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (ma, mb) = (mean(&a), mean(&b));
        let cov = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / n as f64;
        let var = |v: &[f64], m: f64| v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n as f64;
        let corr = cov / (var(&a, ma) * var(&b, mb)).sqrt();
        assert!(corr.abs() <= 3.0 / (n as f64).sqrt(), "corr {corr}");
    }

    #[test]
    fn clustered_round_robin() {
        assert_eq!(make_clustered(2, 4, 1.0, 0.5).unwrap().cluster_sizes(), vec![2, 2]);
        assert_eq!(make_clustered(2, 2, 1.0, 0.5).unwrap().cluster_sizes(), vec![1, 1]);
        let single = make_clustered(1, 3, 1.0, 0.0).unwrap();
        assert_eq!(single.cluster_sizes(), vec![3]);
        let real = single.realization();
        assert!(real.interference_column(2).unwrap().iter().all(|z| z.norm() == 0.0));
        assert!(matches!(make_clustered(3, 2, 1.0, 0.0), Err(Error::TooFewUsers { .. })));
    }

    #[test]
    fn clustered_all_or_none_and_orthogonal() {
        let net = make_clustered(3, 7, 2.0, 0.5);
        let real = net.unwrap().realization();
        let up = real.uplink();
        for a in 0..7 {
            for b in 0..7 {
                let dot: Complex64 = (0..3).map(|r| up[(r, a)].conj() * up[(r, b)]).sum();
                let expect = if a % 3 == b % 3 { 4.0 } else { 0.0 };
                assert_eq!(dot, Complex64::new(expect, 0.0));
                let gab = real.interference_column(b).unwrap()[a].re;
                assert_eq!(gab, if a % 3 == b % 3 { 0.5 } else { 0.0 });
            }
        }
    }

    #[test]
    fn validation() {
        assert!(config(1, 2).validate().is_err());
        let mut cfg = config(4, 2);
        cfg.uplink_power = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = config(4, 2);
        cfg.model = ModelKind::Clustered { h: 1.0, g: 0.0 };
        assert!(sample_homogeneous(&cfg, 0).is_err());
        assert!(sample_realization(&cfg, 0).is_ok());
    }
}
