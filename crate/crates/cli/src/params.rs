//! Flat parameter set shared by the config file and the command-line flags.

use std::path::Path;

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Every key a config file may carry. Flags of the same name override it.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Users per link direction.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Base-station antennas (clusters for clustered runs).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Total downlink power (linear).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Per-user uplink power (linear).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pbar: Option<f64>,
    /// Decaying threshold constant: eps_n = c / ln n.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_c: Option<f64>,
    /// Constant threshold; takes precedence over --eps-c.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_const: Option<f64>,
    /// homogeneous | clustered
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    /// Cluster channel magnitude.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    /// Intra-cluster interference magnitude.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Trial index for single-trial.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_list: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_list: Option<Vec<f64>>,
    /// Gap threshold in nats.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Force zero intra-cluster interference in clustered-sweep.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_g: Option<bool>,
    /// Network draws for candidate-prob.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub draws: Option<usize>,
    /// MAC-M enumeration cap in subsets.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset_cap: Option<u64>,
}

macro_rules! overlay {
    ($flags:expr, $file:expr, $($field:ident),*) => {
        Params { $($field: $flags.$field.clone().or_else(|| $file.$field.clone()),)* }
    };
}

impl Params {
    /// `self` (flags) over `file`.
    pub fn over(&self, file: &Params) -> Params {
        overlay!(self, file, n, m, p, pbar, eps_c, eps_const, model, h, g, seed, trials, trial, n_list, m_list,
            snr_list, delta, alpha, beta, zero_g, draws, subset_cap)
    }

    /// Reads a flat config file, or the resolved config of a run manifest.
    pub fn load(path: &Path) -> Result<Params, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{} is not valid JSON: {e}", path.display())))?;
        let value = match value {
            serde_json::Value::Object(mut map) if map.contains_key("resolved_config") => {
                map.remove("resolved_config").expect("checked")
            }
            other => other,
        };
        serde_json::from_value(value).map_err(|e| CliError::Config(format!("malformed config {}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win() {
        let file = Params { n: Some(4), p: Some(1.0), ..Default::default() };
        let flags = Params { n: Some(8), ..Default::default() };
        let merged = flags.over(&file);
        assert_eq!(merged.n, Some(8));
        assert_eq!(merged.p, Some(1.0));
    }

    #[test]
    fn unknown_keys_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"n": 4, "bogus": 1}"#).unwrap();
        assert!(matches!(Params::load(&path), Err(CliError::Config(_))));
        std::fs::write(&path, r#"{"resolved_config": {"n": 4}, "seed": 3}"#).unwrap();
        assert_eq!(Params::load(&path).unwrap().n, Some(4));
    }
}
