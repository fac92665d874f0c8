//! Opportunistic joint uplink/downlink scheduling for a full-duplex
//! multi-antenna base station serving half-duplex users, together with the
//! sum-capacity benchmarks it is measured against, clustered-network bounds
//! and a reproducible Monte Carlo harness.
//!
//! Rates are in nats. User and stream indices are zero-based.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod channel;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod rates;
pub mod scheduler;
pub mod streams;

pub use channel::{ChannelRealization, ClusteredNetwork, InterferenceColumns, ModelKind, NetworkConfig};
pub use error::{Error, Result};
pub use experiments::{BenchmarkMode, BenchmarkPolicy, Cell, Column, ExperimentTable, TrialReport};
pub use linalg::ComplexMatrix;
pub use rates::{Benchmarks, RateReport};
pub use scheduler::{EpsilonSchedule, LinkSchedule, Schedule};
