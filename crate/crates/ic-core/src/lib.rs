//! Core domain types and numerics for K-user MIMO interference channel
//! simulation.
//!
//! This crate owns everything the higher-level algorithm crates share:
//! the system configuration, seeded channel generation, the reciprocal
//! (uplink) network construction, per-stream/per-user covariance assembly,
//! and a small complex linear-algebra layer on top of `nalgebra`.
//!
//! Conventions used throughout the workspace:
//! - noise is unit variance at every receiver, so SNR in dB maps directly
//!   to a per-user power budget `10^(snr_db/10)`;
//! - all filter matrices have unit-norm columns, with per-stream powers
//!   carried separately in [`PowerAllocation`];
//! - every random draw is keyed by `(master_seed, trial_index)` plus a
//!   purpose tag, so trials are reproducible regardless of execution order.

pub mod beamformer;
pub mod chanfile;
pub mod channel;
pub mod config;
pub mod covariance;
pub mod error;
pub mod linalg;
pub mod seeding;

pub use beamformer::{BeamformerSet, PowerAllocation};
pub use channel::{generate_channels, reciprocal_channels, ChannelSet};
pub use config::SystemConfig;
pub use covariance::{assemble_covariances, CovarianceBundle};
pub use error::CoreError;
pub use linalg::{CMat, CVec};

/// Tolerance for Hermitian / unit-norm structural checks.
pub const STRUCT_TOL: f64 = 1e-10;

/// Default convergence tolerance for iterative algorithms.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Slack allowed when checking power-budget feasibility.
pub const BUDGET_SLACK: f64 = 1e-9;
