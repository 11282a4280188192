use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Network dimensions and global simulation parameters for a K-user
/// interference channel.
///
/// User `k` has `tx_antennas[k]` transmit antennas, `rx_antennas[k]`
/// receive antennas and sends `streams[k]` independent streams. Noise is
/// unit variance everywhere, so `snr_db_points` double as per-user power
/// budgets via [`SystemConfig::budget`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub users: usize,
    pub tx_antennas: Vec<usize>,
    pub rx_antennas: Vec<usize>,
    pub streams: Vec<usize>,
    pub snr_db_points: Vec<f64>,
    /// Convergence tolerance used by the iterative algorithms.
    pub epsilon: f64,
    pub master_seed: u64,
}

impl SystemConfig {
    /// Symmetric `(M x N, d)^K` network, the shape used throughout the
    /// benchmarks, e.g. `symmetric(3, 4, 4, 2, ...)` for `(4x4,2)^3`.
    pub fn symmetric(
        users: usize,
        tx: usize,
        rx: usize,
        streams: usize,
        snr_db_points: Vec<f64>,
        master_seed: u64,
    ) -> Self {
        SystemConfig {
            users,
            tx_antennas: vec![tx; users],
            rx_antennas: vec![rx; users],
            streams: vec![streams; users],
            snr_db_points,
            epsilon: crate::DEFAULT_EPSILON,
            master_seed,
        }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if self.users == 0 {
            return Err(CoreError::config("user count must be at least 1"));
        }
        for (name, v) in [
            ("tx_antennas", &self.tx_antennas),
            ("rx_antennas", &self.rx_antennas),
            ("streams", &self.streams),
        ] {
            if v.len() != self.users {
                return Err(CoreError::config(format!(
                    "{name} has {} entries, expected {}",
                    v.len(),
                    self.users
                )));
            }
        }
        for k in 0..self.users {
            let max_d = self.tx_antennas[k].min(self.rx_antennas[k]);
            if self.streams[k] == 0 || self.streams[k] > max_d {
                return Err(CoreError::config(format!(
                    "user {k}: streams must satisfy 1 <= d <= min(M, N) = {max_d}, got {}",
                    self.streams[k]
                )));
            }
        }
        if self.snr_db_points.is_empty() {
            return Err(CoreError::config("snr_db_points must be nonempty"));
        }
        if !(self.epsilon > 0.0) {
            return Err(CoreError::config("epsilon must be positive"));
        }
        Ok(())
    }

    /// Per-user power budget at `snr_db`: noise is unit variance, so the
    /// budget is `10^(snr_db/10)` in linear units.
    pub fn budget(&self, snr_db: f64) -> f64 {
        10f64.powf(snr_db / 10.0)
    }

    /// Budgets for all users at one SNR point (identical under the unit
    /// noise model, kept per-user so downstream code never assumes it).
    pub fn budgets(&self, snr_db: f64) -> Vec<f64> {
        vec![self.budget(snr_db); self.users]
    }

    /// Total number of streams in the system.
    pub fn total_streams(&self) -> usize {
        self.streams.iter().sum()
    }
}
