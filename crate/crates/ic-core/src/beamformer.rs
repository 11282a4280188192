use num_complex::Complex64;

use crate::config::SystemConfig;
use crate::error::CoreError;
use crate::linalg::CMat;
use crate::STRUCT_TOL;

/// Per-user transmit and receive filter matrices.
///
/// `tx[k]` is `M_k x d_k`, `rx[k]` is `N_k x d_k`; every column has unit
/// Euclidean norm (within [`STRUCT_TOL`]). Per-stream powers live in
/// [`PowerAllocation`], never inside the filters.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformerSet {
    pub tx: Vec<CMat>,
    pub rx: Vec<CMat>,
}

impl BeamformerSet {
    pub fn users(&self) -> usize {
        self.tx.len()
    }

    pub fn streams(&self, k: usize) -> usize {
        self.tx[k].ncols()
    }

    /// Transmit column for stream `(k, l)`.
    pub fn tx_col(&self, k: usize, l: usize) -> nalgebra::DVectorView<'_, Complex64> {
        self.tx[k].column(l)
    }

    /// Receive column for stream `(k, l)`.
    pub fn rx_col(&self, k: usize, l: usize) -> nalgebra::DVectorView<'_, Complex64> {
        self.rx[k].column(l)
    }

    pub fn validate_against(&self, config: &SystemConfig) -> Result<(), CoreError> {
        if self.tx.len() != config.users || self.rx.len() != config.users {
            return Err(CoreError::DimensionMismatch(
                "beamformer set user count does not match config".into(),
            ));
        }
        for k in 0..config.users {
            let (wt, wr) = (
                (config.tx_antennas[k], config.streams[k]),
                (config.rx_antennas[k], config.streams[k]),
            );
            if self.tx[k].shape() != wt || self.rx[k].shape() != wr {
                return Err(CoreError::DimensionMismatch(format!(
                    "user {k}: filter shapes {:?}/{:?}, expected {:?}/{:?}",
                    self.tx[k].shape(),
                    self.rx[k].shape(),
                    wt,
                    wr
                )));
            }
        }
        self.check_unit_columns()
    }

    /// Every column of every filter must have norm 1 within tolerance.
    pub fn check_unit_columns(&self) -> Result<(), CoreError> {
        for (side, mats) in [("tx", &self.tx), ("rx", &self.rx)] {
            for (k, m) in mats.iter().enumerate() {
                for j in 0..m.ncols() {
                    let n = m.column(j).norm();
                    if (n - 1.0).abs() > STRUCT_TOL {
                        return Err(CoreError::numerical(format!(
                            "{side} filter of user {k}, stream {j} has column norm {n}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Nonnegative per-sub-stream powers in linear (noise-normalized) units.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    pub p: Vec<Vec<f64>>,
}

impl PowerAllocation {
    /// Equal split of each user's budget over its streams.
    pub fn equal_split(config: &SystemConfig, budgets: &[f64]) -> Self {
        let p = (0..config.users)
            .map(|k| vec![budgets[k] / config.streams[k] as f64; config.streams[k]])
            .collect();
        PowerAllocation { p }
    }

    /// All-zero allocation with the same shape as `config`.
    pub fn zeros(config: &SystemConfig) -> Self {
        let p = (0..config.users).map(|k| vec![0.0; config.streams[k]]).collect();
        PowerAllocation { p }
    }

    pub fn user_total(&self, k: usize) -> f64 {
        self.p[k].iter().sum()
    }

    /// Stacked copy of all stream powers in (user, stream) order.
    pub fn flatten(&self) -> Vec<f64> {
        self.p.iter().flat_map(|row| row.iter().copied()).collect()
    }

    pub fn validate(&self, budgets: &[f64]) -> Result<(), CoreError> {
        for (k, row) in self.p.iter().enumerate() {
            for (l, &v) in row.iter().enumerate() {
                if !(v >= 0.0) {
                    return Err(CoreError::numerical(format!(
                        "power of stream ({k},{l}) is {v}"
                    )));
                }
            }
            let total = self.user_total(k);
            if total > budgets[k] + crate::BUDGET_SLACK {
                return Err(CoreError::numerical(format!(
                    "user {k} total power {total} exceeds budget {}",
                    budgets[k]
                )));
            }
        }
        Ok(())
    }
}
