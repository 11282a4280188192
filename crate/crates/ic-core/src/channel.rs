use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::config::SystemConfig;
use crate::error::CoreError;
use crate::linalg::CMat;
use crate::seeding::{realization_seed, rng_for, Purpose};

/// All `K x K` cross-channel matrices of one realization.
///
/// `h[k][l]` is the `N_k x M_l` matrix from transmitter `l` to receiver
/// `k`. Entries are i.i.d. zero-mean unit-variance complex Gaussian (real
/// and imaginary parts each variance 1/2).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub h: Vec<Vec<CMat>>,
    /// The per-realization seed that produced the coefficients.
    pub seed: u64,
}

impl ChannelSet {
    pub fn users(&self) -> usize {
        self.h.len()
    }

    /// Direct link `H_kk`.
    pub fn direct(&self, k: usize) -> &CMat {
        &self.h[k][k]
    }

    /// Cross or direct link from transmitter `l` to receiver `k`.
    pub fn link(&self, k: usize, l: usize) -> &CMat {
        &self.h[k][l]
    }

    pub fn validate_against(&self, config: &SystemConfig) -> Result<(), CoreError> {
        if self.h.len() != config.users {
            return Err(CoreError::DimensionMismatch(format!(
                "channel set has {} receivers, config has {}",
                self.h.len(),
                config.users
            )));
        }
        for (k, row) in self.h.iter().enumerate() {
            if row.len() != config.users {
                return Err(CoreError::DimensionMismatch(format!(
                    "receiver {k} sees {} transmitters, config has {}",
                    row.len(),
                    config.users
                )));
            }
            for (l, m) in row.iter().enumerate() {
                let want = (config.rx_antennas[k], config.tx_antennas[l]);
                if m.shape() != want {
                    return Err(CoreError::DimensionMismatch(format!(
                        "H[{k}][{l}] is {}x{}, expected {}x{}",
                        m.nrows(),
                        m.ncols(),
                        want.0,
                        want.1
                    )));
                }
                if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(CoreError::numerical(format!(
                        "H[{k}][{l}] contains non-finite entries"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Draw one channel realization for `trial_index`.
///
/// The realization seed is derived from `(master_seed, trial_index)` with a
/// counter-based mix, so trials reproduce independently of execution order.
pub fn generate_channels(config: &SystemConfig, trial_index: u64) -> ChannelSet {
    let seed = realization_seed(config.master_seed, trial_index);
    let mut rng = rng_for(seed, Purpose::Channels, 0);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let h = (0..config.users)
        .map(|k| {
            (0..config.users)
                .map(|l| {
                    CMat::from_fn(config.rx_antennas[k], config.tx_antennas[l], |_, _| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex64::new(re * scale, im * scale)
                    })
                })
                .collect()
        })
        .collect();
    ChannelSet { h, seed }
}

/// The reciprocal (uplink) network: `H'[k][l] = H[l][k]†`, with transmit
/// and receive roles swapped by the caller.
pub fn reciprocal_channels(ch: &ChannelSet) -> ChannelSet {
    let users = ch.users();
    let h = (0..users)
        .map(|k| (0..users).map(|l| ch.h[l][k].adjoint()).collect())
        .collect();
    ChannelSet { h, seed: ch.seed }
}
