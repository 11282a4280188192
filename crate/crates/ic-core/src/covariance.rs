use num_complex::Complex64;

use crate::beamformer::{BeamformerSet, PowerAllocation};
use crate::channel::ChannelSet;
use crate::error::CoreError;
use crate::linalg::{self, CMat, CVec};

/// Signal and interference covariances for one (channel, filter, power)
/// triple.
///
/// Per user `k`: `r_user` is the full own-signal covariance, `q_user` the
/// inter-user interference covariance and `b_user = q_user + I` the
/// interference-plus-noise matrix that excludes intra-user streams.
///
/// Per stream `(k, l)`: `r_stream` is the powered own-stream covariance,
/// `r_dir` its power-free direction matrix, and `b_stream` the
/// interference-plus-noise matrix that counts the user's other streams as
/// interference.
#[derive(Debug, Clone)]
pub struct CovarianceBundle {
    pub r_user: Vec<CMat>,
    pub q_user: Vec<CMat>,
    pub b_user: Vec<CMat>,
    pub r_stream: Vec<Vec<CMat>>,
    pub r_dir: Vec<Vec<CMat>>,
    pub b_stream: Vec<Vec<CMat>>,
}

impl CovarianceBundle {
    pub fn users(&self) -> usize {
        self.r_user.len()
    }

    pub fn streams(&self, k: usize) -> usize {
        self.r_stream[k].len()
    }

    /// Hermitian-defect check on every stored matrix.
    pub fn max_hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for m in self.r_user.iter().chain(&self.q_user).chain(&self.b_user) {
            worst = worst.max(linalg::hermitian_defect(m));
        }
        for row in self.r_stream.iter().chain(&self.r_dir).chain(&self.b_stream) {
            for m in row {
                worst = worst.max(linalg::hermitian_defect(m));
            }
        }
        worst
    }
}

/// Assemble every covariance used by the SINR definitions and the
/// beamforming updates.
///
/// All matrices are built as sums of outer products, so Hermitian symmetry
/// and positive semidefiniteness hold by construction; the noise identity
/// keeps every `B` matrix positive definite.
pub fn assemble_covariances(
    ch: &ChannelSet,
    bf: &BeamformerSet,
    pw: &PowerAllocation,
) -> Result<CovarianceBundle, CoreError> {
    let users = ch.users();
    if bf.tx.len() != users || pw.p.len() != users {
        return Err(CoreError::Config(format!(
            "covariance assembly: {} users in channels, {} in filters, {} in powers",
            users,
            bf.tx.len(),
            pw.p.len()
        )));
    }
    for k in 0..users {
        for l in 0..users {
            if ch.h[k][l].ncols() != bf.tx[l].nrows() {
                return Err(CoreError::Config(format!(
                    "H[{k}][{l}] has {} columns but tx filter {l} has {} rows",
                    ch.h[k][l].ncols(),
                    bf.tx[l].nrows()
                )));
            }
        }
        if bf.tx[k].ncols() != pw.p[k].len() || bf.rx[k].ncols() != pw.p[k].len() {
            return Err(CoreError::Config(format!(
                "user {k}: stream counts disagree between filters and powers"
            )));
        }
    }

    let mut r_user = Vec::with_capacity(users);
    let mut q_user = Vec::with_capacity(users);
    let mut b_user = Vec::with_capacity(users);
    let mut r_stream = Vec::with_capacity(users);
    let mut r_dir = Vec::with_capacity(users);
    let mut b_stream = Vec::with_capacity(users);

    for k in 0..users {
        let n_k = ch.h[k][k].nrows();
        let d_k = bf.tx[k].ncols();

        // Inter-user interference: sum of powered outer products.
        let mut q = CMat::zeros(n_k, n_k);
        for j in 0..users {
            if j == k {
                continue;
            }
            for m in 0..bf.tx[j].ncols() {
                let col: CVec = &ch.h[k][j] * bf.tx[j].column(m);
                q += linalg::outer(&col) * Complex64::new(pw.p[j][m], 0.0);
            }
        }
        let b = &q + linalg::identity(n_k);

        // Own-stream directions through the direct link.
        let own: Vec<CVec> = (0..d_k).map(|l| &ch.h[k][k] * bf.tx[k].column(l)).collect();
        let own_outer: Vec<CMat> = own.iter().map(linalg::outer).collect();

        let mut r = CMat::zeros(n_k, n_k);
        for l in 0..d_k {
            r += &own_outer[l] * Complex64::new(pw.p[k][l], 0.0);
        }

        let mut rs = Vec::with_capacity(d_k);
        let mut rd = Vec::with_capacity(d_k);
        let mut bs = Vec::with_capacity(d_k);
        for l in 0..d_k {
            rd.push(own_outer[l].clone());
            rs.push(&own_outer[l] * Complex64::new(pw.p[k][l], 0.0));
            // Intra-user interference from the user's other streams.
            let mut b_sf = b.clone();
            for m in 0..d_k {
                if m != l {
                    b_sf += &own_outer[m] * Complex64::new(pw.p[k][m], 0.0);
                }
            }
            bs.push(b_sf);
        }

        r_user.push(r);
        q_user.push(q);
        b_user.push(b);
        r_stream.push(rs);
        r_dir.push(rd);
        b_stream.push(bs);
    }

    Ok(CovarianceBundle {
        r_user,
        q_user,
        b_user,
        r_stream,
        r_dir,
        b_stream,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::generate_channels;
    use crate::config::SystemConfig;
    use crate::linalg::identity;

    /// Brute-force oracle: every covariance entry computed with explicit
    /// scalar loops over antennas and streams, independent of the matrix
    /// implementation above.
    mod oracle {
        use super::*;

        fn entry(m: &CMat, a: usize, b: usize) -> Complex64 {
            m[(a, b)]
        }

        /// (H_kj u_{j,m})_a computed entrywise.
        fn prop(ch: &ChannelSet, bf: &BeamformerSet, k: usize, j: usize, m: usize, a: usize) -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..ch.h[k][j].ncols() {
                acc += entry(&ch.h[k][j], a, t) * bf.tx[j][(t, m)];
            }
            acc
        }

        pub fn q_user(ch: &ChannelSet, bf: &BeamformerSet, pw: &PowerAllocation, k: usize) -> CMat {
            let n = ch.h[k][k].nrows();
            let mut out = CMat::zeros(n, n);
            for a in 0..n {
                for b in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..ch.users() {
                        if j == k {
                            continue;
                        }
                        for m in 0..bf.tx[j].ncols() {
                            let fa = prop(ch, bf, k, j, m, a);
                            let fb = prop(ch, bf, k, j, m, b);
                            acc += fa * fb.conj() * pw.p[j][m];
                        }
                    }
                    out[(a, b)] = acc;
                }
            }
            out
        }

        pub fn r_user(ch: &ChannelSet, bf: &BeamformerSet, pw: &PowerAllocation, k: usize) -> CMat {
            let n = ch.h[k][k].nrows();
            let mut out = CMat::zeros(n, n);
            for a in 0..n {
                for b in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for m in 0..bf.tx[k].ncols() {
                        let fa = prop(ch, bf, k, k, m, a);
                        let fb = prop(ch, bf, k, k, m, b);
                        acc += fa * fb.conj() * pw.p[k][m];
                    }
                    out[(a, b)] = acc;
                }
            }
            out
        }

        pub fn b_stream(
            ch: &ChannelSet,
            bf: &BeamformerSet,
            pw: &PowerAllocation,
            k: usize,
            l: usize,
        ) -> CMat {
            let n = ch.h[k][k].nrows();
            let mut out = CMat::zeros(n, n);
            for a in 0..n {
                for b in 0..n {
                    let mut acc = if a == b {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    for j in 0..ch.users() {
                        for m in 0..bf.tx[j].ncols() {
                            if j == k && m == l {
                                continue;
                            }
                            let fa = prop(ch, bf, k, j, m, a);
                            let fb = prop(ch, bf, k, j, m, b);
                            acc += fa * fb.conj() * pw.p[j][m];
                        }
                    }
                    out[(a, b)] = acc;
                }
            }
            out
        }
    }

    fn random_setup(seed: u64) -> (SystemConfig, ChannelSet, BeamformerSet, PowerAllocation) {
        use rand::Rng;
        let cfg = SystemConfig::symmetric(2, 3, 3, 2, vec![10.0], seed);
        let ch = generate_channels(&cfg, 0);
        let mut rng = crate::seeding::rng_for(ch.seed, crate::seeding::Purpose::TxInit, 0);
        let mut mk = |rows: usize, cols: usize| {
            let mut m = CMat::from_fn(rows, cols, |_, _| {
                Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            linalg::normalize_columns(&mut m);
            m
        };
        let bf = BeamformerSet {
            tx: vec![mk(3, 2), mk(3, 2)],
            rx: vec![mk(3, 2), mk(3, 2)],
        };
        let budgets = cfg.budgets(10.0);
        let pw = PowerAllocation::equal_split(&cfg, &budgets);
        (cfg, ch, bf, pw)
    }

    #[test]
    fn single_user_single_stream_has_identity_noise() {
        let cfg = SystemConfig::symmetric(1, 2, 2, 1, vec![0.0], 3);
        let ch = generate_channels(&cfg, 0);
        let mut tx = CMat::zeros(2, 1);
        tx[(0, 0)] = Complex64::new(1.0, 0.0);
        let bf = BeamformerSet { tx: vec![tx.clone()], rx: vec![tx] };
        let pw = PowerAllocation { p: vec![vec![1.0]] };
        let cov = assemble_covariances(&ch, &bf, &pw).unwrap();
        assert!(cov.q_user[0].norm() == 0.0);
        assert!((cov.b_user[0].clone() - identity(2)).norm() < 1e-15);
    }

    #[test]
    fn zero_powers_leave_only_noise() {
        let (cfg, ch, bf, _) = random_setup(17);
        let pw = PowerAllocation::zeros(&cfg);
        let cov = assemble_covariances(&ch, &bf, &pw).unwrap();
        for k in 0..2 {
            assert!((cov.b_user[k].clone() - identity(3)).norm() < 1e-15);
            assert!(cov.r_user[k].norm() == 0.0);
            for l in 0..2 {
                assert!((cov.b_stream[k][l].clone() - identity(3)).norm() < 1e-15);
                assert!(cov.r_stream[k][l].norm() == 0.0);
            }
        }
    }

    #[test]
    fn two_user_scalar_hand_expansion() {
        // h11 = h22 = 1, h12 = h21 = g: B_1 = 1 + g^2 p_2.
        let g = 0.5f64.sqrt();
        let one = Complex64::new(1.0, 0.0);
        let gc = Complex64::new(g, 0.0);
        let h = vec![
            vec![CMat::from_element(1, 1, one), CMat::from_element(1, 1, gc)],
            vec![CMat::from_element(1, 1, gc), CMat::from_element(1, 1, one)],
        ];
        let ch = ChannelSet { h, seed: 0 };
        let u = CMat::from_element(1, 1, one);
        let bf = BeamformerSet { tx: vec![u.clone(), u.clone()], rx: vec![u.clone(), u] };
        let pw = PowerAllocation { p: vec![vec![2.0], vec![2.0]] };
        let cov = assemble_covariances(&ch, &bf, &pw).unwrap();
        let b1 = cov.b_user[0][(0, 0)].re;
        assert!((b1 - (1.0 + 0.5 * 2.0)).abs() < 1e-12);
        let r1 = cov.r_stream[0][0][(0, 0)].re;
        assert!((r1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn matches_scalar_loop_oracle() {
        for seed in [1u64, 2, 3, 4, 5] {
            let (_, ch, bf, pw) = random_setup(seed);
            let cov = assemble_covariances(&ch, &bf, &pw).unwrap();
            for k in 0..2 {
                let q = oracle::q_user(&ch, &bf, &pw, k);
                let r = oracle::r_user(&ch, &bf, &pw, k);
                assert!((q - &cov.q_user[k]).norm() < 1e-9);
                assert!((r - &cov.r_user[k]).norm() < 1e-9);
                for l in 0..2 {
                    let bsf = oracle::b_stream(&ch, &bf, &pw, k, l);
                    assert!((bsf - &cov.b_stream[k][l]).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn stream_minus_user_noise_gap_is_psd() {
        // B_{k,l} - B_k is the user's own other-stream covariance.
        let (_, ch, bf, pw) = random_setup(23);
        let cov = assemble_covariances(&ch, &bf, &pw).unwrap();
        for k in 0..2 {
            for l in 0..2 {
                let diff = cov.b_stream[k][l].clone() - cov.b_user[k].clone();
                assert!(linalg::hermitian_defect(&diff) < 1e-10);
                let eig = linalg::hermitian_eigen(&diff).unwrap();
                assert!(eig.values[0] > -1e-10);
            }
        }
    }

    #[test]
    fn noise_floor_bounds_b_eigenvalues() {
        let (_, ch, bf, pw) = random_setup(29);
        let cov = assemble_covariances(&ch, &bf, &pw).unwrap();
        for k in 0..2 {
            assert!(cov.q_user[k].trace().re >= 0.0);
            let eig = linalg::hermitian_eigen(&cov.b_user[k]).unwrap();
            assert!(eig.values[0] >= 1.0 - 1e-10);
        }
        assert!(cov.max_hermitian_defect() < 1e-10);
    }

    #[test]
    fn dimension_mismatch_is_config_error() {
        let (_, ch, bf, _) = random_setup(31);
        let bad_pw = PowerAllocation { p: vec![vec![1.0], vec![1.0, 1.0]] };
        match assemble_covariances(&ch, &bf, &bad_pw) {
            Err(CoreError::Config(_)) => {}
            other => panic!("expected config error, got {other:?}"),
        }
    }
}
