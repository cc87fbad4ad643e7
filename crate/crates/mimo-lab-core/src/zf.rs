//! Zero-forcing precoding: the precoder itself plus the closed-form
//! effective SINR of the downlink when every base station zero-forces the
//! channel estimates of its own users.
//!
//! ZF inverts the estimated in-cell channel, so intra-cell interference
//! vanishes by construction and the residual impairments are estimation
//! error, pilot contamination (which survives unchanged, since the
//! contaminated estimates are collinear with the in-cell ones), and noise.
//! The closed form mirrors the MRT one but with the interference terms
//! traded for a `delta - K` degrees-of-freedom discount on the array gain.

use nalgebra::linalg::Cholesky;
use nalgebra::{DMatrix, Dyn};
use num_complex::Complex64;

use crate::config::NetworkConfig;
use crate::error::{Error, Result};

/// Condition-number proxy above which a Gram matrix is treated as
/// numerically rank deficient.
const MAX_CONDITION: f64 = 1e12;

/// Zero-forcing precoder `W = H (H^H H)^-1` for a tall matrix of per-user
/// channel estimate columns. `W` satisfies `H^H W = I`: each user's beam is
/// invisible to every other estimated channel.
///
/// Fails when the Gram matrix is not numerically positive definite or its
/// condition proxy (squared ratio of extreme Cholesky pivots) exceeds 1e12.
pub fn zf_precoder(estimates: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let k = estimates.ncols();
    if k == 0 {
        return Err(Error::InvalidConfig("precoder needs at least one user column".into()));
    }
    if estimates.nrows() < k {
        return Err(Error::Domain(format!(
            "zero forcing needs at least as many dimensions as users, got {}x{}",
            estimates.nrows(),
            k
        )));
    }
    let gram = estimates.adjoint() * estimates;
    let chol = checked_cholesky(gram)?;
    // W = H G^-1 computed column-block wise: solve G Y = H^H, then W = Y^H.
    let y = chol.solve(&estimates.adjoint());
    Ok(y.adjoint())
}

/// Cholesky factorization that rejects non-positive-definite and
/// ill-conditioned Gram matrices (squared ratio of extreme pivots above
/// 1e12) instead of returning garbage factors.
pub fn checked_cholesky(gram: DMatrix<Complex64>) -> Result<Cholesky<Complex64, Dyn>> {
    let k = gram.ncols();
    let chol = Cholesky::new(gram)
        .ok_or_else(|| Error::Numerical("estimate Gram matrix is not positive definite".into()))?;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for i in 0..k {
        let d = chol.l_dirty()[(i, i)].re;
        lo = lo.min(d);
        hi = hi.max(d);
    }
    if !(lo > 0.0) || (hi / lo).powi(2) > MAX_CONDITION {
        return Err(Error::Numerical(format!(
            "estimate Gram matrix is ill conditioned (proxy {:.3e})",
            (hi / lo).powi(2)
        )));
    }
    Ok(chol)
}

/// Received-signal power gain of power-normalized ZF: `M Q (delta - K) /
/// (delta K)`. This is the average beamforming gain left after spending
/// `K` of the `delta` estimated dimensions on nulling.
pub fn signal_gain(cfg: &NetworkConfig) -> Result<f64> {
    let delta = cfg.delta() as f64;
    let k = cfg.users_per_cell as f64;
    if delta <= k {
        return Err(Error::Domain(format!(
            "zero forcing needs delta > K, got delta = {delta}, K = {k}"
        )));
    }
    let m = cfg.antennas as f64;
    Ok(m * cfg.csi_quality() * (delta - k) / (delta * k))
}

/// Total estimation-error leakage factor `1 + a L_p - Q (1 + a^2 L_p)`:
/// the summed per-dimension error power of the serving and contaminating
/// links, normalized by the per-dimension channel power.
pub fn error_leakage_factor(cfg: &NetworkConfig) -> f64 {
    let a = cfg.cross_gain;
    let lp = cfg.sharing_cells as f64;
    1.0 + a * lp - cfg.csi_quality() * (1.0 + a * a * lp)
}

/// Mean received power leaked through estimation errors under ZF,
/// `rho * error_leakage_factor / c`. Unlike the beams themselves, the
/// estimation errors are not nulled, so this rides on top of the noise.
pub fn mean_error_leakage_power(cfg: &NetworkConfig) -> f64 {
    cfg.data_snr * error_leakage_factor(cfg) / cfg.effective_corr()
}

/// Closed-form effective downlink SINR under ZF:
///
/// `1 / ( cK/(rho Q (delta-K)) + L_p a^2 + K chi / (Q (delta-K)) )`
///
/// with `chi = error_leakage_factor`. Equivalently
/// `rho g / (1 + a^2 L_p rho g + mean_error_leakage_power)` where
/// `g = signal_gain`. Requires `delta > K`.
pub fn effective_sinr(cfg: &NetworkConfig) -> Result<f64> {
    let delta = cfg.delta() as f64;
    let k = cfg.users_per_cell as f64;
    if delta <= k {
        return Err(Error::Domain(format!(
            "zero forcing needs delta > K, got delta = {delta}, K = {k}"
        )));
    }
    let q = cfg.csi_quality();
    let c = cfg.effective_corr();
    let a = cfg.cross_gain;
    let lp = cfg.sharing_cells as f64;
    let den = c * k / (cfg.data_snr * q * (delta - k))
        + lp * a * a
        + k * error_leakage_factor(cfg) / (q * (delta - k));
    if !(den.is_finite() && den > 0.0) {
        return Err(Error::Domain(format!(
            "effective SINR denominator must be positive and finite, got {den}"
        )));
    }
    Ok(1.0 / den)
}

/// Per-user ergodic-rate lower bound `log2(1 + effective_sinr)`.
pub fn rate_lower_bound(cfg: &NetworkConfig) -> Result<f64> {
    Ok((1.0 + effective_sinr(cfg)?).log2())
}

/// Network sum-rate lower bound: `cells * users * rate_lower_bound`.
pub fn sum_rate_lower_bound(cfg: &NetworkConfig) -> Result<f64> {
    Ok((cfg.cells * cfg.users_per_cell) as f64 * rate_lower_bound(cfg)?)
}
