//! Uplink training and MMSE channel estimation under pilot reuse.
//!
//! During training every user sends a pilot sequence; after correlating with
//! the pilot, the base station sees, per user index,
//!
//! `y = sqrt(train_snr) * (h_own + sum of sharing-cell channels) + noise`,
//!
//! where the sum runs over the `sharing_cells` cells that reuse the same
//! pilot set and the noise is `CN(0, I)`. Because every interfering link
//! lives in the *same* correlation subspace, the MMSE estimator collapses to
//! a scalar gain applied to the projection of `y` onto that subspace — and
//! the estimate of a contaminated cross-cell channel is exactly a scaled copy
//! (the *alias factor*) of the in-cell estimate. Pilot contamination is
//! therefore structural: no amount of training power removes it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::channel::{ChannelDraw, DirectionBasis};
use crate::config::NetworkConfig;
use crate::error::{Error, Result};
use crate::rng::standard_complex;

/// Which link an estimator targets relative to the observing base station.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    /// The base station's own user.
    Own,
    /// A same-pilot user in another cell.
    Cross,
}

/// Forms the post-correlation training observation for one user index:
/// `sqrt(train_snr) * (own + sum(cross)) + CN(0, I)` noise.
///
/// `cross` must hold exactly `sharing_cells` channel draws.
pub fn training_observation<R: Rng + ?Sized>(
    cfg: &NetworkConfig,
    own: &ChannelDraw,
    cross: &[ChannelDraw],
    rng: &mut R,
) -> DVector<Complex64> {
    assert_eq!(
        cross.len(),
        cfg.sharing_cells,
        "observation needs one cross draw per sharing cell"
    );
    let amp = cfg.train_snr.sqrt();
    let mut y = own.vector.clone();
    for c in cross {
        y += &c.vector;
    }
    let mut y = y * Complex64::new(amp, 0.0);
    for e in y.iter_mut() {
        *e += standard_complex(rng);
    }
    y
}

/// Per-dimension power of the training observation,
/// `train_snr * (own_gain + sharing_cells * cross_gain) + 1`.
pub fn observation_dimension_power(cfg: &NetworkConfig) -> f64 {
    cfg.train_snr * cfg.training_gain_sum() + 1.0
}

/// The scalar MMSE filter gain for the targeted link: the estimate is
/// `gain * A (A^H y)`.
///
/// Derivation: in subspace coordinates the observation is white with
/// per-dimension power `observation_dimension_power`, and the target
/// contributes `sqrt(train_snr) * link_gain` of its amplitude, so the Wiener
/// gain is their ratio.
pub fn mmse_filter_gain(cfg: &NetworkConfig, target: LinkKind) -> f64 {
    let link_gain = match target {
        LinkKind::Own => cfg.own_gain(),
        LinkKind::Cross => cfg.cross_cell_gain(),
    };
    cfg.train_snr.sqrt() * link_gain / observation_dimension_power(cfg)
}

/// MMSE estimate of the targeted channel from the observation `y`:
/// `mmse_filter_gain * A (A^H y)`.
pub fn mmse_estimate(
    cfg: &NetworkConfig,
    basis: &DirectionBasis,
    y: &DVector<Complex64>,
    target: LinkKind,
) -> DVector<Complex64> {
    let gain = mmse_filter_gain(cfg, target);
    basis.lift(&(basis.project(y) * Complex64::new(gain, 0.0)))
}

/// Reference MMSE estimator that forms the full array-space filter
/// `sqrt(train_snr) * C_target * (train_snr * C_sum + I)^{-1}` and applies it
/// to `y` — no subspace shortcuts.
///
/// Mathematically identical to [`mmse_estimate`]; it exists to cross-check
/// the reduced form and costs a dense `antennas x antennas` inversion, so
/// keep it to small arrays.
pub fn mmse_estimate_literal(
    cfg: &NetworkConfig,
    basis: &DirectionBasis,
    y: &DVector<Complex64>,
    target: LinkKind,
) -> Result<DVector<Complex64>> {
    let m = cfg.antennas;
    let a = basis.matrix();
    let outer = a * a.adjoint();
    let target_gain = match target {
        LinkKind::Own => cfg.own_gain(),
        LinkKind::Cross => cfg.cross_cell_gain(),
    };
    let c_target = outer.map(|x| x * target_gain);
    let c_sum = outer.map(|x| x * cfg.training_gain_sum());
    let to_invert = c_sum.map(|x| x * cfg.train_snr) + DMatrix::<Complex64>::identity(m, m);
    let inv = to_invert.try_inverse().ok_or_else(|| {
        Error::Numerical("training covariance matrix is singular".into())
    })?;
    Ok(c_target.map(|x| x * cfg.train_snr.sqrt()) * inv * y)
}

/// Ratio between the estimate of a cross-cell link and the estimate of the
/// own link formed from the same observation. Equal to `cross_gain`: the two
/// estimates are collinear, which is the essence of pilot contamination.
pub fn alias_factor(cfg: &NetworkConfig) -> f64 {
    cfg.cross_gain
}

/// Per-dimension power of the MMSE *estimate* of the targeted link.
///
/// Own link: `csi_quality / effective_corr`; cross link: that times
/// `cross_gain^2`.
pub fn estimate_dimension_power(cfg: &NetworkConfig, target: LinkKind) -> f64 {
    let g = mmse_filter_gain(cfg, target);
    g * g * observation_dimension_power(cfg)
}

/// Per-dimension power of the estimation *error* of the targeted link
/// (`link_gain - estimate_dimension_power`): what MMSE training cannot
/// recover, by orthogonality.
pub fn error_dimension_power(cfg: &NetworkConfig, target: LinkKind) -> f64 {
    let link_gain = match target {
        LinkKind::Own => cfg.own_gain(),
        LinkKind::Cross => cfg.cross_cell_gain(),
    };
    link_gain - estimate_dimension_power(cfg, target)
}

/// An estimate paired with its realized error for a known true channel.
#[derive(Debug, Clone)]
pub struct CsiEstimate {
    /// The MMSE estimate.
    pub estimate: DVector<Complex64>,
    /// `truth - estimate`.
    pub error: DVector<Complex64>,
}

/// Runs the reduced MMSE estimator and reports the realized error against
/// the known truth.
pub fn estimate_with_error(
    cfg: &NetworkConfig,
    basis: &DirectionBasis,
    truth: &ChannelDraw,
    y: &DVector<Complex64>,
    target: LinkKind,
) -> CsiEstimate {
    let estimate = mmse_estimate(cfg, basis, y, target);
    let error = &truth.vector - &estimate;
    CsiEstimate { estimate, error }
}
