//! Network operating point: geometry, correlation, power levels.
//!
//! A [`NetworkConfig`] pins down one operating point of the cellular model:
//! how many cells and users, the antenna count, how strongly channels are
//! spatially correlated, how loud training and data transmission are, and how
//! many other cells reuse the same pilot set. All analytic formulas and the
//! Monte Carlo engine take their parameters from here, so the invariants are
//! enforced once, at construction.
//!
//! Conventions used throughout the crate:
//!
//! * Receiver noise is normalized to unit variance, so `train_snr` and
//!   `data_snr` are dimensionless per-symbol SNRs.
//! * Every link's covariance has rank `delta = round(corr_fraction * antennas)`
//!   (ties round up), with energy spread uniformly over a `delta`-dimensional
//!   Fourier subspace.
//! * Within-cell links carry average gain `antennas / delta` per dimension so
//!   the total captured energy equals the array size; cross-cell links are
//!   attenuated by `cross_gain`.

use serde::Serialize;

use crate::error::{Error, Result};

/// One operating point of the multi-cell downlink.
///
/// Construct with a struct literal and call [`NetworkConfig::validated`], or
/// use [`NetworkConfig::new`]; everything downstream assumes the invariants
/// hold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkConfig {
    /// Number of cells in the network (each with one base station).
    pub cells: usize,
    /// Base station antennas per cell.
    pub antennas: usize,
    /// Single-antenna users served per cell.
    pub users_per_cell: usize,
    /// Fraction of the array dimensions occupied by each link's correlation
    /// subspace; must satisfy `1 <= round(corr_fraction * antennas) <= antennas`.
    pub corr_fraction: f64,
    /// Relative strength of cross-cell links (0 = isolated cells, 1 = as
    /// strong as in-cell links).
    pub cross_gain: f64,
    /// Number of *other* cells whose pilot transmissions contaminate this
    /// cell's training phase (0 = orthogonal pilots network-wide).
    pub sharing_cells: usize,
    /// Per-symbol training SNR.
    pub train_snr: f64,
    /// Per-symbol downlink data SNR.
    pub data_snr: f64,
}

impl NetworkConfig {
    /// Builds and validates a configuration in one call.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        cells: usize,
        antennas: usize,
        users_per_cell: usize,
        corr_fraction: f64,
        cross_gain: f64,
        sharing_cells: usize,
        train_snr: f64,
        data_snr: f64,
    ) -> Result<Self> {
        Self {
            cells,
            antennas,
            users_per_cell,
            corr_fraction,
            cross_gain,
            sharing_cells,
            train_snr,
            data_snr,
        }
        .validated()
    }

    /// Checks every invariant and returns the configuration unchanged if all
    /// hold.
    pub fn validated(self) -> Result<Self> {
        if self.cells == 0 {
            return Err(Error::InvalidConfig("cells must be at least 1".into()));
        }
        if self.antennas == 0 {
            return Err(Error::InvalidConfig("antennas must be at least 1".into()));
        }
        if self.users_per_cell == 0 {
            return Err(Error::InvalidConfig(
                "users_per_cell must be at least 1".into(),
            ));
        }
        if !self.corr_fraction.is_finite() || self.corr_fraction <= 0.0 || self.corr_fraction > 1.0
        {
            return Err(Error::InvalidConfig(format!(
                "corr_fraction must lie in (0, 1], got {}",
                self.corr_fraction
            )));
        }
        let delta = self.delta();
        if delta == 0 || delta > self.antennas {
            return Err(Error::InvalidConfig(format!(
                "correlation subspace dimension {} outside 1..={}",
                delta, self.antennas
            )));
        }
        if self.users_per_cell > delta {
            return Err(Error::InvalidConfig(format!(
                "users_per_cell ({}) exceeds the correlation subspace dimension ({}); \
                 pilots could not be assigned distinct directions",
                self.users_per_cell, delta
            )));
        }
        if !self.cross_gain.is_finite() || !(0.0..=1.0).contains(&self.cross_gain) {
            return Err(Error::InvalidConfig(format!(
                "cross_gain must lie in [0, 1], got {}",
                self.cross_gain
            )));
        }
        if self.sharing_cells >= self.cells {
            return Err(Error::InvalidConfig(format!(
                "sharing_cells ({}) must be smaller than cells ({})",
                self.sharing_cells, self.cells
            )));
        }
        if !self.train_snr.is_finite() || self.train_snr <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "train_snr must be positive, got {}",
                self.train_snr
            )));
        }
        if !self.data_snr.is_finite() || self.data_snr <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "data_snr must be positive, got {}",
                self.data_snr
            )));
        }
        Ok(self)
    }

    /// Dimension of each link's correlation subspace:
    /// `round(corr_fraction * antennas)`, ties rounding up.
    pub fn delta(&self) -> usize {
        (self.corr_fraction * self.antennas as f64 + 0.5).floor() as usize
    }

    /// The correlation fraction actually realized after rounding,
    /// `delta / antennas`.
    ///
    /// On antenna grids where `corr_fraction * antennas` is an integer this
    /// equals `corr_fraction` exactly; elsewhere (small or odd-sized arrays)
    /// it is the value all closed forms must use to match the simulated
    /// geometry.
    pub fn effective_corr(&self) -> f64 {
        self.delta() as f64 / self.antennas as f64
    }

    /// Per-dimension channel gain of an in-cell link, `antennas / delta`.
    /// The trace of the link covariance is then exactly `antennas`.
    pub fn own_gain(&self) -> f64 {
        self.antennas as f64 / self.delta() as f64
    }

    /// Per-dimension channel gain of a cross-cell link,
    /// `cross_gain * own_gain()`. Computed as a literal product so the
    /// cross-to-own ratio is exactly `cross_gain` in floating point.
    pub fn cross_cell_gain(&self) -> f64 {
        self.cross_gain * self.own_gain()
    }

    /// Training quality factor `Q` in `(0, 1]`: the fraction of a channel
    /// dimension's energy captured by the MMSE estimate.
    ///
    /// `Q = 1 / (effective_corr/train_snr + 1 + cross_gain * sharing_cells)`.
    /// It degrades with noisier training (first term) and with pilot
    /// contamination (last term).
    pub fn csi_quality(&self) -> f64 {
        1.0 / (self.effective_corr() / self.train_snr
            + 1.0
            + self.cross_gain * self.sharing_cells as f64)
    }

    /// Sum of pilot-domain gains observed during training,
    /// `own_gain + sharing_cells * cross_cell_gain`; the per-dimension power
    /// of the training observation before noise.
    pub fn training_gain_sum(&self) -> f64 {
        self.own_gain() + self.sharing_cells as f64 * self.cross_cell_gain()
    }
}
