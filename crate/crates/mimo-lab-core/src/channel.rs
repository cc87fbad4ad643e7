//! Correlated channel model.
//!
//! Every link between a base station array and a user confines its energy to
//! a `delta`-dimensional subspace spanned by `delta` consecutive columns of
//! the unitary DFT matrix — the classical far-field model of a scatterer
//! cluster seen from a uniform linear array. A channel is drawn as
//! `h = sqrt(gain) * A z` with `z` a vector of unit-variance complex
//! Gaussians, so its covariance is `gain * A A^H`: rank `delta`, with all
//! nonzero eigenvalues equal to `gain`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::config::NetworkConfig;
use crate::error::{Error, Result};
use crate::rng::standard_complex;

/// Orthonormal basis of the correlation subspace: the first `dimension`
/// columns of the `antennas`-point unitary DFT matrix.
#[derive(Debug, Clone)]
pub struct DirectionBasis {
    matrix: DMatrix<Complex64>,
}

impl DirectionBasis {
    /// Builds the basis; `1 <= dimension <= antennas` is required.
    pub fn new(antennas: usize, dimension: usize) -> Result<Self> {
        if dimension == 0 || dimension > antennas {
            return Err(Error::InvalidConfig(format!(
                "direction basis dimension {dimension} outside 1..={antennas}"
            )));
        }
        let scale = 1.0 / (antennas as f64).sqrt();
        let matrix = DMatrix::from_fn(antennas, dimension, |j, k| {
            let phase = -2.0 * std::f64::consts::PI * (j as f64) * (k as f64) / antennas as f64;
            Complex64::from_polar(scale, phase)
        });
        Ok(Self { matrix })
    }

    /// Basis sized for a configuration's subspace.
    pub fn for_config(cfg: &NetworkConfig) -> Self {
        // The configuration's own validation guarantees the dimensions fit.
        Self::new(cfg.antennas, cfg.delta()).expect("validated config implies a valid basis")
    }

    /// Array size (rows).
    pub fn antennas(&self) -> usize {
        self.matrix.nrows()
    }

    /// Subspace dimension (columns).
    pub fn dimension(&self) -> usize {
        self.matrix.ncols()
    }

    /// The `antennas x dimension` matrix itself.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Coordinates of `v` in the subspace: `A^H v` (length `dimension`).
    pub fn project(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        self.matrix.adjoint() * v
    }

    /// Embeds subspace coordinates back into array space: `A w`.
    pub fn lift(&self, w: &DVector<Complex64>) -> DVector<Complex64> {
        &self.matrix * w
    }
}

/// One realization of a correlated channel.
#[derive(Debug, Clone)]
pub struct ChannelDraw {
    /// The channel vector `h = sqrt(gain) * A z` (length `antennas`).
    pub vector: DVector<Complex64>,
    /// The unit-variance innovations `z` that generated it (length
    /// `dimension`); kept so tests can reconstruct intermediate quantities.
    pub coords: DVector<Complex64>,
    /// Per-dimension average gain of the link.
    pub gain: f64,
}

/// Draws `h = sqrt(gain) * A z`, `z ~ CN(0, I)`.
pub fn draw_channel<R: Rng + ?Sized>(
    basis: &DirectionBasis,
    gain: f64,
    rng: &mut R,
) -> ChannelDraw {
    let coords = DVector::from_fn(basis.dimension(), |_, _| standard_complex(rng));
    let vector = basis.lift(&(&coords * Complex64::from(gain.sqrt())));
    ChannelDraw {
        vector,
        coords,
        gain,
    }
}

/// The link covariance implied by the model: `gain * A A^H`
/// (`antennas x antennas`, rank `dimension`).
pub fn correlation_matrix(basis: &DirectionBasis, gain: f64) -> DMatrix<Complex64> {
    let a = basis.matrix();
    (a * a.adjoint()).map(|x| x * gain)
}
