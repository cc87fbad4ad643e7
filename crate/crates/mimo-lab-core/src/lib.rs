//! Core library of a desk-scale laboratory for multi-cell multi-user massive
//! MIMO downlink performance.
//!
//! The library models a TDD cellular network in which every base station
//! serves several single-antenna users through a large antenna array. Uplink
//! training with reused pilot sequences produces contaminated MMSE channel
//! estimates; the base stations then beamform with either maximum ratio
//! transmission (MRT) or zero forcing (ZF). Channels are correlated: every
//! link confines its energy to a low-dimensional subspace spanned by a block
//! of discrete Fourier basis vectors, which is what makes large-system
//! behaviour analytically tractable.
//!
//! Functionality is split into three layers:
//!
//! * **Analytic layer** — closed-form moments of the beamforming gains,
//!   effective SINR and rate lower bounds, power-scaling exponents, and the
//!   validity ("applicability") checks that say when those scaling laws
//!   describe finite systems ([`mrt`], [`zf`], [`scaling`]).
//! * **Simulation layer** — a reproducible Monte Carlo engine that draws
//!   correlated channels, runs training and precoding, and measures the same
//!   quantities empirically ([`channel`], [`training`], [`engine`]).
//! * **Scenario layer** — declarative case definitions (power-law parameter
//!   schedules over the antenna count) with a TOML file format and built-in
//!   presets ([`scenario`]).
//!
//! Trials are deterministic functions of a seed path, so every number the
//! engine produces can be reproduced bit-for-bit regardless of how many
//! worker threads computed it. The `parallel` feature (on by default) runs
//! trial batches on a rayon thread pool; disabling it falls back to a plain
//! sequential loop with identical output.

pub mod channel;
pub mod config;
pub mod engine;
pub mod error;
pub mod mrt;
pub mod rng;
pub mod scaling;
pub mod scenario;
pub mod stats;
pub mod training;
pub mod zf;

pub use config::NetworkConfig;
pub use error::{Error, Result};
