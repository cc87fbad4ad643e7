//! Monte Carlo engine: reproducible downlink trials, sweep orchestration,
//! and the moment-verification harness.
//!
//! # Trial construction
//!
//! Everything a trial needs lives in the channel subspace: with unitary
//! direction columns, inner products of estimates equal inner products of
//! their subspace coordinates, so trials draw `delta`-dimensional
//! coordinates directly and never materialize antenna-domain vectors. The
//! integration tests rebuild trials in the antenna domain and confirm the
//! two representations agree to floating-point accuracy.
//!
//! # Draw order
//!
//! The random stream of a trial is consumed in a documented, frozen order —
//! changing it is a breaking change to every recorded result:
//!
//! 1. cells in order: serving cell first, then each pilot-sharing cell;
//! 2. within a cell, pilots `k = 0..K`;
//! 3. within a pilot, component blocks of `delta` coordinates each: the
//!    cell's own user channel, then one block per sharing cell's
//!    contaminating user, then the training noise.
//!
//! `verify_moments` appends one extra cell after the trial body when the
//! configuration has no sharing cells, purely to exercise the cross-cell
//! moment patterns.
//!
//! # Determinism
//!
//! Each trial derives its generator from a [`SeedPath`], so a trial is a
//! pure function of `(master_seed, case_id, antennas, trial_index)`.
//! Parallel runs map trials into an index-ordered buffer and reduce it
//! sequentially, so every statistic is bitwise identical for any worker
//! count — `workers` only changes wall-clock time.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::config::NetworkConfig;
use crate::error::{Error, Result};
use crate::mrt::{self, QuarticCase, SinrBreakdown};
use crate::rng::{standard_complex, SeedPath};
use crate::scenario::{Precoder, ScenarioCase};
use crate::stats::RunningMoments;
use crate::zf;

/// Outcome of one downlink trial for the victim user.
#[derive(Debug, Clone, Serialize)]
pub struct TrialResult {
    /// Realized SINR. MRT: the exact per-trial ratio with the realized
    /// signal power in the numerator. ZF: the realized post-nulling SINR.
    pub sinr: f64,
    /// MRT: the SINR with the signal power pinned at its hardened value
    /// `M Q^2` (the closed-form effective SINR is the exact harmonic mean
    /// of this variant). ZF: equal to `sinr`.
    pub pinned_sinr: f64,
    /// `log2(1 + sinr)`.
    pub rate: f64,
    /// Power components. MRT: the normalized [`SinrBreakdown`] the SINR is
    /// assembled from. ZF: `signal` holds the deterministic received signal
    /// power `rho * signal_gain`, `inter_interference` the contamination
    /// power, `error_leakage` the realized estimation-error leak power, and
    /// `intra_interference` is 0 (nulled); `sinr = signal / (1 + inter +
    /// leakage)`.
    pub components: SinrBreakdown,
    pub trial_index: u64,
    pub seed_path: SeedPath,
}

// ---------------------------------------------------------------------------
// Subspace draws
// ---------------------------------------------------------------------------

/// Per-cell scale factors shared by every draw routine.
struct CellScales {
    /// `sqrt(E_t * own_gain)`: training amplitude of the cell's own users.
    s_own: f64,
    /// `sqrt(E_t * cross_cell_gain)`: training amplitude of contaminating
    /// users.
    s_cross: f64,
    /// `sqrt(own_gain)` / `sqrt(cross_cell_gain)`: channel amplitudes.
    a_own: f64,
    a_cross: f64,
    /// MMSE output scale `Q / sqrt(E_t)`: estimate coordinates are this
    /// times the observation coordinates.
    g: f64,
}

impl CellScales {
    fn new(cfg: &NetworkConfig) -> Self {
        Self {
            s_own: (cfg.train_snr * cfg.own_gain()).sqrt(),
            s_cross: (cfg.train_snr * cfg.cross_cell_gain()).sqrt(),
            a_own: cfg.own_gain().sqrt(),
            a_cross: cfg.cross_cell_gain().sqrt(),
            g: cfg.csi_quality() / cfg.train_snr.sqrt(),
        }
    }
}

/// Whether the victim is one of the cell's own users or a contaminating
/// user from the serving cell.
#[derive(Clone, Copy, PartialEq)]
enum VictimLink {
    Own,
    Contaminating,
}

/// Victim-centric summary of one cell's training round.
struct CellRow {
    /// `est_ip[k] = (estimate of pilot 0)^H (estimate of pilot k)`;
    /// `est_ip[0]` is the squared norm of the pilot-0 estimate.
    est_ip: Vec<Complex64>,
    /// Squared norm of the pilot-1 estimate (0 when `K = 1`).
    second_norm: f64,
    /// `sum_k |error^H estimate_k|^2` where `error` is the cell's
    /// estimation error of the victim's channel.
    leak: f64,
}

/// Draws one component block of `delta` coordinates into `w`, optionally
/// retaining the scaled channel coordinates in `keep`.
fn add_block(
    w: &mut [Complex64],
    rng: &mut ChaCha12Rng,
    train_scale: f64,
    keep: Option<(&mut [Complex64], f64)>,
) {
    match keep {
        Some((kept, chan_scale)) => {
            for (wi, ki) in w.iter_mut().zip(kept.iter_mut()) {
                let z = standard_complex(rng);
                *wi += z * train_scale;
                *ki = z * chan_scale;
            }
        }
        None => {
            for wi in w.iter_mut() {
                *wi += standard_complex(rng) * train_scale;
            }
        }
    }
}

/// Adds the unit-power training noise block.
fn add_noise(w: &mut [Complex64], rng: &mut ChaCha12Rng) {
    for wi in w.iter_mut() {
        *wi += standard_complex(rng);
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    acc
}

/// Builds the observation coordinates of one pilot in the frozen component
/// order, retaining the victim's channel when this pilot is the victim's.
fn build_pilot(
    cfg: &NetworkConfig,
    scales: &CellScales,
    victim: Option<VictimLink>,
    w: &mut [Complex64],
    keep: &mut [Complex64],
    rng: &mut ChaCha12Rng,
) {
    w.fill(Complex64::new(0.0, 0.0));
    let own_keep = matches!(victim, Some(VictimLink::Own));
    add_block(
        w,
        rng,
        scales.s_own,
        own_keep.then(|| (&mut keep[..], scales.a_own)),
    );
    for p in 1..=cfg.sharing_cells {
        let cross_keep = p == 1 && matches!(victim, Some(VictimLink::Contaminating));
        add_block(
            w,
            rng,
            scales.s_cross,
            cross_keep.then(|| (&mut keep[..], scales.a_cross)),
        );
    }
    add_noise(w, rng);
}

/// Runs one cell's training round and reduces it to the victim-row summary.
fn draw_cell_row(
    cfg: &NetworkConfig,
    scales: &CellScales,
    victim: VictimLink,
    rng: &mut ChaCha12Rng,
) -> CellRow {
    let delta = cfg.delta();
    let k_users = cfg.users_per_cell;
    let zero = Complex64::new(0.0, 0.0);
    let mut w0 = vec![zero; delta];
    let mut wk = vec![zero; delta];
    let mut keep = vec![zero; delta];
    let mut err = vec![zero; delta];
    let g = scales.g;
    let g2 = g * g;
    let alias = match victim {
        VictimLink::Own => 1.0,
        VictimLink::Contaminating => cfg.cross_gain,
    };

    build_pilot(cfg, scales, Some(victim), &mut w0, &mut keep, rng);
    // Estimation error of the victim's channel at this base station: the
    // true (retained) coordinates minus the aliased MMSE estimate.
    for i in 0..delta {
        err[i] = keep[i] - w0[i] * (alias * g);
    }

    let mut est_ip = vec![zero; k_users];
    est_ip[0] = Complex64::new(dot(&w0, &w0).re * g2, 0.0);
    let mut leak = dot(&err, &w0).norm_sqr() * g2;
    let mut second_norm = 0.0;
    for k in 1..k_users {
        build_pilot(cfg, scales, None, &mut wk, &mut keep, rng);
        est_ip[k] = dot(&w0, &wk) * g2;
        if k == 1 {
            second_norm = dot(&wk, &wk).re * g2;
        }
        leak += dot(&err, &wk).norm_sqr() * g2;
    }
    CellRow {
        est_ip,
        second_norm,
        leak,
    }
}

/// All victim-relevant rows of one trial: the serving cell plus each
/// sharing cell, drawn in the frozen order.
struct TrialDraws {
    own: CellRow,
    cross: Vec<CellRow>,
}

fn draw_trial(cfg: &NetworkConfig, scales: &CellScales, rng: &mut ChaCha12Rng) -> TrialDraws {
    let own = draw_cell_row(cfg, scales, VictimLink::Own, rng);
    let cross = (0..cfg.sharing_cells)
        .map(|_| draw_cell_row(cfg, scales, VictimLink::Contaminating, rng))
        .collect();
    TrialDraws { own, cross }
}

/// Assembles the normalized power components from the trial rows.
fn breakdown_from(cfg: &NetworkConfig, draws: &TrialDraws) -> SinrBreakdown {
    let m = cfg.antennas as f64;
    let k_users = cfg.users_per_cell;
    let lp = cfg.sharing_cells;
    let own_norm = draws.own.est_ip[0].re;

    let signal = own_norm * own_norm / (m * m);
    let intra = if k_users > 1 {
        let sum: f64 = draws.own.est_ip[1..].iter().map(|ip| ip.norm_sqr()).sum();
        sum / ((k_users - 1) as f64 * m)
    } else {
        0.0
    };
    let inter = if lp > 0 {
        let sum: f64 = draws
            .cross
            .iter()
            .map(|row| row.est_ip.iter().map(|ip| ip.norm_sqr()).sum::<f64>())
            .sum();
        cfg.cross_gain * cfg.cross_gain * sum / ((k_users * lp) as f64 * m * m)
    } else {
        0.0
    };
    let leak_sum: f64 = draws.own.leak + draws.cross.iter().map(|r| r.leak).sum::<f64>();
    let error_leakage = leak_sum / ((k_users * (lp + 1)) as f64 * m);
    SinrBreakdown {
        signal,
        intra_interference: intra,
        inter_interference: inter,
        error_leakage,
    }
}

// ---------------------------------------------------------------------------
// Zero-forcing trials
// ---------------------------------------------------------------------------

/// Draws one cell's full observation matrix (`delta x K`) plus the victim
/// error coordinates, consuming the stream in the same frozen order as the
/// row-based draw.
fn draw_cell_matrix(
    cfg: &NetworkConfig,
    scales: &CellScales,
    victim: VictimLink,
    rng: &mut ChaCha12Rng,
) -> (DMatrix<Complex64>, DVector<Complex64>) {
    let delta = cfg.delta();
    let k_users = cfg.users_per_cell;
    let zero = Complex64::new(0.0, 0.0);
    let mut w = DMatrix::from_element(delta, k_users, zero);
    let mut keep = vec![zero; delta];
    let mut buf = vec![zero; delta];
    let alias = match victim {
        VictimLink::Own => 1.0,
        VictimLink::Contaminating => cfg.cross_gain,
    };
    let mut err = DVector::from_element(delta, zero);
    for k in 0..k_users {
        let victim_here = (k == 0).then_some(victim);
        build_pilot(cfg, scales, victim_here, &mut buf, &mut keep, rng);
        for i in 0..delta {
            w[(i, k)] = buf[i];
        }
        if k == 0 {
            for i in 0..delta {
                err[i] = keep[i] - buf[i] * (alias * scales.g);
            }
        }
    }
    (w, err)
}

/// Realized ZF SINR: deterministic signal and contamination powers (both
/// fixed by the statistical power normalization and the estimate-aliasing
/// structure), realized estimation-error leakage through each cell's
/// inverted Gram matrix.
fn zf_trial(cfg: &NetworkConfig, scales: &CellScales, rng: &mut ChaCha12Rng) -> Result<(f64, SinrBreakdown)> {
    let gain = zf::signal_gain(cfg)?;
    let rho_gain = cfg.data_snr * gain;
    let g2 = scales.g * scales.g;
    let mut leak = 0.0;
    for cell in 0..=cfg.sharing_cells {
        let victim = if cell == 0 {
            VictimLink::Own
        } else {
            VictimLink::Contaminating
        };
        let (w, err) = draw_cell_matrix(cfg, scales, victim, rng);
        let gram = (w.adjoint() * &w) * Complex64::new(g2, 0.0);
        let chol = zf::checked_cholesky(gram)?;
        // Estimate matrix is g * W, so the projection of the error onto the
        // estimates carries a single factor of g.
        let rhs = (w.adjoint() * &err) * Complex64::new(scales.g, 0.0);
        let a = chol.solve(&rhs);
        leak += a.norm_squared();
    }
    let lp = cfg.sharing_cells as f64;
    let inter = cfg.cross_gain * cfg.cross_gain * rho_gain * lp;
    let leak_power = rho_gain * leak;
    let sinr = rho_gain / (1.0 + inter + leak_power);
    Ok((
        sinr,
        SinrBreakdown {
            signal: rho_gain,
            intra_interference: 0.0,
            inter_interference: inter,
            error_leakage: leak_power,
        },
    ))
}

// ---------------------------------------------------------------------------
// Public trial API
// ---------------------------------------------------------------------------

/// Runs one trial. A pure function of the seed path: the same path always
/// yields the bitwise-identical result.
pub fn run_trial(cfg: &NetworkConfig, precoder: Precoder, seed_path: &SeedPath) -> Result<TrialResult> {
    if seed_path.antennas != cfg.antennas {
        return Err(Error::InvalidConfig(format!(
            "seed path is for M = {}, configuration has M = {}",
            seed_path.antennas, cfg.antennas
        )));
    }
    let mut rng = seed_path.rng();
    let scales = CellScales::new(cfg);
    let (sinr, pinned_sinr, components) = match precoder {
        Precoder::Mrt => {
            let draws = draw_trial(cfg, &scales, &mut rng);
            let b = breakdown_from(cfg, &draws);
            (
                mrt::instantaneous_sinr(cfg, &b),
                mrt::instantaneous_sinr_pinned_signal(cfg, &b),
                b,
            )
        }
        Precoder::Zf => {
            let (sinr, b) = zf_trial(cfg, &scales, &mut rng)?;
            (sinr, sinr, b)
        }
    };
    if !sinr.is_finite() || sinr <= 0.0 {
        return Err(Error::Numerical(format!(
            "trial produced a non-positive SINR {sinr}"
        )));
    }
    Ok(TrialResult {
        sinr,
        pinned_sinr,
        rate: (1.0 + sinr).log2(),
        components,
        trial_index: seed_path.trial_index,
        seed_path: seed_path.clone(),
    })
}

/// Maps `f` over trial indices `0..n`, in parallel when the `parallel`
/// feature is active, into an index-ordered buffer.
///
/// `workers = 0` uses the process-wide pool, `1` forces a plain sequential
/// loop, and any other value runs a dedicated pool of that size. Without
/// the `parallel` feature every value runs sequentially. The output order
/// (and therefore every downstream reduction) is identical in all cases.
fn map_trials<T, F>(n: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let run = || (0..n).into_par_iter().map(&f).collect::<Result<Vec<T>>>();
        match workers {
            1 => (0..n).map(&f).collect(),
            0 => run(),
            w => rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Numerical(format!("worker pool construction: {e}")))?
                .install(run),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        (0..n).map(&f).collect()
    }
}

/// Minimum trials for any aggregate estimate.
pub const MIN_TRIALS: u64 = 100;

/// Mean per-user rate `E{log2(1 + SINR)}` and its standard error.
pub fn estimate_ergodic_rate(
    cfg: &NetworkConfig,
    precoder: Precoder,
    n_trials: u64,
    master_seed: u64,
) -> Result<(f64, f64)> {
    if n_trials < MIN_TRIALS {
        return Err(Error::InvalidConfig(format!(
            "rate estimation needs at least {MIN_TRIALS} trials, got {n_trials}"
        )));
    }
    let rates = map_trials(n_trials, 0, |t| {
        run_trial(cfg, precoder, &SeedPath::new(master_seed, "ergodic-rate", cfg.antennas, t))
            .map(|r| r.rate)
    })?;
    let m = RunningMoments::from_samples(&rates);
    Ok((m.mean(), m.std_error()))
}

/// Unbiased squared coefficient of variation of a sample. Errors on fewer
/// than two samples or a zero mean.
pub fn estimate_scv(samples: &[f64]) -> Result<f64> {
    RunningMoments::from_samples(samples).scv().ok_or_else(|| {
        Error::Domain(
            "squared coefficient of variation needs at least 2 samples and a nonzero mean".into(),
        )
    })
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Aggregates for one antenna count of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub users: usize,
    pub sharing_cells: usize,
    pub train_snr: f64,
    pub data_snr: f64,
    pub n_trials: u64,
    /// Arithmetic mean of the realized SINR.
    pub mean_sinr: f64,
    pub se_mean_sinr: f64,
    /// Harmonic mean `1 / mean(1/SINR)` — the simulated effective SINR.
    pub effective_sinr_sim: f64,
    pub se_effective_sinr_sim: f64,
    /// Closed-form effective SINR of the active precoder.
    pub effective_sinr_analytic: f64,
    /// Mean per-user rate and its standard error.
    pub ergodic_rate: f64,
    pub se_ergodic_rate: f64,
    /// `cells * users * ergodic_rate`.
    pub sum_rate: f64,
    pub se_sum_rate: f64,
    /// `cells * users * log2(1 + effective_sinr_analytic)`.
    pub sum_rate_lower_bound: f64,
    /// Squared coefficient of variation of the realized SINR.
    pub scv_sinr: f64,
    pub se_scv_sinr: f64,
}

/// One antenna count of a sweep: either aggregates or the error that made
/// the point unrunnable. Exactly one of `point`/`error` is set.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub m: usize,
    pub point: Option<SweepPoint>,
    pub error: Option<String>,
}

/// A full sweep of one case over an antenna grid.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub case_id: String,
    pub precoder: Precoder,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// `(M, value)` pairs of a successfully computed metric.
    pub fn series<F: Fn(&SweepPoint) -> f64>(&self, metric: F) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter_map(|r| r.point.as_ref().map(|p| (r.m as f64, metric(p))))
            .collect()
    }
}

/// Sweeps a case over an antenna grid with `n_trials` per point.
///
/// Grid points whose configuration is invalid (or whose trials fail) are
/// recorded as error rows and the sweep continues. The result is bitwise
/// independent of `workers`.
pub fn run_case_sweep(
    case: &ScenarioCase,
    m_grid: &[usize],
    n_trials: u64,
    master_seed: u64,
    workers: usize,
) -> Result<SweepResult> {
    if n_trials < MIN_TRIALS {
        return Err(Error::InvalidConfig(format!(
            "sweeps need at least {MIN_TRIALS} trials per point, got {n_trials}"
        )));
    }
    if m_grid.is_empty() {
        return Err(Error::InvalidConfig("sweep needs a nonempty antenna grid".into()));
    }
    let mut rows = Vec::with_capacity(m_grid.len());
    for &m in m_grid {
        match sweep_point(case, m, n_trials, master_seed, workers) {
            Ok(point) => rows.push(SweepRow {
                m,
                point: Some(point),
                error: None,
            }),
            Err(e) => rows.push(SweepRow {
                m,
                point: None,
                error: Some(e.to_string()),
            }),
        }
    }
    Ok(SweepResult {
        case_id: case.case_id.clone(),
        precoder: case.precoder,
        rows,
    })
}

fn sweep_point(
    case: &ScenarioCase,
    m: usize,
    n_trials: u64,
    master_seed: u64,
    workers: usize,
) -> Result<SweepPoint> {
    let cfg = case.config_at(m)?;
    let analytic = match case.precoder {
        Precoder::Mrt => mrt::effective_sinr(&cfg)?,
        Precoder::Zf => zf::effective_sinr(&cfg)?,
    };
    let samples = map_trials(n_trials, workers, |t| {
        run_trial(&cfg, case.precoder, &SeedPath::new(master_seed, &case.case_id, m, t))
            .map(|r| (r.sinr, r.rate))
    })?;

    let mut sinr_m = RunningMoments::new();
    let mut inv_m = RunningMoments::new();
    let mut rate_m = RunningMoments::new();
    for &(s, r) in &samples {
        sinr_m.push(s);
        inv_m.push(1.0 / s);
        rate_m.push(r);
    }
    let eff = 1.0 / inv_m.mean();
    let se_eff = inv_m.std_error() * eff * eff;
    let per_cell = (cfg.cells * cfg.users_per_cell) as f64;
    let (scv, se_scv) = match (sinr_m.scv(), sinr_m.scv_std_error()) {
        (Some(v), Some(se)) => (v, se),
        _ => {
            return Err(Error::Numerical(
                "SINR sample has no usable coefficient of variation".into(),
            ))
        }
    };
    Ok(SweepPoint {
        users: cfg.users_per_cell,
        sharing_cells: cfg.sharing_cells,
        train_snr: cfg.train_snr,
        data_snr: cfg.data_snr,
        n_trials,
        mean_sinr: sinr_m.mean(),
        se_mean_sinr: sinr_m.std_error(),
        effective_sinr_sim: eff,
        se_effective_sinr_sim: se_eff,
        effective_sinr_analytic: analytic,
        ergodic_rate: rate_m.mean(),
        se_ergodic_rate: rate_m.std_error(),
        sum_rate: per_cell * rate_m.mean(),
        se_sum_rate: per_cell * rate_m.std_error(),
        sum_rate_lower_bound: per_cell * (1.0 + analytic).log2(),
        scv_sinr: scv,
        se_scv_sinr: se_scv,
    })
}

// ---------------------------------------------------------------------------
// Moment verification
// ---------------------------------------------------------------------------

/// One verified moment: the closed form against its Monte Carlo estimate.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub label: String,
    /// Exact finite-size closed form.
    pub analytic: f64,
    /// Large-system spelling of the same moment (differs from `analytic`
    /// only where the hardened approximation drops an O(1/delta) factor).
    pub analytic_asymptotic: f64,
    pub empirical: f64,
    pub std_error: f64,
    /// `(empirical - analytic) / std_error`.
    pub z: f64,
    /// `(empirical - analytic_asymptotic) / std_error`.
    pub z_asymptotic: f64,
}

impl MomentReport {
    fn new(label: &str, analytic: f64, asymptotic: f64, moments: &RunningMoments) -> Self {
        let empirical = moments.mean();
        let se = moments.std_error();
        Self {
            label: label.to_owned(),
            analytic,
            analytic_asymptotic: asymptotic,
            empirical,
            std_error: se,
            z: (empirical - analytic) / se,
            z_asymptotic: (empirical - asymptotic) / se,
        }
    }

    fn from_scv(label: &str, analytic: f64, moments: &RunningMoments) -> Result<Self> {
        let (empirical, se) = match (moments.scv(), moments.scv_std_error()) {
            (Some(v), Some(se)) => (v, se),
            _ => {
                return Err(Error::Numerical(format!(
                    "moment {label}: sample has no usable coefficient of variation"
                )))
            }
        };
        let z = (empirical - analytic) / se;
        Ok(Self {
            label: label.to_owned(),
            analytic,
            analytic_asymptotic: analytic,
            empirical,
            std_error: se,
            z,
            z_asymptotic: z,
        })
    }
}

/// True when every report sits within the given z-score gate under the
/// exact convention.
pub fn moments_pass(reports: &[MomentReport], gate: f64) -> bool {
    reports.iter().all(|r| r.z.abs() <= gate)
}

/// Monte Carlo verification of every closed-form moment: the twelve
/// quartic estimate patterns plus the power-component means and
/// coefficients of variation.
///
/// Requires at least 3 users (the distinct-user patterns need three
/// distinct pilots) and runs `n_trials` trials seeded from `master_seed`
/// under the case id `"verify-moments"`.
pub fn verify_moments(
    cfg: &NetworkConfig,
    n_trials: u64,
    master_seed: u64,
) -> Result<Vec<MomentReport>> {
    if cfg.users_per_cell < 3 {
        return Err(Error::InvalidConfig(
            "moment verification needs at least 3 users per cell".into(),
        ));
    }
    if n_trials < MIN_TRIALS {
        return Err(Error::InvalidConfig(format!(
            "moment verification needs at least {MIN_TRIALS} trials, got {n_trials}"
        )));
    }

    const SIGNAL: usize = 12;
    const INTRA: usize = 13;
    const INTER: usize = 14;
    const LEAK: usize = 15;
    const N_STATS: usize = 16;

    let per_trial = map_trials(n_trials, 0, |t| {
        let path = SeedPath::new(master_seed, "verify-moments", cfg.antennas, t);
        let mut rng = path.rng();
        let scales = CellScales::new(cfg);
        let draws = draw_trial(cfg, &scales, &mut rng);
        // Cross-cell patterns compare against an estimate row of another
        // cell: the first sharing cell when there is one, otherwise one
        // extra cell drawn after the trial body.
        let extra = if cfg.sharing_cells == 0 {
            Some(draw_cell_row(cfg, &scales, VictimLink::Own, &mut rng))
        } else {
            None
        };
        let other = extra.as_ref().unwrap_or_else(|| &draws.cross[0]);

        let u = &draws.own;
        let n0 = u.est_ip[0].re;
        let n1 = u.second_norm;
        let p01 = u.est_ip[1].norm_sqr();
        let p02 = u.est_ip[2].norm_sqr();
        let s0 = other.est_ip[0].re;
        let s02 = other.est_ip[2].norm_sqr();
        let b = breakdown_from(cfg, &draws);

        let mut stats = [0.0f64; N_STATS];
        stats[0] = n0; // norm_mean
        stats[1] = n0 * n0; // norm_pair_same_user
        stats[2] = n0 * n1; // norm_pair_distinct
        stats[3] = n0 * n0; // cross_power_same_user
        stats[4] = p01; // cross_power_distinct_users
        stats[5] = n0 * n0 * n0 * n0; // quad_all_same
        stats[6] = p01 * p01; // quad_same_cell_paired_users
        stats[7] = n0 * n0 * p02; // quad_same_cell_shared_victim
        stats[8] = p01 * p02; // quad_same_cell_distinct
        stats[9] = n0 * n0 * s0 * s0; // quad_cross_cell_all_same
        stats[10] = n0 * n0 * s02; // quad_cross_cell_shared
        stats[11] = p01 * s02; // quad_cross_cell_distinct
        stats[SIGNAL] = b.signal;
        stats[INTRA] = b.intra_interference;
        stats[INTER] = b.inter_interference;
        stats[LEAK] = b.error_leakage;
        Ok(stats)
    })?;

    let mut acc = vec![RunningMoments::new(); N_STATS];
    for row in &per_trial {
        for (a, &v) in acc.iter_mut().zip(row.iter()) {
            a.push(v);
        }
    }

    let moments = mrt::component_moments(cfg);
    let mut reports = Vec::with_capacity(N_STATS + 1);
    for (i, case) in QuarticCase::ALL.iter().enumerate() {
        let exact = mrt::quartic_moment(cfg, *case);
        let asym = mrt::quartic_moment_asymptotic(cfg, *case);
        reports.push(MomentReport::new(case.label(), exact, asym, &acc[i]));
    }
    reports.push(MomentReport::new(
        "mean_signal",
        moments.mean_signal,
        moments.mean_signal,
        &acc[SIGNAL],
    ));
    reports.push(MomentReport::from_scv(
        "scv_signal",
        moments.scv_signal,
        &acc[SIGNAL],
    )?);
    if let Some(mi) = moments.mean_intra {
        reports.push(MomentReport::new("mean_intra", mi, mi, &acc[INTRA]));
    }
    if let Some(mi) = moments.mean_inter {
        reports.push(MomentReport::new("mean_inter", mi, mi, &acc[INTER]));
        if let Some(scv) = moments.scv_inter {
            reports.push(MomentReport::from_scv("scv_inter", scv, &acc[INTER])?);
        }
    }
    let leak = mrt::leakage_closed_form(cfg);
    reports.push(MomentReport::new("mean_error_leakage", leak, leak, &acc[LEAK]));
    Ok(reports)
}
