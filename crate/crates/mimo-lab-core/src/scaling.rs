//! Power-scaling calculus: growth exponents, validity conditions, and
//! empirical exponent fitting.
//!
//! The large-system story is parameterized by how the operating point moves
//! as the array grows: training energy `E_t ∝ M^-r_t`, users `K ∝ M^r_k`,
//! data SNR `rho ∝ M^-r_rho`, and (when pilots are reused) sharing cells
//! `L_p ∝ M^-r_gamma`. The effective SINR then grows like `M^r_s` with an
//! exponent given by [`scaling_exponent`]. Because those are asymptotic
//! statements, this module also answers the finite-size question — *at this
//! `M`, has the limiting term actually taken over?* — through
//! [`mrt_applicability`] / [`zf_applicability`], which compare the term the
//! law keeps against everything it throws away (dominance = one order of
//! magnitude by default). Finally, [`estimate_exponent`] and
//! [`fit_power_decay`] recover exponents from measured curves so theory and
//! simulation can be confronted directly.

use serde::Serialize;

use crate::config::NetworkConfig;
use crate::error::{Error, Result};
use crate::stats::log_log_slope;

/// Trajectory exponents describing how the operating point scales with the
/// array size. All exponents live in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingExponents {
    /// `r_t`: training energy shrinks as `M^-r_t`.
    pub train_decay: f64,
    /// `r_k`: users per cell grow as `M^r_k`.
    pub user_growth: f64,
    /// `r_rho`: data SNR shrinks as `M^-r_rho`.
    pub power_decay: f64,
    /// `r_gamma`: number of pilot-sharing cells shrinks as `M^-r_gamma`.
    /// Only meaningful when `contamination_free` is false; use 0 for a
    /// constant number of sharing cells.
    pub sharing_decay: f64,
    /// True when the trajectory has no pilot contamination at all
    /// (`L_p = 0` throughout).
    pub contamination_free: bool,
}

impl ScalingExponents {
    /// Builds and validates a set of exponents.
    pub fn new(
        train_decay: f64,
        user_growth: f64,
        power_decay: f64,
        sharing_decay: f64,
        contamination_free: bool,
    ) -> Result<Self> {
        let s = Self {
            train_decay,
            user_growth,
            power_decay,
            sharing_decay,
            contamination_free,
        };
        for (name, v) in [
            ("train_decay", train_decay),
            ("user_growth", user_growth),
            ("power_decay", power_decay),
            ("sharing_decay", sharing_decay),
        ] {
            if !v.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&v) {
                return Err(Error::InvalidConfig(format!(
                    "scaling exponent {name} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(s)
    }

    /// Sum `r_t + r_k + r_rho`, the total resource-saving pressure.
    pub fn saving_sum(&self) -> f64 {
        self.train_decay + self.user_growth + self.power_decay
    }
}

/// Growth exponent `r_s` of the effective SINR along the trajectory.
///
/// * No contamination: `r_s = 1 - (r_t + r_k + r_rho)` — array gain minus
///   everything spent on saving resources.
/// * With contamination: `r_s = min(1 - (r_t + r_k + r_rho), r_gamma)` —
///   the contamination floor `L_p a^2` caps growth at the rate the
///   contamination itself decays (`r_gamma = 0` means a hard ceiling).
pub fn scaling_exponent(s: &ScalingExponents) -> f64 {
    let base = 1.0 - s.saving_sum();
    if s.contamination_free {
        base
    } else {
        base.min(s.sharing_decay)
    }
}

/// Whether the SINR is non-decreasing in `M` along the trajectory:
/// `r_t + r_k + r_rho <= 1`, for both contaminated and contamination-free
/// networks.
pub fn non_decreasing_check(s: &ScalingExponents) -> bool {
    s.saving_sum() <= 1.0 + 1e-12
}

/// Whether the per-trial SINR is asymptotically deterministic (its squared
/// coefficient of variation vanishes at rate `1/M` or faster).
///
/// Contaminated trajectories always are; contamination-free ones need
/// `2 r_t + r_k + 2 r_rho >= 1` (the fluctuating terms must outweigh the
/// hardening signal slowly enough).
pub fn deterministic_check(s: &ScalingExponents) -> bool {
    if !s.contamination_free {
        return true;
    }
    2.0 * s.train_decay + s.user_growth + 2.0 * s.power_decay >= 1.0 - 1e-12
}

/// One dominance comparison inside an applicability verdict.
#[derive(Debug, Clone, Serialize)]
pub struct DominanceCheck {
    /// What is being compared (kept term vs neglected terms).
    pub label: String,
    /// Ratio kept/neglected; the check passes when it reaches the threshold.
    pub ratio: f64,
    /// Whether this individual comparison met the threshold.
    pub satisfied: bool,
}

/// Outcome of a finite-size applicability test.
///
/// `applicable ⇔ margin >= threshold`. For conjoined conditions the margin
/// is the weakest individual ratio; for alternatives it is the strongest
/// branch.
#[derive(Debug, Clone, Serialize)]
pub struct ApplicabilityVerdict {
    /// Does the scaling law describe this operating point?
    pub applicable: bool,
    /// The denominator term the law keeps (everything else is neglected).
    pub dominant_term: String,
    /// Dominance margin; `applicable == (margin >= threshold)`.
    pub margin: f64,
    /// Which regime branch was evaluated (depends on the sign of
    /// `1 - r_t - r_k - r_rho`).
    pub regime: String,
    /// The dominance threshold in force (default 10: one order of
    /// magnitude).
    pub threshold: f64,
    /// Every individual comparison, for diagnostics.
    pub checks: Vec<DominanceCheck>,
}

/// Default dominance threshold: "much larger" means one order of magnitude.
pub const DOMINANCE_THRESHOLD: f64 = 10.0;

fn check(label: impl Into<String>, ratio: f64, threshold: f64) -> DominanceCheck {
    DominanceCheck {
        label: label.into(),
        ratio,
        satisfied: ratio >= threshold,
    }
}

fn verdict_all(
    dominant_term: &str,
    regime: &str,
    threshold: f64,
    checks: Vec<DominanceCheck>,
) -> ApplicabilityVerdict {
    let margin = checks.iter().map(|c| c.ratio).fold(f64::INFINITY, f64::min);
    ApplicabilityVerdict {
        applicable: checks.iter().all(|c| c.satisfied),
        dominant_term: dominant_term.into(),
        margin,
        regime: regime.into(),
        threshold,
        checks,
    }
}

/// Sign classification of `1 - (r_t + r_k + r_rho)` with a tolerance for the
/// exact-rational exponents used in practice.
fn net_growth_sign(s: &ScalingExponents) -> std::cmp::Ordering {
    let net = 1.0 - s.saving_sum();
    if net.abs() < 1e-9 {
        std::cmp::Ordering::Equal
    } else if net > 0.0 {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Less
    }
}

/// Finite-size applicability of the MRT scaling law at the operating point
/// `cfg` (already instantiated at its antenna count).
///
/// Without contamination the law keeps only the noise term, so it applies
/// when `1/rho >> (1/c)(1 - Q/K)`. With contamination the kept term depends
/// on the trajectory: if resources shrink faster than the array grows
/// (`sum > 1`) noise must dominate; if slower (`sum < 1`) the contamination
/// floor must dominate; on the boundary either suffices.
pub fn mrt_applicability(
    cfg: &NetworkConfig,
    s: &ScalingExponents,
    threshold: f64,
) -> ApplicabilityVerdict {
    let m = cfg.antennas as f64;
    let k = cfg.users_per_cell as f64;
    let lp = cfg.sharing_cells as f64;
    let a = cfg.cross_gain;
    let q = cfg.csi_quality();
    let c = cfg.effective_corr();
    let rho = cfg.data_snr;

    if cfg.sharing_cells == 0 {
        let ratio = (1.0 / rho) / ((1.0 / c) * (1.0 - q / k));
        return verdict_all(
            "noise",
            "contamination-free",
            threshold,
            vec![check("noise vs residual interference", ratio, threshold)],
        );
    }

    // chi: interference-plus-contamination factor of the contaminated
    // denominator, (K/Q)(1 + a L_p) - 1.
    let chi = (k / q) * (1.0 + a * lp) - 1.0;
    let floor = lp * a * a;
    let noise = k / (m * q * rho);

    match net_growth_sign(s) {
        std::cmp::Ordering::Less => {
            // Shrinking SINR: the noise term must bury interference + floor.
            let ratio = noise / (chi / (m * c) + floor);
            verdict_all(
                "noise",
                "contaminated, net decay",
                threshold,
                vec![check("noise vs interference + contamination", ratio, threshold)],
            )
        }
        std::cmp::Ordering::Greater => {
            // Growth capped by the floor: it must bury the vanishing terms.
            let ratio = floor / ((chi / c + k / (q * rho)) / m);
            verdict_all(
                "contamination floor",
                "contaminated, net growth",
                threshold,
                vec![check(
                    "contamination vs interference + noise",
                    ratio,
                    threshold,
                )],
            )
        }
        std::cmp::Ordering::Equal => {
            // Boundary: either dominance pattern validates the law.
            let floor_ratio = floor / ((chi / c + k / (q * rho)) / m);
            let noise_ratio = (k / (q * rho)) / (chi / c);
            let checks = vec![
                check("contamination vs interference + noise", floor_ratio, threshold),
                check("noise vs interference", noise_ratio, threshold),
            ];
            let applicable = checks.iter().any(|c| c.satisfied);
            let (margin, dominant) = if floor_ratio >= noise_ratio {
                (floor_ratio, "contamination floor")
            } else {
                (noise_ratio, "noise")
            };
            ApplicabilityVerdict {
                applicable,
                dominant_term: dominant.into(),
                margin,
                regime: "contaminated, boundary (either dominance suffices)".into(),
                threshold,
                checks,
            }
        }
    }
}

/// Finite-size applicability of the ZF scaling law. Requires the subspace to
/// be strictly larger than the user load (`delta > K`), as does ZF itself.
///
/// The ZF noise condition `1/rho >> (1-Q)/c` is weaker than MRT's because ZF
/// removes intra-cell interference; the price is an extra `Mc >> K` clause
/// whenever the user count grows sublinearly (`r_k < 1`), so that the lost
/// degrees of freedom stay negligible.
pub fn zf_applicability(
    cfg: &NetworkConfig,
    s: &ScalingExponents,
    threshold: f64,
) -> Result<ApplicabilityVerdict> {
    let delta = cfg.delta() as f64;
    let k = cfg.users_per_cell as f64;
    if delta <= k {
        return Err(Error::Domain(format!(
            "zero forcing needs delta > K, got delta = {delta}, K = {k}"
        )));
    }
    let m = cfg.antennas as f64;
    let lp = cfg.sharing_cells as f64;
    let a = cfg.cross_gain;
    let q = cfg.csi_quality();
    let c = cfg.effective_corr();
    let rho = cfg.data_snr;
    let dim_check = check("subspace dimension vs users", delta / k, threshold);

    if cfg.sharing_cells == 0 {
        let snr_check = check(
            "noise vs estimation-error leakage",
            (1.0 / rho) / ((1.0 - q) / c),
            threshold,
        );
        let full_user_load = (s.user_growth - 1.0).abs() < 1e-9;
        let checks = if full_user_load {
            vec![snr_check]
        } else {
            vec![snr_check, dim_check]
        };
        return Ok(verdict_all(
            "noise",
            if full_user_load {
                "contamination-free, linear user growth"
            } else {
                "contamination-free, sublinear user growth"
            },
            threshold,
            checks,
        ));
    }

    // chi_tilde: total estimation-error leakage factor,
    // 1 + a L_p - Q (1 + a^2 L_p).
    let chi_tilde = 1.0 + a * lp - q * (1.0 + a * a * lp);
    let floor = lp * a * a;

    Ok(match net_growth_sign(s) {
        std::cmp::Ordering::Less => {
            let noise_ratio = (1.0 / rho) / (floor * q * m / k + chi_tilde / c);
            verdict_all(
                "noise",
                "contaminated, net decay",
                threshold,
                vec![
                    check("noise vs contamination + error leakage", noise_ratio, threshold),
                    dim_check,
                ],
            )
        }
        std::cmp::Ordering::Greater => {
            let ratio = floor / (k * (c / rho + chi_tilde) / (q * (delta - k)));
            verdict_all(
                "contamination floor",
                "contaminated, net growth",
                threshold,
                vec![check(
                    "contamination vs noise + error leakage",
                    ratio,
                    threshold,
                )],
            )
        }
        std::cmp::Ordering::Equal => {
            let floor_ratio = floor / (k * (c / rho + chi_tilde) / (q * (delta - k)));
            let noise_ratio = (1.0 / rho) / (chi_tilde / c);
            let alt = vec![
                check("noise vs error leakage", noise_ratio, threshold),
                dim_check.clone(),
            ];
            let alt_ok = alt.iter().all(|c| c.satisfied);
            let alt_margin = alt.iter().map(|c| c.ratio).fold(f64::INFINITY, f64::min);
            let mut checks =
                vec![check("contamination vs noise + error leakage", floor_ratio, threshold)];
            checks.extend(alt);
            let applicable = checks[0].satisfied || alt_ok;
            let (margin, dominant) = if floor_ratio >= alt_margin {
                (floor_ratio, "contamination floor")
            } else {
                (alt_margin, "noise")
            };
            ApplicabilityVerdict {
                applicable,
                dominant_term: dominant.into(),
                margin,
                regime: "contaminated, boundary (either dominance suffices)".into(),
                threshold,
                checks,
            }
        }
    })
}

/// Least-squares exponent of `value ~ M^slope` from measured points.
/// Requires at least 3 points with strictly increasing positive `M` and
/// positive values.
pub fn estimate_exponent(points: &[(f64, f64)]) -> Result<f64> {
    validate_fit_points(points)?;
    Ok(log_log_slope(points)?.0)
}

/// Fits the decay model `value = a / M^b`; returns `(a, b)`.
pub fn fit_power_decay(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    validate_fit_points(points)?;
    let (slope, intercept) = log_log_slope(points)?;
    Ok((intercept.exp(), -slope))
}

fn validate_fit_points(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < 3 {
        return Err(Error::Domain(format!(
            "exponent fitting needs at least 3 points, got {}",
            points.len()
        )));
    }
    for w in points.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::Domain(
                "exponent fitting needs strictly increasing abscissas".into(),
            ));
        }
    }
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(Error::Domain(format!(
                "exponent fitting needs positive finite points, got ({x}, {y})"
            )));
        }
    }
    Ok(())
}
