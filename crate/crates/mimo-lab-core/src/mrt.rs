//! Maximum ratio transmission: per-trial SINR decomposition, closed-form
//! component moments, Gaussian quartic moments, and the effective-SINR rate
//! lower bound.
//!
//! In the downlink each base station beamforms toward its own users with the
//! conjugates of its channel *estimates*. For a victim user the received
//! power splits into four normalized components ([`SinrBreakdown`]):
//!
//! * `signal` — the intended beam, `||h_hat||^4 / M^2`;
//! * `intra_interference` — beams of same-cell co-users;
//! * `inter_interference` — beams of same-pilot users in sharing cells,
//!   coupled through the alias relation of contaminated estimates;
//! * `error_leakage` — power received through channel-estimation errors,
//!   which no beamformer can see.
//!
//! Because estimates live in a `delta`-dimensional subspace with i.i.d.
//! Gaussian coordinates, every component has Gamma-type moments in closed
//! form; [`component_moments`] and [`quartic_moment`] expose them. The
//! [`effective_sinr`] closed form summarizes the whole cell: it is exactly
//! the harmonic mean of the per-trial SINR in which the signal power is
//! pinned at its large-system value (see
//! [`instantaneous_sinr_pinned_signal`]).

use serde::Serialize;

use crate::config::NetworkConfig;
use crate::error::{Error, Result};

/// Normalized per-trial received-power components for one victim user under
/// MRT. See the module docs for definitions; all four are ratios of realized
/// beam powers to their natural array-size normalizations, so they stay O(1)
/// as the array grows.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct SinrBreakdown {
    /// `||h_hat_m||^4 / M^2`.
    pub signal: f64,
    /// `sum_{k != m} |h_hat_m^H h_hat_k|^2 / ((K-1) M)`; zero when `K = 1`.
    pub intra_interference: f64,
    /// `cross_gain^2 * sum_{l,k} |h_hat_{l,m}^H h_hat_{l,k}|^2 / (K L_p M^2)`
    /// over sharing cells `l`; zero when `L_p = 0`.
    pub inter_interference: f64,
    /// `sum_{l,k} |err_{l,m}^H h_hat_{l,k}|^2 / (K (L_p+1) M)` over the own
    /// cell and all sharing cells.
    pub error_leakage: f64,
}

/// Per-trial SINR of the victim user given its realized power components.
///
/// Numerator: `M * signal`. Denominator: each interference class weighted by
/// its multiplicity, plus the noise floor `K * csi_quality / data_snr` left
/// after transmit-power normalization.
pub fn instantaneous_sinr(cfg: &NetworkConfig, b: &SinrBreakdown) -> f64 {
    let m = cfg.antennas as f64;
    m * b.signal / denominator(cfg, b)
}

/// Per-trial SINR with the signal power pinned at its large-system limit
/// `M * csi_quality^2` (the realized denominator is kept).
///
/// The closed-form [`effective_sinr`] is the exact harmonic mean of *this*
/// quantity; averaging `1/instantaneous_sinr_pinned_signal` over trials must
/// converge to `1/effective_sinr` with no O(1/delta) bias.
pub fn instantaneous_sinr_pinned_signal(cfg: &NetworkConfig, b: &SinrBreakdown) -> f64 {
    let m = cfg.antennas as f64;
    let q = cfg.csi_quality();
    m * q * q / denominator(cfg, b)
}

fn denominator(cfg: &NetworkConfig, b: &SinrBreakdown) -> f64 {
    let m = cfg.antennas as f64;
    let k = cfg.users_per_cell as f64;
    let lp = cfg.sharing_cells as f64;
    let q = cfg.csi_quality();
    (k - 1.0) * b.intra_interference
        + m * k * lp * b.inter_interference
        + k * (lp + 1.0) * b.error_leakage
        + k * q / cfg.data_snr
}

/// Mean of [`SinrBreakdown::error_leakage`] in closed form:
/// `Q / ((L_p+1) c) * ((1-Q) + cross_gain (1 - cross_gain Q) L_p)`
/// with `Q = csi_quality`, `c = effective_corr`.
///
/// Each of the `L_p + 1` base stations leaks through its estimation error of
/// the victim's channel; the error power is `(1-Q)/c` per dimension for the
/// serving cell and `(a/c)(1 - aQ)` for a sharing cell (`a = cross_gain`).
pub fn leakage_closed_form(cfg: &NetworkConfig) -> f64 {
    let q = cfg.csi_quality();
    let c = cfg.effective_corr();
    let a = cfg.cross_gain;
    let lp = cfg.sharing_cells as f64;
    q / ((lp + 1.0) * c) * ((1.0 - q) + a * (1.0 - a * q) * lp)
}

/// Closed-form first and second moments of the [`SinrBreakdown`] components.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComponentMoments {
    /// `E{signal} = Q^2 (1 + 1/delta)` — exact at every array size.
    pub mean_signal: f64,
    /// Exact squared coefficient of variation of `signal`,
    /// `(4 delta + 6) / (delta (delta+1))`; behaves as `4/delta` for large
    /// arrays, so the signal hardens at rate `1/M`.
    pub scv_signal: f64,
    /// `E{intra_interference} = Q^2 / c` (per interfering co-user; `None`
    /// when `K = 1` and the component is empty).
    pub mean_intra: Option<f64>,
    /// `E{inter_interference} = cross_gain^2 Q^2 (1/K + 1/delta)`; `None`
    /// when no cell shares the pilots.
    pub mean_inter: Option<f64>,
    /// Large-system squared coefficient of variation of
    /// `inter_interference`:
    /// `(4 + 5(K+1)/delta + (K^2+K+4)/delta^2) / (L_p delta (1 + K/delta)^2)`.
    /// The constant term is a central-limit approximation whose relative
    /// error is below 0.6% at practical sizes; `None` when `L_p = 0`.
    pub scv_inter: Option<f64>,
    /// `E{error_leakage}` — see [`leakage_closed_form`].
    pub mean_leakage: f64,
}

/// Evaluates [`ComponentMoments`] for a configuration.
pub fn component_moments(cfg: &NetworkConfig) -> ComponentMoments {
    let q = cfg.csi_quality();
    let c = cfg.effective_corr();
    let a = cfg.cross_gain;
    let d = cfg.delta() as f64;
    let k = cfg.users_per_cell as f64;
    let lp = cfg.sharing_cells as f64;

    let mean_intra = (cfg.users_per_cell > 1).then(|| q * q / c);
    let mean_inter = (cfg.sharing_cells > 0).then(|| a * a * q * q * (1.0 / k + 1.0 / d));
    let scv_inter = (cfg.sharing_cells > 0).then(|| {
        (4.0 + 5.0 * (k + 1.0) / d + (k * k + k + 4.0) / (d * d))
            / (lp * d * (1.0 + k / d).powi(2))
    });

    ComponentMoments {
        mean_signal: q * q * (1.0 + 1.0 / d),
        scv_signal: (4.0 * d + 6.0) / (d * (d + 1.0)),
        mean_intra,
        mean_inter,
        scv_inter,
        mean_leakage: leakage_closed_form(cfg),
    }
}

/// The joint-moment patterns of estimate inner products that arise when
/// squaring the interference terms: `E{ |u_m^H u_k|^2 |v_m^H v_i|^2 }` and
/// its lower-order specializations, classified by which of the cell indices
/// (`u` vs `v`) and user indices (`m`, `k`, `i`) coincide.
///
/// `u`/`v` are in-cell channel estimates with i.i.d. `CN(0, Q/c)` subspace
/// coordinates; same-cell patterns share the vector `u = v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuarticCase {
    /// `E{ u_m^H u_m }` — mean squared norm of one estimate.
    NormMean,
    /// `E{ (u_m^H u_m)^2 }` — second moment of the squared norm.
    NormPairSameUser,
    /// `E{ (u_m^H u_m)(u_k^H u_k) }`, `k != m` — product of two distinct
    /// squared norms.
    NormPairDistinct,
    /// `E{ |u_m^H u_k|^2 }` with `k = m` (coincides with
    /// [`QuarticCase::NormPairSameUser`] as a statistic; kept as its own
    /// pattern for complete verification tables).
    CrossPowerSameUser,
    /// `E{ |u_m^H u_k|^2 }`, `k != m` — cross-beam power between distinct
    /// users.
    CrossPowerDistinctUsers,
    /// Same cell, `i = k = m`: `E{ (u_m^H u_m)^4 }`... the fully collapsed
    /// fourth power of one squared norm.
    QuadAllSame,
    /// Same cell, `i = k != m`: `E{ |u_m^H u_k|^4 }`. The only pattern whose
    /// large-system form differs from the exact moment (see
    /// [`quartic_moment_asymptotic`]).
    QuadSameCellPairedUsers,
    /// Same cell, `i != k`, one of them equal to `m`:
    /// `E{ (u_m^H u_m)^2 |u_m^H u_i|^2 }`.
    QuadSameCellSharedVictim,
    /// Same cell, `m`, `k`, `i` all distinct:
    /// `E{ |u_m^H u_k|^2 |u_m^H u_i|^2 }`.
    QuadSameCellDistinct,
    /// Different cells, `i = k = m`: `E{ (u_m^H u_m)^2 (v_m^H v_m)^2 }`.
    QuadCrossCellAllSame,
    /// Different cells, `k = m`, `i != m`:
    /// `E{ (u_m^H u_m)^2 |v_m^H v_i|^2 }`.
    QuadCrossCellShared,
    /// Different cells, `k != m`, `i != m`:
    /// `E{ |u_m^H u_k|^2 |v_m^H v_i|^2 }`.
    QuadCrossCellDistinct,
}

impl QuarticCase {
    /// Every pattern, in verification-table order.
    pub const ALL: [QuarticCase; 12] = [
        QuarticCase::NormMean,
        QuarticCase::NormPairSameUser,
        QuarticCase::NormPairDistinct,
        QuarticCase::CrossPowerSameUser,
        QuarticCase::CrossPowerDistinctUsers,
        QuarticCase::QuadAllSame,
        QuarticCase::QuadSameCellPairedUsers,
        QuarticCase::QuadSameCellSharedVictim,
        QuarticCase::QuadSameCellDistinct,
        QuarticCase::QuadCrossCellAllSame,
        QuarticCase::QuadCrossCellShared,
        QuarticCase::QuadCrossCellDistinct,
    ];

    /// Stable snake_case label for reports and CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            QuarticCase::NormMean => "norm_mean",
            QuarticCase::NormPairSameUser => "norm_pair_same_user",
            QuarticCase::NormPairDistinct => "norm_pair_distinct",
            QuarticCase::CrossPowerSameUser => "cross_power_same_user",
            QuarticCase::CrossPowerDistinctUsers => "cross_power_distinct_users",
            QuarticCase::QuadAllSame => "quad_all_same",
            QuarticCase::QuadSameCellPairedUsers => "quad_same_cell_paired_users",
            QuarticCase::QuadSameCellSharedVictim => "quad_same_cell_shared_victim",
            QuarticCase::QuadSameCellDistinct => "quad_same_cell_distinct",
            QuarticCase::QuadCrossCellAllSame => "quad_cross_cell_all_same",
            QuarticCase::QuadCrossCellShared => "quad_cross_cell_shared",
            QuarticCase::QuadCrossCellDistinct => "quad_cross_cell_distinct",
        }
    }
}

/// Exact moment for a [`QuarticCase`] under the estimate distribution of
/// `cfg` (subspace coordinates i.i.d. `CN(0, Q/c)`).
///
/// Everything reduces to Gamma moments of `||u||^2 ~ Gamma(delta)` and the
/// conditional Gaussianity of `u^H v` given `u`.
pub fn quartic_moment(cfg: &NetworkConfig, case: QuarticCase) -> f64 {
    let p = cfg.csi_quality() / cfg.effective_corr();
    let d = cfg.delta() as f64;
    match case {
        QuarticCase::NormMean => p * d,
        QuarticCase::NormPairSameUser | QuarticCase::CrossPowerSameUser => p * p * d * (d + 1.0),
        QuarticCase::NormPairDistinct => p * p * d * d,
        QuarticCase::CrossPowerDistinctUsers => p * p * d,
        QuarticCase::QuadAllSame => p.powi(4) * d * (d + 1.0) * (d + 2.0) * (d + 3.0),
        QuarticCase::QuadSameCellPairedUsers => p.powi(4) * 2.0 * d * (d + 1.0),
        QuarticCase::QuadSameCellSharedVictim => p.powi(4) * d * (d + 1.0) * (d + 2.0),
        QuarticCase::QuadSameCellDistinct => p.powi(4) * d * (d + 1.0),
        QuarticCase::QuadCrossCellAllSame => p.powi(4) * d * d * (d + 1.0) * (d + 1.0),
        QuarticCase::QuadCrossCellShared => p.powi(4) * d * d * (d + 1.0),
        QuarticCase::QuadCrossCellDistinct => p.powi(4) * d * d,
    }
}

/// Large-system (published-table) value for a [`QuarticCase`].
///
/// Identical to [`quartic_moment`] for every pattern except
/// [`QuarticCase::QuadSameCellPairedUsers`], where treating the cross inner
/// product as Gaussian replaces the exact `2 d (d+1)` by `2 d^2` — a
/// relative gap of exactly `1/(d+1)` that verification reports must budget
/// for.
pub fn quartic_moment_asymptotic(cfg: &NetworkConfig, case: QuarticCase) -> f64 {
    let p = cfg.csi_quality() / cfg.effective_corr();
    let d = cfg.delta() as f64;
    match case {
        QuarticCase::QuadSameCellPairedUsers => p.powi(4) * 2.0 * d * d,
        _ => quartic_moment(cfg, case),
    }
}

/// Closed-form effective SINR of MRT: the deterministic equivalent that the
/// per-user SINR concentrates on as the array grows.
///
/// `1 / ( K(1+aL_p)/(MQc) - 1/(Mc) + L_p a^2 + K/(MQ rho) )`, with
/// `Q = csi_quality`, `c = effective_corr`, `a = cross_gain`. The
/// contamination floor `L_p a^2` survives all power scaling; every other
/// term shrinks as `1/M`. Errors if the denominator is not positive (cannot
/// happen for a validated configuration; guarded for robustness).
pub fn effective_sinr(cfg: &NetworkConfig) -> Result<f64> {
    let m = cfg.antennas as f64;
    let k = cfg.users_per_cell as f64;
    let lp = cfg.sharing_cells as f64;
    let a = cfg.cross_gain;
    let q = cfg.csi_quality();
    let c = cfg.effective_corr();
    let den = k * (1.0 + a * lp) / (m * q * c) - 1.0 / (m * c)
        + lp * a * a
        + k / (m * q * cfg.data_snr);
    if den <= 0.0 || !den.is_finite() {
        return Err(Error::Domain(format!(
            "effective SINR denominator must be positive, got {den}"
        )));
    }
    Ok(1.0 / den)
}

/// Per-user ergodic rate lower bound, `log2(1 + effective_sinr)`.
pub fn rate_lower_bound(cfg: &NetworkConfig) -> Result<f64> {
    Ok((1.0 + effective_sinr(cfg)?).log2())
}

/// Network sum-rate lower bound: per-user bound times `K` users times `L`
/// cells.
pub fn sum_rate_lower_bound(cfg: &NetworkConfig) -> Result<f64> {
    Ok(cfg.cells as f64 * cfg.users_per_cell as f64 * rate_lower_bound(cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> NetworkConfig {
        NetworkConfig::new(7, 100, 10, 0.6, 0.3, 0, 10.0, 10.0).unwrap()
    }

    fn contaminated() -> NetworkConfig {
        NetworkConfig::new(7, 100, 10, 0.6, 0.3, 5, 10.0, 10.0).unwrap()
    }

    #[test]
    fn leakage_reference_value_and_equivalent_spelling() {
        // Q(1-Q)/c at Q = 1/1.06, c = 0.6.
        let pe = leakage_closed_form(&base());
        assert!((pe - 0.088_999_644).abs() < 1e-8, "pe = {pe}");

        // The grouped spelling 1 + aL_p - Q(1 + a^2 L_p) must agree.
        for cfg in [base(), contaminated()] {
            let q = cfg.csi_quality();
            let a = cfg.cross_gain;
            let lp = cfg.sharing_cells as f64;
            let grouped = q / ((lp + 1.0) * cfg.effective_corr())
                * (1.0 + a * lp - q * (1.0 + a * a * lp));
            assert!((leakage_closed_form(&cfg) - grouped).abs() < 1e-15);
        }
    }

    #[test]
    fn effective_sinr_reference_point() {
        let s = effective_sinr(&base()).unwrap();
        assert!((s - 5.861_664_7).abs() < 1e-4, "effective SINR {s}");
        let r = rate_lower_bound(&base()).unwrap();
        assert!((r - 2.778_558_6).abs() < 1e-4, "rate bound {r}");
        let sum = sum_rate_lower_bound(&base()).unwrap();
        assert!((sum - 70.0 * r).abs() < 1e-9);
    }

    #[test]
    fn contamination_sets_a_ceiling() {
        // With sharing cells the effective SINR can never exceed
        // 1 / (L_p a^2) no matter how large the array gets.
        let ceiling = 1.0 / (5.0 * 0.09);
        let mut last = 0.0;
        for m in [100usize, 1_000, 10_000, 1_000_000] {
            let cfg = NetworkConfig {
                antennas: m,
                ..contaminated()
            }
            .validated()
            .unwrap();
            let s = effective_sinr(&cfg).unwrap();
            assert!(s < ceiling, "SINR {s} above ceiling {ceiling} at M={m}");
            assert!(s > last, "SINR must increase with M");
            last = s;
        }
        assert!(
            (last - ceiling).abs() / ceiling < 1e-3,
            "SINR {last} should approach {ceiling}"
        );
    }

    #[test]
    fn component_means_reference_values() {
        let m = component_moments(&base());
        // Q^2 / c.
        assert!(
            (m.mean_intra.unwrap() - 1.483_327_4).abs() < 1e-6,
            "intra {:?}",
            m.mean_intra
        );
        // Q^2 (1 + 1/60).
        assert!(
            (m.mean_signal - 0.904_829_7).abs() < 1e-6,
            "signal {}",
            m.mean_signal
        );
        assert!(m.mean_inter.is_none());
        assert!(m.scv_inter.is_none());

        // Contaminated small-array point: Q = 1/2.559375 (delta = 38),
        // a^2 Q^2 (1/K + 1/delta).
        let small = NetworkConfig::new(7, 64, 8, 0.6, 0.3, 5, 10.0, 10.0).unwrap();
        let sm = component_moments(&small);
        assert!(
            (sm.mean_inter.unwrap() - 0.002_079_0).abs() < 1e-6,
            "inter {:?}",
            sm.mean_inter
        );
    }

    #[test]
    fn single_user_cell_has_no_intra_component() {
        let cfg = NetworkConfig::new(7, 100, 1, 0.6, 0.3, 0, 10.0, 10.0).unwrap();
        assert!(component_moments(&cfg).mean_intra.is_none());
        // And the SINR denominator ignores whatever sits in that field.
        let b = SinrBreakdown {
            signal: 1.0,
            intra_interference: 123.0,
            inter_interference: 0.0,
            error_leakage: 0.0,
        };
        let s = instantaneous_sinr(&cfg, &b);
        let expected = 100.0 / (cfg.csi_quality() / 10.0);
        assert!((s - expected).abs() < 1e-9);
    }

    #[test]
    fn quartic_conventions_differ_only_in_the_paired_users_pattern() {
        for cfg in [base(), contaminated()] {
            let d = cfg.delta() as f64;
            for case in QuarticCase::ALL {
                let exact = quartic_moment(&cfg, case);
                let asym = quartic_moment_asymptotic(&cfg, case);
                if case == QuarticCase::QuadSameCellPairedUsers {
                    let ratio = asym / exact;
                    assert!(
                        (ratio - d / (d + 1.0)).abs() < 1e-12,
                        "paired-users gap should be exactly d/(d+1)"
                    );
                } else {
                    assert_eq!(exact, asym, "{}", case.label());
                }
            }
        }
    }

    #[test]
    fn quartic_moments_factorize_across_cells() {
        // Cross-cell patterns are products of single-cell moments.
        let cfg = contaminated();
        let q = |c| quartic_moment(&cfg, c);
        assert!(
            (q(QuarticCase::QuadCrossCellAllSame)
                - q(QuarticCase::NormPairSameUser).powi(2))
            .abs()
                < 1e-6
        );
        assert!(
            (q(QuarticCase::QuadCrossCellShared)
                - q(QuarticCase::NormPairSameUser) * q(QuarticCase::CrossPowerDistinctUsers))
            .abs()
                < 1e-6
        );
        assert!(
            (q(QuarticCase::QuadCrossCellDistinct)
                - q(QuarticCase::CrossPowerDistinctUsers).powi(2))
            .abs()
                < 1e-6
        );
    }

    #[test]
    fn effective_sinr_is_harmonic_mean_of_pinned_signal_form() {
        // The mean SINR denominator assembled from component moments, divided
        // by the pinned numerator M Q^2, must reproduce 1/effective_sinr
        // exactly. This ties the per-trial decomposition to the closed form.
        for cfg in [base(), contaminated()] {
            let m = cfg.antennas as f64;
            let k = cfg.users_per_cell as f64;
            let lp = cfg.sharing_cells as f64;
            let q = cfg.csi_quality();
            let mom = component_moments(&cfg);
            let mean_den = (k - 1.0) * mom.mean_intra.unwrap_or(0.0)
                + m * k * lp * mom.mean_inter.unwrap_or(0.0)
                + k * (lp + 1.0) * mom.mean_leakage
                + k * q / cfg.data_snr;
            let inv = mean_den / (m * q * q);
            let eff = effective_sinr(&cfg).unwrap();
            assert!(
                (inv * eff - 1.0).abs() < 1e-12,
                "harmonic identity broken: {} vs {}",
                1.0 / inv,
                eff
            );
        }
    }

    #[test]
    fn signal_scv_decays_like_inverse_delta() {
        let m = component_moments(&base());
        let d = 60.0;
        assert!((m.scv_signal - (4.0 * d + 6.0) / (d * (d + 1.0))).abs() < 1e-15);
        // Large-array trend: doubling delta roughly halves the SCV.
        let big = NetworkConfig {
            antennas: 200,
            ..base()
        }
        .validated()
        .unwrap();
        let ratio = component_moments(&big).scv_signal / m.scv_signal;
        assert!((ratio - 0.5).abs() < 0.03, "ratio {ratio}");
    }
}
