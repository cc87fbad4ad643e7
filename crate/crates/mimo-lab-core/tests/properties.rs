//! Property-based invariants of the laboratory, checked over randomized
//! configurations rather than hand-picked examples.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

use mimo_lab_core::channel::{draw_channel, DirectionBasis};
use mimo_lab_core::engine::run_case_sweep;
use mimo_lab_core::rng::{standard_complex, SeedPath};
use mimo_lab_core::scaling::{
    deterministic_check, non_decreasing_check, scaling_exponent, ScalingExponents,
};
use mimo_lab_core::scenario::{Precoder, PowerLawParam, ScenarioCase, SharingSchedule};
use mimo_lab_core::training::{
    alias_factor, estimate_dimension_power, error_dimension_power, mmse_estimate,
    training_observation, LinkKind,
};
use mimo_lab_core::{mrt, zf, NetworkConfig};

/// A randomized but valid network configuration.
fn config_strategy() -> impl Strategy<Value = NetworkConfig> {
    (
        2usize..8,      // cells
        8usize..80,     // antennas
        1usize..6,      // users per cell
        0.15f64..1.0,   // correlation fraction
        0.05f64..0.95,  // cross gain
        0usize..4,      // sharing cells
        0.2f64..50.0,   // training SNR
        0.2f64..50.0,   // data SNR
    )
        .prop_filter_map("valid config", |(cells, m, k, c, a, lp, et, rho)| {
            if lp + 1 > cells {
                return None;
            }
            NetworkConfig::new(cells, m, k, c, a, lp, et, rho).ok()
        })
}

proptest! {
    /// The direction basis is an isometry: A^H A = I for every admissible
    /// (antennas, dimension) pair, so lifting preserves inner products.
    #[test]
    fn direction_basis_is_unitary(m in 2usize..96, frac in 0.02f64..1.0) {
        let d = ((frac * m as f64).ceil() as usize).clamp(1, m);
        let basis = DirectionBasis::new(m, d).unwrap();
        let a = basis.matrix();
        let gram = a.adjoint() * a;
        let eye = DMatrix::<Complex64>::identity(d, d);
        let worst = (&gram - &eye).iter().map(|x| x.norm()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-12, "||A^H A - I||_max = {worst} at ({m}, {d})");
    }

    /// Estimate power and error power split the link gain exactly, for both
    /// the in-cell link and the contaminating cross link.
    #[test]
    fn estimate_error_power_split(cfg in config_strategy()) {
        let own = estimate_dimension_power(&cfg, LinkKind::Own)
            + error_dimension_power(&cfg, LinkKind::Own);
        let rel = (own - cfg.own_gain()).abs() / cfg.own_gain();
        prop_assert!(rel < 1e-12, "own split off by {rel}");

        let cross = estimate_dimension_power(&cfg, LinkKind::Cross)
            + error_dimension_power(&cfg, LinkKind::Cross);
        let rel = (cross - cfg.cross_cell_gain()).abs() / cfg.cross_cell_gain();
        prop_assert!(rel < 1e-12, "cross split off by {rel}");
    }

    /// Pilot contamination makes the cross-link estimate an exact scalar
    /// multiple of the in-cell estimate: same observation, same filter
    /// direction, different gain.
    #[test]
    fn contaminated_estimates_are_collinear(cfg in config_strategy(), seed in any::<u64>()) {
        prop_assume!(cfg.sharing_cells >= 1);
        let basis = DirectionBasis::for_config(&cfg);
        let mut rng = SeedPath::new(seed, "prop-collinear", cfg.antennas, 0).rng();
        let own = draw_channel(&basis, cfg.own_gain(), &mut rng);
        let cross: Vec<_> = (0..cfg.sharing_cells)
            .map(|_| draw_channel(&basis, cfg.cross_cell_gain(), &mut rng))
            .collect();
        let y = training_observation(&cfg, &own, &cross, &mut rng);

        let est_own = mmse_estimate(&cfg, &basis, &y, LinkKind::Own);
        let est_cross = mmse_estimate(&cfg, &basis, &y, LinkKind::Cross);
        let scaled = &est_own * Complex64::from(alias_factor(&cfg));
        let diff = (&est_cross - &scaled).norm();
        let scale = est_cross.norm().max(1e-30);
        prop_assert!(diff / scale < 1e-10, "collinearity residual {}", diff / scale);
    }

    /// The zero-forcing precoder nulls every estimated co-cell channel:
    /// Hhat^H W = I up to numerical precision.
    #[test]
    fn zero_forcing_nulls_estimated_channels(
        m in 12usize..48,
        k in 1usize..6,
        seed in any::<u64>(),
    ) {
        prop_assume!(m >= 2 * k);
        let mut rng = SeedPath::new(seed, "prop-nulling", m, 0).rng();
        let estimates = DMatrix::from_fn(m, k, |_, _| standard_complex(&mut rng));
        let w = zf::zf_precoder(&estimates).unwrap();
        let product = estimates.adjoint() * &w;
        let eye = DMatrix::<Complex64>::identity(k, k);
        let worst = (&product - &eye).iter().map(|x| x.norm()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-8, "||Hhat^H W - I||_max = {worst}");
    }

    /// Scaling-calculus consistency: the SINR trajectory is non-decreasing
    /// exactly when its growth exponent is non-negative, the exponent never
    /// exceeds the resource budget (nor the contamination decay), and
    /// contaminated trajectories always harden.
    #[test]
    fn scaling_calculus_is_consistent(
        rt in 0.0f64..1.0,
        rk in 0.0f64..1.0,
        rrho in 0.0f64..1.0,
        rgamma in 0.0f64..1.0,
        free in any::<bool>(),
    ) {
        let s = ScalingExponents::new(rt, rk, rrho, rgamma, free).unwrap();
        // Stay off the knife edge where float fuzz flips the comparison.
        prop_assume!((s.saving_sum() - 1.0).abs() > 1e-9);

        let r_s = scaling_exponent(&s);
        prop_assert_eq!(non_decreasing_check(&s), r_s >= 0.0);
        prop_assert!(r_s <= 1.0 - s.saving_sum() + 1e-12);
        if !free {
            prop_assert!(r_s <= rgamma + 1e-12);
            prop_assert!(deterministic_check(&s));
        } else if deterministic_check(&s) {
            // Hardening spends at least half the array gain.
            prop_assert!(r_s <= 0.5 + 1e-9);
        }
    }

    /// Closed-form sanity under contamination: effective SINRs are positive,
    /// finite, and capped by the contamination ceiling for both precoders,
    /// and the published rate bounds are consistent with them.
    #[test]
    fn closed_forms_respect_contamination_ceiling(cfg in config_strategy()) {
        prop_assume!(cfg.sharing_cells >= 1);
        let ceiling = 1.0 / (cfg.sharing_cells as f64 * cfg.cross_gain * cfg.cross_gain);

        let eff = mrt::effective_sinr(&cfg).unwrap();
        prop_assert!(eff.is_finite() && eff > 0.0);
        prop_assert!(eff < ceiling, "mrt {eff} >= ceiling {ceiling}");
        let rate = mrt::rate_lower_bound(&cfg).unwrap();
        prop_assert!((rate - (1.0 + eff).log2()).abs() < 1e-12);
        let sum = mrt::sum_rate_lower_bound(&cfg).unwrap();
        let expected = (cfg.cells * cfg.users_per_cell) as f64 * rate;
        prop_assert!((sum - expected).abs() <= 1e-12 * expected.abs());

        if cfg.delta() > cfg.users_per_cell {
            let eff = zf::effective_sinr(&cfg).unwrap();
            prop_assert!(eff.is_finite() && eff > 0.0);
            prop_assert!(eff < ceiling, "zf {eff} >= ceiling {ceiling}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The Monte Carlo sweep is bitwise independent of the worker count:
    /// per-trial seeds derive from the trial index alone, and reduction is
    /// index-ordered.
    #[test]
    fn sweep_is_bitwise_worker_invariant(seed in any::<u64>(), m_idx in 0usize..3) {
        let m = [16, 24, 32][m_idx];
        let case = ScenarioCase {
            case_id: "prop-workers".into(),
            precoder: Precoder::Mrt,
            cells: 3,
            corr_fraction: 0.6,
            cross_gain: 0.3,
            train_snr: PowerLawParam::constant(10.0),
            data_snr: PowerLawParam::constant(10.0),
            users: PowerLawParam::constant(2.0),
            sharing: SharingSchedule::Constant(1),
            m_grid: vec![m],
        };
        let a = run_case_sweep(&case, &[m], 120, seed, 1).unwrap();
        let b = run_case_sweep(&case, &[m], 120, seed, 2).unwrap();
        let pa = a.rows[0].point.as_ref().unwrap();
        let pb = b.rows[0].point.as_ref().unwrap();
        prop_assert_eq!(pa.mean_sinr.to_bits(), pb.mean_sinr.to_bits());
        prop_assert_eq!(pa.effective_sinr_sim.to_bits(), pb.effective_sinr_sim.to_bits());
        prop_assert_eq!(pa.ergodic_rate.to_bits(), pb.ergodic_rate.to_bits());
        prop_assert_eq!(pa.scv_sinr.to_bits(), pb.scv_sinr.to_bits());
    }
}

/// `DVector` inner products survive the round trip through the basis:
/// project-then-lift is the identity on the subspace. Deterministic spot
/// check complementing the randomized unitarity property.
#[test]
fn lift_preserves_geometry() {
    let basis = DirectionBasis::new(40, 24).unwrap();
    let mut rng = SeedPath::new(7, "prop-lift", 40, 0).rng();
    let w1 = DVector::from_fn(24, |_, _| standard_complex(&mut rng));
    let w2 = DVector::from_fn(24, |_, _| standard_complex(&mut rng));
    let v1 = basis.lift(&w1);
    let v2 = basis.lift(&w2);
    let direct = w1.dotc(&w2);
    let lifted = v1.dotc(&v2);
    assert!((direct - lifted).norm() < 1e-12);
    let back = basis.project(&v1);
    assert!((&back - &w1).norm() < 1e-12);
}
