//! Streaming statistics for Monte Carlo estimates.
//!
//! The engine reduces trials through [`RunningMoments`], a numerically stable
//! one-pass accumulator of the first four central moments. From it we read
//! the sample mean with its standard error and the squared coefficient of
//! variation (SCV) with a delta-method standard error — the two summary
//! statistics every convergence claim in this crate rests on.

use crate::error::{Error, Result};

/// One-pass accumulator of count, mean, and 2nd–4th central moment sums.
///
/// Uses the standard single-pass update recurrences, so it is safe for
/// millions of samples of widely varying magnitude and supports pairwise
/// merging (needed for deterministic parallel reduction).
#[derive(Debug, Clone, Default)]
pub struct RunningMoments {
    n: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl RunningMoments {
    /// Empty accumulator.
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an accumulator from a slice in one pass.
    pub fn from_samples(samples: &[f64]) -> Self {
        let mut acc = Self::new();
        for &x in samples {
            acc.push(x);
        }
        acc
    }

    /// Number of samples absorbed.
    pub fn count(&self) -> u64 {
        self.n
    }

    /// Absorbs one sample.
    pub fn push(&mut self, x: f64) {
        let n1 = self.n as f64;
        self.n += 1;
        let n = self.n as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * n1;
        self.mean += delta_n;
        self.m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3;
        self.m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term1;
    }

    /// Merges another accumulator into this one; the result is identical to
    /// having pushed both sample sets into a single accumulator (up to
    /// floating-point roundoff).
    pub fn merge(&mut self, other: &Self) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = other.clone();
            return;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let delta = other.mean - self.mean;
        let delta2 = delta * delta;

        let m4 = self.m4
            + other.m4
            + delta2 * delta2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * delta2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n;
        let m3 = self.m3
            + other.m3
            + delta2 * delta * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n;
        let m2 = self.m2 + other.m2 + delta2 * na * nb / n;

        self.mean += delta * nb / n;
        self.m2 = m2;
        self.m3 = m3;
        self.m4 = m4;
        self.n += other.n;
    }

    /// Sample mean.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n as f64 - 1.0)
        }
    }

    /// Standard error of the sample mean.
    pub fn std_error(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }

    /// Squared coefficient of variation, `variance / mean^2` (unbiased
    /// variance). Returns `None` when the mean is too close to zero for the
    /// ratio to be meaningful.
    pub fn scv(&self) -> Option<f64> {
        if self.n < 2 || self.mean.abs() < f64::EPSILON {
            None
        } else {
            Some(self.variance() / (self.mean * self.mean))
        }
    }

    /// Delta-method standard error of [`RunningMoments::scv`].
    ///
    /// With population central moments `mu_k` and mean `m`,
    /// `Var(scv_hat) ≈ [ (mu4 - mu2^2)/m^4 + 4 mu2^3/m^6 - 4 mu2 mu3/m^5 ] / n`.
    pub fn scv_std_error(&self) -> Option<f64> {
        if self.n < 2 || self.mean.abs() < f64::EPSILON {
            return None;
        }
        let n = self.n as f64;
        let m = self.mean;
        let mu2 = self.m2 / n;
        let mu3 = self.m3 / n;
        let mu4 = self.m4 / n;
        let var = ((mu4 - mu2 * mu2) / m.powi(4) + 4.0 * mu2.powi(3) / m.powi(6)
            - 4.0 * mu2 * mu3 / m.powi(5))
            / n;
        Some(var.max(0.0).sqrt())
    }

    /// Standardized deviation of the sample mean from a reference value.
    pub fn z_score(&self, reference: f64) -> f64 {
        let se = self.std_error();
        if se == 0.0 {
            if self.mean == reference {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - reference) / se
        }
    }
}

/// Ordinary least squares on `(ln x, ln y)`; returns `(slope, intercept)`.
///
/// This is the workhorse behind every fitted exponent in the crate: power
/// laws `y = a * x^b` become straight lines in log-log coordinates with
/// slope `b` and intercept `ln a`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::Numerical(format!(
            "log-log fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    for &(x, y) in points {
        if !(x.is_finite() && y.is_finite() && x > 0.0 && y > 0.0) {
            return Err(Error::Numerical(format!(
                "log-log fit requires positive finite coordinates, got ({x}, {y})"
            )));
        }
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (lx, ly) in logs {
        sxx += (lx - mean_x) * (lx - mean_x);
        sxy += (lx - mean_x) * (ly - mean_y);
    }
    if sxx <= 0.0 {
        return Err(Error::Numerical(
            "log-log fit is degenerate: all abscissas coincide".into(),
        ));
    }
    let slope = sxy / sxx;
    Ok((slope, mean_y - slope * mean_x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedPath;
    use rand::Rng;
    use rand_distr::{Distribution, Gamma};

    #[test]
    fn moments_match_two_pass_reference() {
        let data = [3.5, -1.0, 0.25, 9.0, 4.0, 4.0, -2.5, 0.0, 7.75];
        let acc = RunningMoments::from_samples(&data);
        let n = data.len() as f64;
        let mean = data.iter().sum::<f64>() / n;
        let var =
            data.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        assert!((acc.mean() - mean).abs() < 1e-12);
        assert!((acc.variance() - var).abs() < 1e-12);
    }

    #[test]
    fn merge_equals_single_pass() {
        let data: Vec<f64> = (0..101).map(|i| ((i * 37) % 17) as f64 - 5.0).collect();
        let whole = RunningMoments::from_samples(&data);
        let (a, b) = data.split_at(29);
        let mut merged = RunningMoments::from_samples(a);
        merged.merge(&RunningMoments::from_samples(b));
        assert_eq!(whole.count(), merged.count());
        assert!((whole.mean() - merged.mean()).abs() < 1e-12);
        assert!((whole.variance() - merged.variance()).abs() < 1e-10);
        assert!(
            (whole.scv().unwrap() - merged.scv().unwrap()).abs() < 1e-10,
            "scv mismatch"
        );
        assert!(
            (whole.scv_std_error().unwrap() - merged.scv_std_error().unwrap()).abs() < 1e-10
        );
    }

    #[test]
    fn scv_of_gamma_sample_matches_shape() {
        // Gamma(k, theta) has SCV exactly 1/k regardless of scale.
        let mut rng = SeedPath::new(5, "stats.gamma", 1, 0).rng();
        let gamma = Gamma::new(20.0, 3.0).unwrap();
        let mut acc = RunningMoments::new();
        for _ in 0..40_000 {
            acc.push(gamma.sample(&mut rng));
        }
        let scv = acc.scv().unwrap();
        let se = acc.scv_std_error().unwrap();
        let z = (scv - 0.05) / se;
        assert!(z.abs() < 4.0, "scv {scv} (se {se}) vs 0.05: z = {z}");
        // The delta-method SE should be in the right ballpark:
        // Var ~ (2/k^2 + kurtosis corrections)/n; just require sane scale.
        assert!(se > 1e-4 && se < 2e-3, "se {se} out of expected range");
    }

    #[test]
    fn scv_degenerate_cases() {
        let constant = RunningMoments::from_samples(&[4.0; 10]);
        assert_eq!(constant.scv(), Some(0.0));
        let zero_mean = RunningMoments::from_samples(&[-1.0, 1.0, -1.0, 1.0]);
        assert!(zero_mean.scv().is_none());
        let single = RunningMoments::from_samples(&[3.0]);
        assert!(single.scv().is_none());
    }

    #[test]
    fn z_score_sanity() {
        let mut rng = SeedPath::new(6, "stats.z", 1, 0).rng();
        let mut acc = RunningMoments::new();
        for _ in 0..10_000 {
            acc.push(rng.gen::<f64>()); // U(0,1), mean 0.5
        }
        assert!(acc.z_score(0.5).abs() < 4.0);
        assert!(acc.z_score(0.6).abs() > 10.0);
    }

    #[test]
    fn log_log_fit_recovers_exact_power_law() {
        let points: Vec<(f64, f64)> =
            [100.0, 200.0, 300.0, 400.0_f64].iter().map(|&x| (x, 2.5 * x.powf(-0.75))).collect();
        let (slope, intercept) = log_log_slope(&points).unwrap();
        assert!((slope + 0.75).abs() < 1e-12);
        assert!((intercept - 2.5_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_log_fit_rejects_bad_input() {
        assert!(log_log_slope(&[(1.0, 1.0)]).is_err());
        assert!(log_log_slope(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(log_log_slope(&[(1.0, 1.0), (-2.0, 2.0)]).is_err());
        assert!(log_log_slope(&[(1.0, 0.0), (2.0, 2.0)]).is_err());
        assert!(log_log_slope(&[(1.0, f64::NAN), (2.0, 2.0)]).is_err());
    }
}
