//! Monte Carlo estimators for the annealed orientation law: correlations,
//! the covariance identity, the admissibility integral and the site
//! characteristic function.

use super::SystemSpec;
use crate::error::CoreError;
use crate::rng::{domain, RngStream};

#[derive(Debug, Clone, Copy)]
pub struct CorrelationEstimate {
    pub lag: i64,
    pub estimate: f64,
    pub std_error: f64,
    pub sample_count: u64,
}

/// Estimates the correlation `C(lag) = E[f(x) f(T^lag x)] - 1/4` of the
/// system for its generating function.
pub fn correlation_estimate(
    spec: &SystemSpec,
    lag: i64,
    sample_count: u64,
    rng: &mut RngStream,
) -> Result<CorrelationEstimate, CoreError> {
    if sample_count < 1_000 {
        return Err(CoreError::SampleCountTooSmall {
            got: sample_count,
            min: 1_000,
        });
    }
    let lag_eff = spec.level_index(lag);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..sample_count {
        let x = spec.sample_point(rng);
        let g = spec.eval_f(&x) * spec.eval_f(&spec.iterate(&x, lag_eff));
        sum += g;
        sum_sq += g * g;
    }
    let n = sample_count as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(CorrelationEstimate {
        lag,
        estimate: mean - 0.25,
        std_error: (var / n).sqrt(),
        sample_count,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct CovarianceIdentityReport {
    pub lag: i64,
    pub cov_hat: f64,
    pub cov_std_error: f64,
    pub four_c_hat: f64,
    pub four_c_std_error: f64,
    pub z_score: f64,
    pub sample_count: u64,
}

/// Checks `Cov(eps_0, eps_lag) = 4 C(lag)` by estimating both sides
/// independently and reporting a z-score for their difference.
///
/// The two orientations of a sample are drawn conditionally independently
/// given the environment point. For nonzero lags this is the annealed joint
/// law of two sites; at lag 0 it makes the identity hold definitionally
/// (the environment-induced variance of the site, not the raw variance 1).
pub fn covariance_identity_check(
    spec: &SystemSpec,
    lag: i64,
    sample_count: u64,
    rng: &mut RngStream,
) -> Result<CovarianceIdentityReport, CoreError> {
    if sample_count < 10_000 {
        return Err(CoreError::SampleCountTooSmall {
            got: sample_count,
            min: 10_000,
        });
    }
    let mut eps_rng = RngStream::new(rng.next_u64()).derive(domain::SPLIT, 0);
    let mut corr_rng = RngStream::new(rng.next_u64()).derive(domain::SPLIT, 1);

    let lag_eff = spec.level_index(lag);
    let (mut sum_prod, mut sum_a, mut sum_b) = (0i64, 0i64, 0i64);
    for _ in 0..sample_count {
        let x = spec.sample_point(&mut eps_rng);
        let p0 = spec.eval_f(&x);
        let py = spec.eval_f(&spec.iterate(&x, lag_eff));
        let e0: i64 = if eps_rng.bernoulli(p0) { 1 } else { -1 };
        let ey: i64 = if eps_rng.bernoulli(py) { 1 } else { -1 };
        sum_prod += e0 * ey;
        sum_a += e0;
        sum_b += ey;
    }
    let n = sample_count as f64;
    let mean_prod = sum_prod as f64 / n;
    let cov_hat = mean_prod - (sum_a as f64 / n) * (sum_b as f64 / n);
    // products are +/-1, so Var(product) = 1 - mean^2
    let cov_se = ((1.0 - mean_prod * mean_prod).max(0.0) / n).sqrt();

    let c = correlation_estimate(spec, lag, sample_count, &mut corr_rng)?;
    let four_c_hat = 4.0 * c.estimate;
    let four_c_se = 4.0 * c.std_error;

    let denom = (cov_se * cov_se + four_c_se * four_c_se).sqrt();
    let z_score = if denom > 0.0 {
        (cov_hat - four_c_hat) / denom
    } else {
        0.0
    };
    Ok(CovarianceIdentityReport {
        lag,
        cov_hat,
        cov_std_error: cov_se,
        four_c_hat,
        four_c_std_error: four_c_se,
        z_score,
        sample_count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibilityVerdict {
    Admissible,
    Diverging,
    Inconclusive,
}

impl AdmissibilityVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            AdmissibilityVerdict::Admissible => "Admissible",
            AdmissibilityVerdict::Diverging => "Diverging",
            AdmissibilityVerdict::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClippedEstimate {
    pub sample_count: u64,
    pub cap: f64,
    pub estimate: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub verdict: AdmissibilityVerdict,
    /// Estimate at the largest cap and sample count.
    pub estimate: f64,
    pub std_error: f64,
    /// Full grid of clipped estimates, one row per (sample count, cap).
    pub grid: Vec<ClippedEstimate>,
    /// Relative change between the two largest caps at full sample size.
    pub final_relative_change: f64,
}

/// Relative growth above which the clipped integral is declared diverging,
/// and below which it is declared stable.
pub const DIVERGING_GROWTH: f64 = 0.10;
pub const ADMISSIBLE_GROWTH: f64 = 0.02;

/// Monte Carlo probe of the integral of `1 / sqrt(f (1 - f))`.
///
/// The integrand is clipped at each cap of the schedule; the verdict
/// compares the two largest caps at the largest sample count. A finite
/// sample cannot prove finiteness, hence the third verdict.
pub fn admissibility(
    spec: &SystemSpec,
    sample_schedule: &[u64],
    clip_schedule: &[f64],
    rng: &mut RngStream,
) -> Result<AdmissibilityReport, CoreError> {
    validate_schedule(sample_schedule)?;
    let caps: Vec<f64> = clip_schedule.to_vec();
    if caps.len() < 3 || caps.windows(2).any(|w| w[0] >= w[1]) || caps[0] <= 0.0 {
        return Err(CoreError::InvalidParameter(
            "clip schedule must be >= 3 strictly increasing positive caps".into(),
        ));
    }

    let total = *sample_schedule.last().expect("nonempty schedule");
    let mut sums = vec![0.0f64; caps.len()];
    let mut sums_sq = vec![0.0f64; caps.len()];
    let mut grid = Vec::with_capacity(sample_schedule.len() * caps.len());
    let mut next_snapshot = 0usize;

    for i in 1..=total {
        let x = spec.sample_point(rng);
        let f = spec.eval_f(&x);
        if !(0.0..=1.0).contains(&f) {
            return Err(CoreError::InvalidGeneratingFunction { value: f });
        }
        let g = 1.0 / (f * (1.0 - f)).sqrt(); // +inf where f(1-f) = 0
        for (k, &cap) in caps.iter().enumerate() {
            let clipped = g.min(cap);
            sums[k] += clipped;
            sums_sq[k] += clipped * clipped;
        }
        while next_snapshot < sample_schedule.len() && sample_schedule[next_snapshot] == i {
            let n = i as f64;
            for (k, &cap) in caps.iter().enumerate() {
                let mean = sums[k] / n;
                let var = (sums_sq[k] / n - mean * mean).max(0.0);
                grid.push(ClippedEstimate {
                    sample_count: i,
                    cap,
                    estimate: mean,
                    std_error: (var / n).sqrt(),
                });
            }
            next_snapshot += 1;
        }
    }

    let last_rows = &grid[grid.len() - caps.len()..];
    let prev = last_rows[caps.len() - 2].estimate;
    let last = last_rows[caps.len() - 1].estimate;
    let rel_change = if prev > 0.0 { (last - prev) / prev } else { 0.0 };
    let verdict = if rel_change > DIVERGING_GROWTH {
        AdmissibilityVerdict::Diverging
    } else if rel_change < ADMISSIBLE_GROWTH {
        AdmissibilityVerdict::Admissible
    } else {
        AdmissibilityVerdict::Inconclusive
    };

    Ok(AdmissibilityReport {
        verdict,
        estimate: last,
        std_error: last_rows[caps.len() - 1].std_error,
        grid,
        final_relative_change: rel_change,
    })
}

fn validate_schedule(schedule: &[u64]) -> Result<(), CoreError> {
    if schedule.len() < 3 || schedule.windows(2).any(|w| w[0] >= w[1]) || schedule[0] == 0 {
        return Err(CoreError::InvalidParameter(
            "sample schedule must be >= 3 strictly increasing positive counts".into(),
        ));
    }
    Ok(())
}

/// Squared modulus of the characteristic function of a +/-1 site with
/// success probability `p`: `1 - 4 p (1 - p) sin^2(u)`.
pub fn char_modulus_squared(p: f64, u: f64) -> Result<f64, CoreError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CoreError::InvalidParameter(format!(
            "probability must lie in [0, 1], got {p}"
        )));
    }
    let s = u.sin();
    Ok(1.0 - 4.0 * p * (1.0 - p) * s * s)
}

#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub sample_count: u64,
}

/// Monte Carlo cross-check of `char_modulus_squared`: averages
/// `cos(u (eps - eps'))` over independent pairs, an unbiased estimator of
/// the squared modulus.
pub fn mc_char_modulus_squared(
    p: f64,
    u: f64,
    pairs: u64,
    rng: &mut RngStream,
) -> Result<McEstimate, CoreError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CoreError::InvalidParameter(format!(
            "probability must lie in [0, 1], got {p}"
        )));
    }
    if pairs == 0 {
        return Err(CoreError::EmptySample);
    }
    let cos2u = (2.0 * u).cos();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..pairs {
        let a = rng.bernoulli(p);
        let b = rng.bernoulli(p);
        let v = if a == b { 1.0 } else { cos2u };
        sum += v;
        sum_sq += v * v;
    }
    let n = pairs as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(McEstimate {
        value: mean,
        std_error: (var / n).sqrt(),
        sample_count: pairs,
    })
}
