//! Estimators and report assembly shared by all experiments.

use crate::error::CoreError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Root mean square.
pub fn rms(values: &[f64]) -> f64 {
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

/// Unbiased sample variance.
pub fn variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() as f64 - 1.0)
}

#[derive(Debug, Clone, Copy)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_std_error: f64,
    pub r_squared: f64,
    pub point_count: usize,
}

/// Least-squares fit of `log value` against `log n`.
pub fn exponent_fit(points: &[(f64, f64)]) -> Result<ExponentFit, CoreError> {
    if points.len() < 4 {
        return Err(CoreError::InvalidParameter(format!(
            "exponent fit needs at least 4 points, got {}",
            points.len()
        )));
    }
    if points.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(CoreError::InvalidParameter(
            "abscissas must be strictly increasing".into(),
        ));
    }
    for &(n, v) in points {
        if !n.is_finite() || n <= 0.0 || !v.is_finite() || v <= 0.0 {
            return Err(CoreError::InvalidParameter(format!(
                "log-log fit needs positive finite values, got ({n}, {v})"
            )));
        }
    }

    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(n, _)| n.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, v)| v.ln()).collect();
    let x_bar = mean(&xs);
    let y_bar = mean(&ys);
    let sxx: f64 = xs.iter().map(|x| (x - x_bar) * (x - x_bar)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_bar) * (y - y_bar))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;

    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - y_bar) * (y - y_bar)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    let slope_std_error = if points.len() > 2 {
        (ss_res / (k - 2.0) / sxx).sqrt()
    } else {
        0.0
    };

    Ok(ExponentFit {
        slope,
        intercept,
        slope_std_error,
        r_squared,
        point_count: points.len(),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct KsResult {
    pub statistic: f64,
    pub sample_sizes: (usize, usize),
}

/// Two-sample Kolmogorov-Smirnov statistic: the sup-distance between the
/// empirical distribution functions.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult, CoreError> {
    if a.is_empty() || b.is_empty() {
        return Err(CoreError::EmptySample);
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_unstable_by(|p, q| p.total_cmp(q));
    ys.sort_unstable_by(|p, q| p.total_cmp(q));

    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut stat = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        stat = stat.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(KsResult {
        statistic: stat,
        sample_sizes: (xs.len(), ys.len()),
    })
}

/// One-sample Kolmogorov-Smirnov distance to the uniform law on [0, 1).
pub fn ks_uniform01(sample: &[f64]) -> Result<f64, CoreError> {
    if sample.is_empty() {
        return Err(CoreError::EmptySample);
    }
    let mut xs = sample.to_vec();
    xs.sort_unstable_by(|p, q| p.total_cmp(q));
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        d = d.max(((i as f64 + 1.0) / n - x).abs());
        d = d.max((x - i as f64 / n).abs());
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SpeedRow {
    pub n: u64,
    pub rms_speed: f64,
    pub std_error: f64,
}

/// RMS of |M_n| / n per grid point, from per-replica norms of the walk
/// position. Needs at least 100 replicas per point.
pub fn speed_check(norms_by_n: &[(u64, Vec<f64>)]) -> Result<Vec<SpeedRow>, CoreError> {
    if norms_by_n.is_empty() {
        return Err(CoreError::EmptySample);
    }
    if norms_by_n.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(CoreError::InvalidParameter(
            "n grid must be strictly increasing".into(),
        ));
    }
    let mut rows = Vec::with_capacity(norms_by_n.len());
    for (n, norms) in norms_by_n {
        if norms.len() < 100 {
            return Err(CoreError::SampleCountTooSmall {
                got: norms.len() as u64,
                min: 100,
            });
        }
        let speeds: Vec<f64> = norms.iter().map(|v| v / *n as f64).collect();
        let sq: Vec<f64> = speeds.iter().map(|s| s * s).collect();
        let r = rms(&speeds);
        // delta method: se(rms) = se(mean of squares) / (2 rms)
        let se_sq = (variance(&sq) / sq.len() as f64).sqrt();
        rows.push(SpeedRow {
            n: *n,
            rms_speed: r,
            std_error: if r > 0.0 { se_sq / (2.0 * r) } else { 0.0 },
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricValue {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl MetricValue {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        MetricValue {
            name: name.into(),
            value,
            std_error: None,
            note: None,
        }
    }

    pub fn with_std_error(mut self, se: f64) -> Self {
        self.std_error = Some(se);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Aggregated experiment output with full provenance. Serialization is
/// deterministic: ordered fields, sorted config map, no timestamps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub master_seed: u64,
    pub config: BTreeMap<String, String>,
    pub metrics: Vec<MetricValue>,
    pub checks: Vec<CheckResult>,
}

impl ExperimentReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("experiment: {}\n", self.experiment));
        out.push_str(&format!("seed: {}\n", self.master_seed));
        out.push_str("config:\n");
        for (k, v) in &self.config {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        out.push_str("metrics:\n");
        for m in &self.metrics {
            out.push_str(&format!("  {} = {}", m.name, m.value));
            if let Some(se) = m.std_error {
                out.push_str(&format!(" (se {se})"));
            }
            if let Some(note) = &m.note {
                out.push_str(&format!("  [{note}]"));
            }
            out.push('\n');
        }
        if !self.checks.is_empty() {
            out.push_str("checks:\n");
            for c in &self.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("  [{tag}] {} -- {}\n", c.name, c.detail));
            }
            out.push_str(&format!(
                "overall: {}\n",
                if self.all_passed() { "PASS" } else { "FAIL" }
            ));
        }
        out
    }
}
