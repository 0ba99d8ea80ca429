//! Orientation-law experiments: marginals, the covariance identity, and
//! the admissibility probe.

use super::{csv, report_skeleton, ExperimentOutput};
use crate::config::RunConfig;
use crate::CliError;
use oriented_walk::dynsys::{admissibility, covariance_identity_check, OrientationField};
use oriented_walk::rng::{domain, RngStream};
use oriented_walk::stats::{CheckResult, MetricValue};

pub fn run_orientations(cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    let spec = cfg.system_spec()?;
    let master = RngStream::new(cfg.seed);

    // site mean over a single annealed field, sites centered on the origin
    let sites = cfg.n.max(1_000) as i64;
    let mut rng = master.derive(domain::SPLIT, 0);
    let mut field = OrientationField::annealed(spec, &mut rng);
    let mut sum = 0i64;
    for y in -sites / 2..sites - sites / 2 {
        sum += field.orientation(y) as i64;
    }
    let site_mean = sum as f64 / sites as f64;

    // covariance identity, one independent estimate per lag
    let mut rows = Vec::new();
    let mut max_abs_z: f64 = 0.0;
    for lag in 0..=cfg.max_lag {
        let mut lag_rng = master.derive(domain::SPLIT, 10 + lag as u64);
        let r = covariance_identity_check(&spec, lag, cfg.samples, &mut lag_rng)?;
        max_abs_z = max_abs_z.max(r.z_score.abs());
        rows.push(r);
    }

    let mut report = report_skeleton(cfg);
    report.metrics.push(MetricValue::new("eps_site_mean", site_mean).with_note(format!(
        "over {sites} sites of one annealed field"
    )));
    report
        .metrics
        .push(MetricValue::new("covariance_identity_max_abs_z", max_abs_z));
    for r in &rows {
        report.metrics.push(
            MetricValue::new(format!("covariance_lag{}", r.lag), r.cov_hat)
                .with_std_error(r.cov_std_error),
        );
        report.metrics.push(
            MetricValue::new(format!("correlation_lag{}", r.lag), r.four_c_hat / 4.0)
                .with_std_error(r.four_c_std_error / 4.0),
        );
    }
    report.checks.push(CheckResult {
        name: "covariance-identity".into(),
        passed: max_abs_z < 4.0,
        detail: format!(
            "max |z| = {max_abs_z:.3} over lags 0..={} (threshold 4)",
            cfg.max_lag
        ),
    });

    let lags_csv = csv(
        "lag,correlation,correlation_se,covariance,covariance_se,four_c,z",
        rows.iter().map(|r| {
            format!(
                "{},{},{},{},{},{},{}",
                r.lag,
                r.four_c_hat / 4.0,
                r.four_c_std_error / 4.0,
                r.cov_hat,
                r.cov_std_error,
                r.four_c_hat,
                r.z_score
            )
        }),
    );

    Ok(ExperimentOutput {
        report,
        files: vec![("lags.csv".into(), lags_csv)],
    })
}

pub fn run_admissibility(cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    let spec = cfg.system_spec()?;
    let schedule = [cfg.samples / 100, cfg.samples / 10, cfg.samples];
    let caps = [100.0, 1_000.0, 10_000.0];
    let mut rng = RngStream::new(cfg.seed).derive(domain::SPLIT, 0);
    let outcome = admissibility(&spec, &schedule, &caps, &mut rng)?;

    let mut report = report_skeleton(cfg);
    report.metrics.push(
        MetricValue::new("clipped_integral", outcome.estimate)
            .with_std_error(outcome.std_error)
            .with_note(outcome.verdict.as_str()),
    );
    report.metrics.push(MetricValue::new(
        "final_relative_change",
        outcome.final_relative_change,
    ));

    let grid_csv = csv(
        "samples,cap,estimate,std_error",
        outcome.grid.iter().map(|g| {
            format!("{},{},{},{}", g.sample_count, g.cap, g.estimate, g.std_error)
        }),
    );

    Ok(ExperimentOutput {
        report,
        files: vec![("grid.csv".into(), grid_csv)],
    })
}
