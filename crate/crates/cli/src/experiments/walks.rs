//! Lattice-walk experiments: return-count curves, the zero-speed law, and
//! the exact embedding identity.

use super::{csv, par_replicas, report_skeleton, ExperimentOutput};
use crate::config::RunConfig;
use crate::CliError;
use oriented_walk::embedding::{
    embed, embedding_identity_violations, reconstruct_full_walk, vertical_walk, JumpSource,
};
use oriented_walk::lattice::{return_count_curve, run_walk};
use oriented_walk::scenery::scenery_walk;
use oriented_walk::stats::{mean, speed_check, variance, CheckResult, MetricValue};

pub fn run_walk_returns(cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    let lattice = cfg.lattice()?;
    let curve = return_count_curve(&lattice, &cfg.n_grid, cfg.replicas, cfg.seed)?;

    let mut report = report_skeleton(cfg);
    for p in &curve.points {
        report.metrics.push(
            MetricValue::new(format!("mean_returns_n{}", p.n), p.mean_returns)
                .with_std_error(p.std_error),
        );
    }
    for w in curve.points.windows(2) {
        if w[0].mean_returns > 0.0 {
            report.metrics.push(MetricValue::new(
                format!("growth_n{}_to_n{}", w[0].n, w[1].n),
                w[1].mean_returns / w[0].mean_returns,
            ));
        }
    }

    let curve_csv = csv(
        "n,mean_returns,std_error",
        curve
            .points
            .iter()
            .map(|p| format!("{},{},{}", p.n, p.mean_returns, p.std_error)),
    );
    let replicas_csv = csv(
        "replica,n,returns,final_x,final_y,max_abs_y",
        curve.rows.iter().map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.replica, r.n, r.returns, r.final_x, r.final_y, r.max_abs_y
            )
        }),
    );

    Ok(ExperimentOutput {
        report,
        files: vec![
            ("curve.csv".into(), curve_csv),
            ("replicas.csv".into(), replicas_csv),
        ],
    })
}

pub fn run_slln(cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    let lattice = cfg.lattice()?;
    let max_n = *cfg.n_grid.last().expect("validated grid");

    let per_replica: Vec<Vec<f64>> = par_replicas(cfg.seed, 0, cfg.replicas, |_, mut rng| {
        let mut field = lattice.make_field(&mut rng);
        let path = run_walk(max_n, &mut field, &mut rng, &cfg.n_grid);
        path.checkpoints
            .iter()
            .map(|c| {
                let (x, y) = (c.position.x as f64, c.position.y as f64);
                (x * x + y * y).sqrt()
            })
            .collect()
    });

    let norms_by_n: Vec<(u64, Vec<f64>)> = cfg
        .n_grid
        .iter()
        .enumerate()
        .map(|(i, &n)| (n, per_replica.iter().map(|v| v[i]).collect()))
        .collect();
    let rows = speed_check(&norms_by_n)?;

    let mut report = report_skeleton(cfg);
    for r in &rows {
        report.metrics.push(
            MetricValue::new(format!("rms_speed_n{}", r.n), r.rms_speed)
                .with_std_error(r.std_error),
        );
    }
    let decreasing = rows.windows(2).all(|w| w[1].rms_speed < w[0].rms_speed);
    report.checks.push(CheckResult {
        name: "speed-decreasing".into(),
        passed: decreasing,
        detail: format!(
            "rms speeds {:?} strictly decreasing over the grid",
            rows.iter().map(|r| r.rms_speed).collect::<Vec<_>>()
        ),
    });
    let last = rows.last().expect("nonempty grid");
    report.checks.push(CheckResult {
        name: "speed-small".into(),
        passed: last.rms_speed < cfg.rms_max,
        detail: format!(
            "rms speed {} at n = {} (threshold {})",
            last.rms_speed, last.n, cfg.rms_max
        ),
    });

    let speed_csv = csv(
        "n,rms_speed,std_error",
        rows.iter()
            .map(|r| format!("{},{},{}", r.n, r.rms_speed, r.std_error)),
    );

    Ok(ExperimentOutput {
        report,
        files: vec![("speed.csv".into(), speed_csv)],
    })
}

/// (n, x, y, t, z) at one checkpoint of the emitted trajectory.
type TrajectoryRow = (u64, i64, i64, u64, i64);

pub fn run_embedding_check(cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    let lattice = cfg.lattice()?;
    let n = cfg.n;

    // decade checkpoints plus the endpoint, for the emitted trajectory
    let mut marks: Vec<u64> = std::iter::successors(Some(1u64), |m| m.checked_mul(10))
        .take_while(|&m| m < n)
        .collect();
    marks.push(n);

    struct ReplicaResult {
        violations: u64,
        clock_ratio: f64,
        trajectory: Option<Vec<TrajectoryRow>>,
    }

    let results: Vec<ReplicaResult> = par_replicas(cfg.seed, 0, cfg.replicas, |r, mut rng| {
        let mut field = lattice.make_field(&mut rng);
        let path = vertical_walk(n, &mut rng);
        let jumps = JumpSource::from_seed(rng.next_u64());
        let dec = embed(path, &mut field, jumps);
        let walk = reconstruct_full_walk(&dec, &mut field)
            .expect("reconstruction against the embedding field");
        let violations = embedding_identity_violations(&dec, &walk);
        let clock_ratio = dec.clock[n as usize] as f64 / n as f64;
        let trajectory = (r == 0).then(|| {
            let scenery = scenery_walk(&dec.vertical, &mut field);
            marks
                .iter()
                .map(|&k| {
                    let k = k as usize;
                    (
                        k as u64,
                        dec.horizontal[k],
                        dec.vertical.positions[k],
                        dec.clock[k],
                        scenery.values[k],
                    )
                })
                .collect()
        });
        ReplicaResult {
            violations,
            clock_ratio,
            trajectory,
        }
    });

    let total_violations: u64 = results.iter().map(|r| r.violations).sum();
    let ok = results.iter().filter(|r| r.violations == 0).count() as u64;
    let ratios: Vec<f64> = results.iter().map(|r| r.clock_ratio).collect();
    let ratio_mean = mean(&ratios);
    let ratio_se = (variance(&ratios) / ratios.len() as f64).sqrt();

    let mut report = report_skeleton(cfg);
    report
        .metrics
        .push(MetricValue::new("replicas_identity_ok", ok as f64));
    report
        .metrics
        .push(MetricValue::new("identity_violations", total_violations as f64));
    report
        .metrics
        .push(MetricValue::new("clock_ratio", ratio_mean).with_std_error(ratio_se));
    report.checks.push(CheckResult {
        name: "embedding-identity".into(),
        passed: total_violations == 0,
        detail: format!(
            "identity holds: {ok}/{} replicas, {total_violations} violations",
            cfg.replicas
        ),
    });

    let trajectory_csv = csv(
        "n,x,y,t,z",
        results[0]
            .trajectory
            .as_ref()
            .expect("replica 0 records its trajectory")
            .iter()
            .map(|(k, x, y, t, z)| format!("{k},{x},{y},{t},{z}")),
    );

    Ok(ExperimentOutput {
        report,
        files: vec![("trajectory.csv".into(), trajectory_csv)],
    })
}
