//! The canonical experiments. Each one maps a resolved configuration to an
//! `ExperimentReport` plus plot-ready data files, deterministically in
//! `(seed, config)`: replicas get streams derived from their index and all
//! floating-point aggregation runs sequentially over index-ordered results.

mod fields;
mod limits;
mod walks;

use crate::config::{ExperimentKind, RunConfig};
use crate::CliError;
use oriented_walk::rng::{domain, RngStream};
use oriented_walk::stats::ExperimentReport;
use rayon::prelude::*;

pub struct ExperimentOutput {
    pub report: ExperimentReport,
    /// (file name, contents) pairs to be written next to the report.
    pub files: Vec<(String, String)>,
}

pub fn run_experiment(cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    match cfg.experiment {
        ExperimentKind::Orientations => fields::run_orientations(cfg),
        ExperimentKind::Admissibility => fields::run_admissibility(cfg),
        ExperimentKind::WalkReturns => walks::run_walk_returns(cfg),
        ExperimentKind::EmbeddingCheck => walks::run_embedding_check(cfg),
        ExperimentKind::Slln => walks::run_slln(cfg),
        ExperimentKind::Scaling => limits::run_scaling(cfg),
        ExperimentKind::Flt => limits::run_flt(cfg),
        ExperimentKind::Delta => limits::run_delta(cfg),
    }
}

/// Runs one closure per replica on streams derived from `(seed, block, r)`
/// and returns the results in replica order regardless of scheduling.
pub(crate) fn par_replicas<T: Send>(
    seed: u64,
    block: u64,
    replicas: u64,
    body: impl Fn(u64, RngStream) -> T + Sync,
) -> Vec<T> {
    let master = RngStream::new(seed).derive(domain::SPLIT, block);
    (0..replicas)
        .into_par_iter()
        .map(|r| body(r, master.derive(domain::REPLICA, r)))
        .collect()
}

pub(crate) fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// One value per line, consumed by external plotting.
pub(crate) fn sample_file(values: &[f64]) -> String {
    let mut out = String::new();
    for v in values {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

pub(crate) fn report_skeleton(cfg: &RunConfig) -> ExperimentReport {
    ExperimentReport {
        experiment: cfg.experiment.to_string(),
        master_seed: cfg.seed,
        config: cfg.echo(),
        metrics: Vec::new(),
        checks: Vec::new(),
    }
}
