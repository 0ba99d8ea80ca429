//! The simple random walk on an oriented lattice.
//!
//! Vertices are Z^2; vertical edges are undirected, horizontal edges at
//! level y point in the direction of `eps_y`. Every vertex has exactly
//! three outgoing edges and the walk picks one uniformly.

use crate::dynsys::{OrientationField, SystemPoint, SystemSpec};
use crate::error::CoreError;
use crate::rng::{domain, RngStream};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub x: i64,
    pub y: i64,
}

pub const ORIGIN: Vertex = Vertex { x: 0, y: 0 };

/// Full trajectories are kept only below this length; longer walks record
/// summaries and checkpoints so large ensembles fit in memory.
pub const FULL_PATH_LIMIT: u64 = 100_000;

/// The three admissible moves from `v`: up, down, and horizontally along
/// the orientation of the current level.
#[inline]
pub fn neighbors(v: Vertex, field: &mut OrientationField) -> [Vertex; 3] {
    let eps = field.orientation(v.y) as i64;
    [
        Vertex { x: v.x, y: v.y + 1 },
        Vertex { x: v.x, y: v.y - 1 },
        Vertex { x: v.x + eps, y: v.y },
    ]
}

/// One step of the walk: uniform choice among the three out-edges.
#[inline]
pub fn step(v: Vertex, field: &mut OrientationField, rng: &mut RngStream) -> Vertex {
    neighbors(v, field)[rng.below(3) as usize]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checkpoint {
    pub n: u64,
    pub position: Vertex,
    pub returns_to_origin: u64,
}

#[derive(Debug, Clone)]
pub struct WalkPath {
    pub step_count: u64,
    /// Number of steps k >= 1 with M_k = (0, 0).
    pub returns_to_origin: u64,
    pub max_abs_y: i64,
    pub final_position: Vertex,
    pub checkpoints: Vec<Checkpoint>,
    /// Present only for walks up to `FULL_PATH_LIMIT` steps.
    pub positions: Option<Vec<Vertex>>,
}

/// Runs `n` steps from the origin, recording returns, the running maximum
/// of |y|, and a snapshot at each requested checkpoint.
pub fn run_walk(
    n: u64,
    field: &mut OrientationField,
    rng: &mut RngStream,
    checkpoints: &[u64],
) -> WalkPath {
    let mut marks: Vec<u64> = checkpoints.iter().copied().filter(|&m| m <= n).collect();
    marks.sort_unstable();
    marks.dedup();

    let record_full = n <= FULL_PATH_LIMIT;
    let mut positions = if record_full {
        let mut p = Vec::with_capacity(n as usize + 1);
        p.push(ORIGIN);
        Some(p)
    } else {
        None
    };

    let mut v = ORIGIN;
    let mut returns = 0u64;
    let mut max_abs_y = 0i64;
    let mut out_checkpoints = Vec::with_capacity(marks.len());
    let mut next_mark = 0usize;

    for k in 1..=n {
        v = step(v, field, rng);
        if v == ORIGIN {
            returns += 1;
        }
        max_abs_y = max_abs_y.max(v.y.abs());
        if let Some(p) = positions.as_mut() {
            p.push(v);
        }
        if next_mark < marks.len() && marks[next_mark] == k {
            out_checkpoints.push(Checkpoint {
                n: k,
                position: v,
                returns_to_origin: returns,
            });
            next_mark += 1;
        }
    }

    WalkPath {
        step_count: n,
        returns_to_origin: returns,
        max_abs_y,
        final_position: v,
        checkpoints: out_checkpoints,
        positions,
    }
}

/// Replays a recorded trajectory against a field, checking that every
/// transition is one of the three admissible edges and that horizontal
/// moves follow the level orientation.
pub fn verify_path(path: &WalkPath, field: &mut OrientationField) -> Result<(), CoreError> {
    let positions = path
        .positions
        .as_ref()
        .ok_or_else(|| CoreError::InvalidParameter("path has no recorded positions".into()))?;
    for w in positions.windows(2) {
        let (a, b) = (w[0], w[1]);
        let vertical = a.x == b.x && (b.y - a.y).abs() == 1;
        let horizontal = a.y == b.y && b.x - a.x == field.orientation(a.y) as i64;
        if !vertical && !horizontal {
            return Err(CoreError::InconsistentField { level: a.y });
        }
    }
    Ok(())
}

/// Lattice configuration shared by replica ensembles.
#[derive(Debug, Clone, Copy)]
pub struct LatticeConfig {
    pub spec: SystemSpec,
    pub mode: FieldModeConfig,
}

#[derive(Debug, Clone, Copy)]
pub enum FieldModeConfig {
    /// All replicas share this environment point; site draws stay fresh.
    Quenched(SystemPoint),
    /// Each replica draws a fresh environment point.
    Annealed,
}

impl LatticeConfig {
    /// Builds a replica's private field, consuming draws from its stream.
    pub fn make_field(&self, rng: &mut RngStream) -> OrientationField {
        match self.mode {
            FieldModeConfig::Quenched(x) => {
                OrientationField::quenched(self.spec, x, rng.next_u64())
            }
            FieldModeConfig::Annealed => OrientationField::annealed(self.spec, rng),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ReturnCurvePoint {
    pub n: u64,
    pub mean_returns: f64,
    pub std_error: f64,
}

/// Per-replica summary row, one per grid point.
#[derive(Debug, Clone, Copy)]
pub struct ReplicaWalkRow {
    pub replica: u64,
    pub n: u64,
    pub returns: u64,
    pub final_x: i64,
    pub final_y: i64,
    pub max_abs_y: i64,
}

#[derive(Debug, Clone)]
pub struct ReturnCurve {
    pub points: Vec<ReturnCurvePoint>,
    pub rows: Vec<ReplicaWalkRow>,
}

/// Mean number of returns to the origin up to each grid point, over
/// independent replicas. Replica r uses the stream derived from
/// `(master_seed, r)`, so results do not depend on scheduling.
pub fn return_count_curve(
    config: &LatticeConfig,
    n_grid: &[u64],
    replicas: u64,
    master_seed: u64,
) -> Result<ReturnCurve, CoreError> {
    if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) || n_grid[0] == 0 {
        return Err(CoreError::InvalidParameter(
            "n grid must be strictly increasing and positive".into(),
        ));
    }
    if replicas == 0 {
        return Err(CoreError::InvalidParameter("need at least one replica".into()));
    }
    let max_n = *n_grid.last().expect("nonempty grid");
    let master = RngStream::new(master_seed);

    let per_replica: Vec<(u64, Vec<ReplicaWalkRow>)> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = master.derive(domain::REPLICA, r);
            let mut field = config.make_field(&mut rng);
            let path = run_walk(max_n, &mut field, &mut rng, n_grid);
            let rows = path
                .checkpoints
                .iter()
                .map(|c| ReplicaWalkRow {
                    replica: r,
                    n: c.n,
                    returns: c.returns_to_origin,
                    final_x: c.position.x,
                    final_y: c.position.y,
                    max_abs_y: path.max_abs_y,
                })
                .collect();
            (r, rows)
        })
        .collect();

    let mut rows = Vec::with_capacity(replicas as usize * n_grid.len());
    for (_, replica_rows) in &per_replica {
        rows.extend_from_slice(replica_rows);
    }

    let points = n_grid
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for (_, replica_rows) in &per_replica {
                let v = replica_rows[i].returns as f64;
                sum += v;
                sum_sq += v * v;
            }
            let m = replicas as f64;
            let mean = sum / m;
            let var = (sum_sq / m - mean * mean).max(0.0);
            ReturnCurvePoint {
                n,
                mean_returns: mean,
                std_error: (var / m).sqrt(),
            }
        })
        .collect();

    Ok(ReturnCurve { points, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::{GeneratingFunction, SystemKind};

    fn f3_rotation(angle: f64) -> SystemSpec {
        SystemSpec::new(
            SystemKind::Rotation { angle },
            GeneratingFunction::HalfIndicator,
        )
        .unwrap()
    }

    fn all_right_field(seed: u64) -> OrientationField {
        OrientationField::quenched(f3_rotation(0.0), SystemPoint::Scalar(0.25), seed)
    }

    #[test]
    fn neighbors_follow_level_orientation() {
        let mut right = all_right_field(1);
        assert_eq!(
            neighbors(ORIGIN, &mut right),
            [
                Vertex { x: 0, y: 1 },
                Vertex { x: 0, y: -1 },
                Vertex { x: 1, y: 0 }
            ]
        );

        // alpha = 1/2 alternates: level 0 right, level -2 has x + 0.5*(-2) = 0.25 -> +1
        let mut alt = OrientationField::quenched(f3_rotation(0.5), SystemPoint::Scalar(0.25), 1);
        assert_eq!(alt.orientation(-2), 1);
        assert_eq!(
            neighbors(Vertex { x: 3, y: -2 }, &mut alt),
            [
                Vertex { x: 3, y: -1 },
                Vertex { x: 3, y: -3 },
                Vertex { x: 4, y: -2 }
            ]
        );
        assert_eq!(alt.orientation(1), -1);
        assert_eq!(
            neighbors(Vertex { x: 0, y: 1 }, &mut alt),
            [
                Vertex { x: 0, y: 2 },
                Vertex { x: 0, y: 0 },
                Vertex { x: -1, y: 1 }
            ]
        );
    }

    #[test]
    fn all_left_neighbors() {
        // x = 0.75 puts f3 at 0, so every line points left
        let mut field =
            OrientationField::quenched(f3_rotation(0.0), SystemPoint::Scalar(0.75), 1);
        assert_eq!(
            neighbors(ORIGIN, &mut field),
            [
                Vertex { x: 0, y: 1 },
                Vertex { x: 0, y: -1 },
                Vertex { x: -1, y: 0 }
            ]
        );
    }

    #[test]
    fn step_frequencies_are_uniform_over_edges() {
        let mut field = all_right_field(2);
        let mut rng = RngStream::new(7);
        let n = 1_000_000u64;
        let mut counts = [0u64; 3];
        let nbrs = neighbors(ORIGIN, &mut field);
        for _ in 0..n {
            let v = step(ORIGIN, &mut field, &mut rng);
            let idx = nbrs.iter().position(|&w| w == v).expect("legal move");
            counts[idx] += 1;
        }
        let sd = (n as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for c in counts {
            assert!((c as f64 - n as f64 / 3.0).abs() < 4.0 * sd, "{counts:?}");
        }
        // two of three edges are vertical
        let vertical = counts[0] + counts[1];
        let sd_v = (n as f64 * (2.0 / 3.0) * (1.0 / 3.0)).sqrt();
        assert!((vertical as f64 - 2.0 * n as f64 / 3.0).abs() < 4.0 * sd_v);
    }

    #[test]
    fn single_step_never_returns() {
        let mut field = all_right_field(3);
        let rng = RngStream::new(1);
        for seed in 0..50 {
            let mut r = rng.derive(domain::REPLICA, seed);
            let path = run_walk(1, &mut field, &mut r, &[]);
            assert_eq!(path.returns_to_origin, 0);
        }
    }

    #[test]
    fn replay_is_deterministic() {
        let config = LatticeConfig {
            spec: f3_rotation(0.5),
            mode: FieldModeConfig::Quenched(SystemPoint::Scalar(0.25)),
        };
        let run = |seed| {
            let mut rng = RngStream::new(seed);
            let mut field = config.make_field(&mut rng);
            run_walk(5_000, &mut field, &mut rng, &[1_000, 5_000])
        };
        let a = run(42);
        let b = run(42);
        assert_eq!(a.positions, b.positions);
        assert_eq!(a.returns_to_origin, b.returns_to_origin);
        assert_eq!(a.checkpoints, b.checkpoints);
        let c = run(43);
        assert_ne!(a.positions, c.positions);
    }

    #[test]
    fn paths_are_valid_and_horizontal_moves_match_orientation() {
        let spec = SystemSpec::new(SystemKind::BernoulliShift, GeneratingFunction::Projection)
            .unwrap();
        for seed in 0..20 {
            let mut rng = RngStream::new(seed);
            let mut field = OrientationField::annealed(spec, &mut rng);
            let path = run_walk(2_000, &mut field, &mut rng, &[]);
            verify_path(&path, &mut field).unwrap();
            // no leftward move at a level oriented right, and vice versa
            let positions = path.positions.as_ref().unwrap();
            for w in positions.windows(2) {
                if w[0].y == w[1].y {
                    assert_eq!(w[1].x - w[0].x, field.orientation(w[0].y) as i64);
                }
            }
        }
    }

    #[test]
    fn vertical_marginal_is_a_fair_walk() {
        let mut field = all_right_field(5);
        let mut rng = RngStream::new(11);
        let path = run_walk(90_000, &mut field, &mut rng, &[]);
        let positions = path.positions.as_ref().unwrap();
        let mut ups = 0u64;
        let mut total = 0u64;
        for w in positions.windows(2) {
            if w[1].y != w[0].y {
                total += 1;
                if w[1].y > w[0].y {
                    ups += 1;
                }
            }
        }
        let sd = (total as f64 * 0.25).sqrt();
        assert!((ups as f64 - total as f64 / 2.0).abs() < 4.0 * sd);
    }

    #[test]
    fn long_walks_do_not_store_positions() {
        let mut field = all_right_field(6);
        let mut rng = RngStream::new(1);
        let path = run_walk(FULL_PATH_LIMIT + 1, &mut field, &mut rng, &[50_000]);
        assert!(path.positions.is_none());
        assert_eq!(path.checkpoints.len(), 1);
    }

    #[test]
    fn return_curve_is_deterministic_and_validated() {
        let config = LatticeConfig {
            spec: SystemSpec::new(SystemKind::BernoulliShift, GeneratingFunction::Projection)
                .unwrap(),
            mode: FieldModeConfig::Annealed,
        };
        let a = return_count_curve(&config, &[500, 1_000], 32, 9).unwrap();
        let b = return_count_curve(&config, &[500, 1_000], 32, 9).unwrap();
        for (pa, pb) in a.points.iter().zip(&b.points) {
            assert_eq!(pa.mean_returns, pb.mean_returns);
            assert_eq!(pa.std_error, pb.std_error);
        }
        assert_eq!(a.rows.len(), 64);
        assert!(return_count_curve(&config, &[10, 10], 4, 0).is_err());
        assert!(return_count_curve(&config, &[], 4, 0).is_err());
    }
}
