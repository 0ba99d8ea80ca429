//! Random walk in random scenery and the self-similar limit process.
//!
//! `Z_n` accumulates the orientations seen by the vertical walk. Its
//! distributional limit under the n^(3/4) normalization is simulated
//! directly from its definition: Brownian local time integrated against a
//! pair of independent white noises, discretized on a spatial grid. The two
//! constructions share nothing, so comparing them is a real test.

use crate::dynsys::OrientationField;
use crate::embedding::{EmbeddingWalker, JumpSource, VerticalPath, JUMP_MEAN};
use crate::error::CoreError;
use crate::lattice::LatticeConfig;
use crate::rng::RngStream;

#[derive(Debug, Clone)]
pub struct SceneryPath {
    /// Z_0 .. Z_n with Z_k the sum of eps_{Y_0} .. eps_{Y_k}.
    pub values: Vec<i64>,
}

/// Exact partial sums of the scenery along a vertical path.
pub fn scenery_walk(path: &VerticalPath, field: &mut OrientationField) -> SceneryPath {
    let mut values = Vec::with_capacity(path.positions.len());
    let mut z = 0i64;
    for &y in &path.positions {
        z += field.orientation(y) as i64;
        values.push(z);
    }
    SceneryPath { values }
}

/// Scaling constant of the lattice-walk limit: m / (1 + m)^(3/4).
pub fn flt_constant() -> f64 {
    JUMP_MEAN / (1.0 + JUMP_MEAN).powf(0.75)
}

/// Grid parameters for the limit-process simulation.
#[derive(Debug, Clone, Copy)]
pub struct DeltaConfig {
    pub t: f64,
    /// Brownian time step.
    pub dt: f64,
    /// Spatial cell width for the local-time estimate.
    pub h: f64,
    /// Half-width of the spatial grid.
    pub x_max: f64,
}

impl DeltaConfig {
    /// Defaults pinned by pilot stability: h = 0.01, dt = 1e-5,
    /// x_max = 5 sqrt(t).
    pub fn default_for(t: f64) -> Self {
        DeltaConfig {
            t,
            dt: 1e-5,
            h: 0.01,
            x_max: 5.0 * t.max(0.0).sqrt(),
        }
    }

    fn validate(&self) -> Result<(), CoreError> {
        if !self.t.is_finite() || self.t <= 0.0 {
            return Err(CoreError::RejectedConfig("t must be positive".into()));
        }
        if !self.dt.is_finite() || self.dt <= 0.0 || self.dt > 1e-4 * self.t {
            return Err(CoreError::RejectedConfig(format!(
                "dt must satisfy 0 < dt <= 1e-4 t, got dt = {}",
                self.dt
            )));
        }
        if !self.h.is_finite() || self.h <= 0.0 || self.h > 0.05 {
            return Err(CoreError::RejectedConfig(format!(
                "grid step must satisfy 0 < h <= 0.05, got {}",
                self.h
            )));
        }
        if self.x_max < 4.0 * self.t.sqrt() {
            return Err(CoreError::RejectedConfig(format!(
                "x_max must be at least 4 sqrt(t), got {}",
                self.x_max
            )));
        }
        Ok(())
    }
}

/// Brownian occupation estimate of the local time on the grid.
#[derive(Debug, Clone)]
pub struct OccupationGrid {
    /// L(x_j) per cell, cells [j h, (j+1) h) for j in -half .. half.
    pub values: Vec<f64>,
    pub half_cells: i64,
    pub h: f64,
    pub t: f64,
}

impl OccupationGrid {
    /// Total mass: the sum of L(x_j) h, exactly t up to rounding because
    /// excursions beyond the grid are clamped into the boundary cells.
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.h
    }
}

/// Simulates a Brownian path on [0, t] and bins its occupation measure.
pub fn brownian_occupation(cfg: &DeltaConfig, rng: &mut RngStream) -> Result<OccupationGrid, CoreError> {
    cfg.validate()?;
    let steps = (cfg.t / cfg.dt).round().max(1.0) as u64;
    let dt = cfg.t / steps as f64;
    let half = (cfg.x_max / cfg.h).ceil() as i64;
    let cells = (2 * half) as usize;

    let mut counts = vec![0u64; cells];
    let sd = dt.sqrt();
    let mut b = 0.0f64;
    for _ in 0..steps {
        let j = (b / cfg.h).floor() as i64;
        let j = j.clamp(-half, half - 1);
        counts[(j + half) as usize] += 1;
        b += sd * rng.normal();
    }

    let scale = dt / cfg.h;
    Ok(OccupationGrid {
        values: counts.into_iter().map(|c| c as f64 * scale).collect(),
        half_cells: half,
        h: cfg.h,
        t: cfg.t,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct DeltaSample {
    pub t: f64,
    pub value: f64,
    pub grid_step: f64,
    pub time_step: f64,
}

/// One draw of the limit process at time `t`: local time of a fresh
/// Brownian path integrated against independent N(0, h) cell increments.
pub fn simulate_delta(cfg: &DeltaConfig, rng: &mut RngStream) -> Result<DeltaSample, CoreError> {
    if cfg.t == 0.0 {
        return Ok(DeltaSample {
            t: 0.0,
            value: 0.0,
            grid_step: cfg.h,
            time_step: cfg.dt,
        });
    }
    let grid = brownian_occupation(cfg, rng)?;
    let root_h = cfg.h.sqrt();
    let mut value = 0.0;
    for &l in &grid.values {
        if l > 0.0 {
            value += l * root_h * rng.normal();
        }
    }
    Ok(DeltaSample {
        t: cfg.t,
        value,
        grid_step: cfg.h,
        time_step: cfg.dt,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointMode {
    /// Z_n of the scenery walk after n vertical steps; its n^(3/4) limit is
    /// the unscaled limit process.
    Scenery,
    /// Horizontal coordinate of the lattice walk at lattice time n; its
    /// n^(3/4) limit carries the constant m / (1 + m)^(3/4).
    Horizontal,
}

/// Endpoint of a fresh walk normalized by n^(3/4), for distribution-level
/// comparison against the limit process.
pub fn normalized_endpoint(
    config: &LatticeConfig,
    mode: EndpointMode,
    n: u64,
    rng: &mut RngStream,
) -> Result<f64, CoreError> {
    if n < 1 << 14 {
        return Err(CoreError::InvalidParameter(format!(
            "normalized endpoints need n >= 2^14, got {n}"
        )));
    }
    let mut field = config.make_field(rng);
    let jumps = JumpSource::from_seed(rng.next_u64());
    let mut walker = EmbeddingWalker::new(&mut field, jumps);
    let value = match mode {
        EndpointMode::Scenery => {
            for _ in 0..n {
                walker.step_rng(rng);
            }
            walker.scenery()
        }
        EndpointMode::Horizontal => walker.horizontal_at_time(n, rng),
    };
    Ok(value as f64 / (n as f64).powf(0.75))
}
