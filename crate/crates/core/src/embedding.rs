//! Vertical/horizontal decomposition of the lattice walk.
//!
//! The walk splits into a simple vertical walk `Y`, geometric horizontal
//! excursion lengths `xi_i^(y)` spent at each level, the accumulated
//! horizontal displacement `X`, and the clock `T_n` giving the lattice step
//! index just after the n-th vertical move. Gluing excursions back between
//! vertical moves reproduces the full walk with `M_{T_n} = (X_n, Y_n)`
//! exactly.

use crate::dynsys::OrientationField;
use crate::error::CoreError;
use crate::lattice::{WalkPath, ORIGIN};
use crate::rng::{domain, Key, RngStream};
use crate::signed_vec::SignedVec;
use std::collections::HashMap;

/// Mean of the geometric excursion lengths.
pub const JUMP_MEAN: f64 = 0.5;
/// Variance of the geometric excursion lengths, q/(1-q)^2 with q = 1/3.
pub const JUMP_VARIANCE: f64 = 0.75;
const JUMP_RATIO: f64 = 1.0 / 3.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalPath {
    /// Positions Y_0 = 0, ..., Y_n.
    pub positions: Vec<i64>,
}

impl VerticalPath {
    pub fn from_positions(positions: Vec<i64>) -> Result<Self, CoreError> {
        if positions.is_empty() || positions[0] != 0 {
            return Err(CoreError::InvalidParameter(
                "vertical path must start at 0".into(),
            ));
        }
        if positions.windows(2).any(|w| (w[1] - w[0]).abs() != 1) {
            return Err(CoreError::InvalidParameter(
                "vertical increments must be +/-1".into(),
            ));
        }
        Ok(VerticalPath { positions })
    }

    pub fn step_count(&self) -> u64 {
        (self.positions.len() - 1) as u64
    }

    pub fn endpoint(&self) -> i64 {
        *self.positions.last().expect("nonempty path")
    }
}

/// Simple symmetric random walk on Z started at 0.
pub fn vertical_walk(n: u64, rng: &mut RngStream) -> VerticalPath {
    let mut positions = Vec::with_capacity(n as usize + 1);
    let mut y = 0i64;
    positions.push(y);
    for _ in 0..n {
        y += rng.sign();
        positions.push(y);
    }
    VerticalPath { positions }
}

/// Visit counts per level, stored contiguously over the visited range.
#[derive(Debug, Clone)]
pub struct LocalTimeProfile {
    min_y: i64,
    counts: Vec<u64>,
}

impl LocalTimeProfile {
    pub fn count(&self, y: i64) -> u64 {
        if y < self.min_y {
            return 0;
        }
        self.counts
            .get((y - self.min_y) as usize)
            .copied()
            .unwrap_or(0)
    }

    /// Total mass; equals n + 1 for a path of n steps.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Inclusive visited range (min level, max level).
    pub fn support(&self) -> (i64, i64) {
        (self.min_y, self.min_y + self.counts.len() as i64 - 1)
    }
}

/// Exact visit counts of a vertical path, levels Y_0 .. Y_n inclusive.
pub fn local_times(path: &VerticalPath) -> LocalTimeProfile {
    let min_y = *path.positions.iter().min().expect("nonempty path");
    let max_y = *path.positions.iter().max().expect("nonempty path");
    let mut counts = vec![0u64; (max_y - min_y + 1) as usize];
    for &y in &path.positions {
        counts[(y - min_y) as usize] += 1;
    }
    LocalTimeProfile { min_y, counts }
}

#[inline]
fn geometric_from_uniform(u: f64) -> u64 {
    // P(k) = (2/3) (1/3)^k on k = 0, 1, 2, ...
    if u <= 0.0 {
        return 0;
    }
    ((1.0 - u).ln() / JUMP_RATIO.ln()).floor() as u64
}

/// Geometric excursion length of mean 1/2: P(k) = (2/3)(1/3)^k.
pub fn geometric_jump(rng: &mut RngStream) -> u64 {
    geometric_from_uniform(rng.uniform())
}

/// Source of the doubly indexed excursion lengths `xi_i^(y)`.
///
/// Seeded jumps are keyed draws from `(seed, y, i)`, so embedding and
/// reconstruction agree without storing the array. Forced jumps (missing
/// entries default to 0) are a hook for deterministic examples.
#[derive(Debug, Clone)]
pub enum JumpSource {
    Seeded(Key),
    Forced(HashMap<(i64, u64), u64>),
}

impl JumpSource {
    pub fn from_seed(seed: u64) -> Self {
        JumpSource::Seeded(Key::new(seed, domain::XI))
    }

    pub fn forced(entries: &[((i64, u64), u64)]) -> Self {
        JumpSource::Forced(entries.iter().copied().collect())
    }

    /// The excursion length before the i-th departure from level y
    /// (i starts at 1).
    #[inline]
    pub fn jump(&self, y: i64, i: u64) -> u64 {
        match self {
            JumpSource::Seeded(key) => geometric_from_uniform(key.uniform_at2(y as u64, i)),
            JumpSource::Forced(map) => map.get(&(y, i)).copied().unwrap_or(0),
        }
    }
}

/// Incremental embedding state.
///
/// One vertical move at a time, maintaining the horizontal position `x`,
/// the clock `t`, the scenery sum `z` and per-level visit counts. Both the
/// batch `embed` below and the streaming ensemble runners drive this, so
/// there is a single implementation of the recursion.
pub struct EmbeddingWalker<'f> {
    field: &'f mut OrientationField,
    jumps: JumpSource,
    counts: SignedVec<u64>,
    y: i64,
    x: i64,
    t: u64,
    z: i64,
    moves: u64,
    max_abs_y: i64,
}

impl<'f> EmbeddingWalker<'f> {
    pub fn new(field: &'f mut OrientationField, jumps: JumpSource) -> Self {
        let mut counts = SignedVec::new(0u64);
        counts.set(0, 1);
        let z = field.orientation(0) as i64;
        EmbeddingWalker {
            field,
            jumps,
            counts,
            y: 0,
            x: 0,
            t: 0,
            z,
            moves: 0,
            max_abs_y: 0,
        }
    }

    /// Performs the next vertical move in the given direction.
    pub fn step_with(&mut self, up: bool) {
        let level = self.y;
        let eps = self.field.orientation(level) as i64;
        let visit = self.counts.get(level); // eta_{k}(Y_k), the next jump index
        let xi = self.jumps.jump(level, visit);
        self.x += eps * xi as i64;
        self.t += 1 + xi;
        self.y += if up { 1 } else { -1 };
        self.counts.increment(self.y);
        self.z += self.field.orientation(self.y) as i64;
        self.moves += 1;
        self.max_abs_y = self.max_abs_y.max(self.y.abs());
    }

    /// Performs the next vertical move with a fair coin from `rng`.
    pub fn step_rng(&mut self, rng: &mut RngStream) {
        let up = rng.sign() == 1;
        self.step_with(up);
    }

    /// Advances whole vertical moves while the clock stays below `target`
    /// and returns the horizontal coordinate of the underlying lattice walk
    /// at lattice time `target`, which may fall inside an excursion. The
    /// walker is left at the last vertical move not later than `target`.
    pub fn horizontal_at_time(&mut self, target: u64, rng: &mut RngStream) -> i64 {
        debug_assert!(self.t <= target);
        loop {
            let level = self.y;
            let visit = self.counts.get(level);
            let xi = self.jumps.jump(level, visit);
            if self.t + 1 + xi > target {
                let eps = self.field.orientation(level) as i64;
                let done = (target - self.t).min(xi);
                return self.x + eps * done as i64;
            }
            self.step_rng(rng);
        }
    }

    pub fn vertical_moves(&self) -> u64 {
        self.moves
    }
    pub fn y(&self) -> i64 {
        self.y
    }
    pub fn x(&self) -> i64 {
        self.x
    }
    pub fn clock(&self) -> u64 {
        self.t
    }
    pub fn scenery(&self) -> i64 {
        self.z
    }
    pub fn max_abs_y(&self) -> i64 {
        self.max_abs_y
    }
}

/// The embedded decomposition of a lattice walk along a vertical path.
#[derive(Debug, Clone)]
pub struct EmbeddedDecomposition {
    pub vertical: VerticalPath,
    /// X_0 .. X_n.
    pub horizontal: Vec<i64>,
    /// T_0 .. T_n.
    pub clock: Vec<u64>,
    /// Visit counts of the full vertical path (eta_n).
    pub local_times: LocalTimeProfile,
    /// Orientations of every level the path visited.
    pub orientations: SignedVec<i8>,
    pub jumps: JumpSource,
    pub mean_jump: f64,
}

impl EmbeddedDecomposition {
    pub fn step_count(&self) -> u64 {
        self.vertical.step_count()
    }
}

/// Realizes the excursion lengths along `path` and accumulates the
/// horizontal walk and the clock; empty excursions contribute nothing.
pub fn embed(
    path: VerticalPath,
    field: &mut OrientationField,
    jumps: JumpSource,
) -> EmbeddedDecomposition {
    let n = path.step_count() as usize;
    let mut horizontal = Vec::with_capacity(n + 1);
    let mut clock = Vec::with_capacity(n + 1);
    {
        let mut walker = EmbeddingWalker::new(field, jumps.clone());
        horizontal.push(walker.x());
        clock.push(walker.clock());
        for k in 1..=n {
            walker.step_with(path.positions[k] > path.positions[k - 1]);
            horizontal.push(walker.x());
            clock.push(walker.clock());
        }
    }
    let local = local_times(&path);
    let (lo, hi) = local.support();
    let mut orientations = SignedVec::new(0i8);
    for y in lo..=hi {
        orientations.set(y, field.orientation(y));
    }
    EmbeddedDecomposition {
        vertical: path,
        horizontal,
        clock,
        local_times: local,
        orientations,
        jumps,
        mean_jump: JUMP_MEAN,
    }
}

/// Rebuilds the full lattice trajectory from a decomposition: before the
/// k-th vertical move, insert the excursion at the current level in the
/// direction of its orientation. Fails if `field` disagrees with the
/// orientations recorded at embedding time.
pub fn reconstruct_full_walk(
    dec: &EmbeddedDecomposition,
    field: &mut OrientationField,
) -> Result<WalkPath, CoreError> {
    let n = dec.step_count() as usize;
    let total_steps = dec.clock[n];
    let mut positions = Vec::with_capacity(total_steps as usize + 1);
    let mut counts = SignedVec::new(0u64);
    counts.set(0, 1);

    let mut cur = ORIGIN;
    positions.push(cur);
    let mut returns = 0u64;
    let mut max_abs_y = 0i64;

    for k in 1..=n {
        let level = dec.vertical.positions[k - 1];
        let recorded = dec.orientations.get(level);
        debug_assert!(recorded != 0, "level {level} was visited");
        if field.orientation(level) != recorded {
            return Err(CoreError::InconsistentField { level });
        }
        let visit = counts.get(level);
        let xi = dec.jumps.jump(level, visit);
        for _ in 0..xi {
            cur.x += recorded as i64;
            positions.push(cur);
            if cur == ORIGIN {
                returns += 1;
            }
        }
        cur.y = dec.vertical.positions[k];
        positions.push(cur);
        if cur == ORIGIN {
            returns += 1;
        }
        max_abs_y = max_abs_y.max(cur.y.abs());
        counts.increment(cur.y);
    }

    debug_assert_eq!(positions.len() as u64, total_steps + 1);
    Ok(WalkPath {
        step_count: total_steps,
        returns_to_origin: returns,
        max_abs_y,
        final_position: cur,
        checkpoints: Vec::new(),
        positions: Some(positions),
    })
}

/// Counts indices n with `M_{T_n} != (X_n, Y_n)`; zero on any correctly
/// reconstructed pair.
pub fn embedding_identity_violations(dec: &EmbeddedDecomposition, walk: &WalkPath) -> u64 {
    let positions = walk
        .positions
        .as_ref()
        .expect("reconstructed walks record positions");
    let mut violations = 0u64;
    for k in 0..=dec.step_count() as usize {
        let at_clock = positions[dec.clock[k] as usize];
        if at_clock.x != dec.horizontal[k] || at_clock.y != dec.vertical.positions[k] {
            violations += 1;
        }
    }
    violations
}
