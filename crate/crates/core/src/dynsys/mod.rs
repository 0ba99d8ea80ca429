//! Dynamical systems used as orientation generators.
//!
//! A system is a measure-preserving map `T` on a probability space together
//! with a generating function `f` into [0, 1] of mean 1/2. Iterating `T`
//! along the vertical coordinate and evaluating `f` yields the success
//! probabilities of the +/-1 orientation variables, one per lattice level.

mod analysis;
mod field;
mod presets;

pub use analysis::{
    admissibility, char_modulus_squared, correlation_estimate, covariance_identity_check,
    mc_char_modulus_squared, AdmissibilityReport, AdmissibilityVerdict, ClippedEstimate,
    CorrelationEstimate, CovarianceIdentityReport, McEstimate,
};
pub use field::{FieldMode, OrientationField};
pub use presets::{catalog, parse_generating_function, parse_system_kind, PresetEntry};

use crate::error::CoreError;
use crate::rng::{domain, Key, RngStream};

/// A point of the system's state space.
///
/// Scalar systems (rotations, interval maps, identity) live on [0, 1).
/// Shift systems live on a doubly infinite coordinate stream which is never
/// materialized: coordinates are keyed draws from `seed`, and iterating the
/// shift only moves the `offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemPoint {
    Scalar(f64),
    Stream { seed: u64, offset: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemKind {
    BernoulliShift,
    /// Shift over a stationary hold-or-redraw chain: each coordinate keeps
    /// the previous value with probability `hold`, otherwise redraws
    /// uniformly. Correlations decay like `hold^|lag|`.
    MarkovShift { hold: f64 },
    Rotation { angle: f64 },
    /// Intermittent interval map `x -> x + x^(1+alpha) mod 1`, not
    /// invertible; orientation levels are indexed by `|y|`. Points are
    /// sampled by burning in from the uniform distribution.
    MannevillePomeau { alpha: f64, burn_in: u64 },
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratingFunction {
    /// Coordinate projection (scalar systems: the point itself).
    Projection,
    /// f(x) = x.
    Linear,
    /// f(x) = cos^2(2 pi x).
    CosineSquared,
    /// Indicator of [0, 1/2).
    HalfIndicator,
    /// f(x) = (1 + x - T(x)) / 2, mean 1/2 for any measure-preserving T.
    MapIncrement,
    /// Constant function.
    Constant(f64),
}

impl GeneratingFunction {
    pub fn constant(c: f64) -> Result<Self, CoreError> {
        if !(0.0..=1.0).contains(&c) || !c.is_finite() {
            return Err(CoreError::InvalidParameter(format!(
                "constant generating function must lie in [0, 1], got {c}"
            )));
        }
        Ok(GeneratingFunction::Constant(c))
    }

    pub fn name(&self) -> String {
        match self {
            GeneratingFunction::Projection => "proj".into(),
            GeneratingFunction::Linear => "f1".into(),
            GeneratingFunction::CosineSquared => "f2".into(),
            GeneratingFunction::HalfIndicator => "f3".into(),
            GeneratingFunction::MapIncrement => "fmp".into(),
            GeneratingFunction::Constant(c) => format!("const:{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemSpec {
    pub kind: SystemKind,
    pub f: GeneratingFunction,
}

impl SystemSpec {
    pub fn new(kind: SystemKind, f: GeneratingFunction) -> Result<Self, CoreError> {
        match kind {
            SystemKind::MarkovShift { hold } => {
                if !(0.0..1.0).contains(&hold) {
                    return Err(CoreError::InvalidParameter(format!(
                        "markov hold probability must lie in [0, 1), got {hold}"
                    )));
                }
            }
            SystemKind::MannevillePomeau { alpha, .. } => {
                if !alpha.is_finite() || alpha <= 0.0 {
                    return Err(CoreError::InvalidParameter(format!(
                        "manneville-pomeau exponent must be positive, got {alpha}"
                    )));
                }
            }
            SystemKind::Rotation { angle } if !angle.is_finite() => {
                return Err(CoreError::InvalidParameter(
                    "rotation angle must be finite".into(),
                ));
            }
            _ => {}
        }
        if let GeneratingFunction::Constant(c) = f {
            GeneratingFunction::constant(c)?;
        }
        Ok(SystemSpec { kind, f })
    }

    pub fn invertible(&self) -> bool {
        !matches!(self.kind, SystemKind::MannevillePomeau { .. })
    }

    /// Effective iteration index: non-invertible maps are indexed by |y|.
    pub fn level_index(&self, y: i64) -> i64 {
        if self.invertible() {
            y
        } else {
            y.abs()
        }
    }

    /// One application of the map to a scalar value.
    pub fn map_scalar(&self, v: f64) -> f64 {
        match self.kind {
            SystemKind::Rotation { angle } => (v + angle).rem_euclid(1.0),
            SystemKind::MannevillePomeau { alpha, .. } => {
                let w = v + v.powf(1.0 + alpha);
                if w >= 1.0 {
                    w - 1.0
                } else {
                    w
                }
            }
            SystemKind::Identity => v,
            SystemKind::BernoulliShift | SystemKind::MarkovShift { .. } => {
                unreachable!("shift systems have no scalar map")
            }
        }
    }

    /// Returns `T^k x` (non-invertible kinds use `T^|k| x`).
    pub fn iterate(&self, x: &SystemPoint, k: i64) -> SystemPoint {
        match (self.kind, x) {
            (SystemKind::Identity, _) => *x,
            (SystemKind::Rotation { angle }, SystemPoint::Scalar(v)) => {
                SystemPoint::Scalar((v + k as f64 * angle).rem_euclid(1.0))
            }
            (SystemKind::MannevillePomeau { .. }, SystemPoint::Scalar(v)) => {
                let mut w = *v;
                for _ in 0..k.unsigned_abs() {
                    w = self.map_scalar(w);
                }
                SystemPoint::Scalar(w)
            }
            (
                SystemKind::BernoulliShift | SystemKind::MarkovShift { .. },
                SystemPoint::Stream { seed, offset },
            ) => SystemPoint::Stream {
                seed: *seed,
                offset: offset + k,
            },
            _ => unreachable!("point variant does not match system kind"),
        }
    }

    /// Wraps an explicit scalar state as a point of this system. Shift
    /// systems have no scalar state; their points come from `sample_point`.
    pub fn point_from_scalar(&self, x: f64) -> Result<SystemPoint, CoreError> {
        match self.kind {
            SystemKind::BernoulliShift | SystemKind::MarkovShift { .. } => {
                Err(CoreError::InvalidParameter(
                    "shift systems take no scalar point; draw one from the measure".into(),
                ))
            }
            _ => {
                if !(0.0..1.0).contains(&x) {
                    return Err(CoreError::InvalidParameter(format!(
                        "scalar point must lie in [0, 1), got {x}"
                    )));
                }
                Ok(SystemPoint::Scalar(x))
            }
        }
    }

    /// Draws a point distributed as the invariant measure (empirically, for
    /// the Manneville-Pomeau map).
    pub fn sample_point(&self, rng: &mut RngStream) -> SystemPoint {
        match self.kind {
            SystemKind::BernoulliShift | SystemKind::MarkovShift { .. } => SystemPoint::Stream {
                seed: rng.next_u64(),
                offset: 0,
            },
            SystemKind::MannevillePomeau { burn_in, .. } => {
                let mut v = rng.uniform();
                for _ in 0..burn_in {
                    v = self.map_scalar(v);
                }
                SystemPoint::Scalar(v)
            }
            SystemKind::Rotation { .. } | SystemKind::Identity => {
                SystemPoint::Scalar(rng.uniform())
            }
        }
    }

    /// The scalar value the generating functions see at a point: the point
    /// itself for scalar systems, the coordinate at the current offset for
    /// shift systems.
    pub fn point_value(&self, x: &SystemPoint) -> f64 {
        match x {
            SystemPoint::Scalar(v) => *v,
            SystemPoint::Stream { seed, offset } => match self.kind {
                SystemKind::BernoulliShift => bernoulli_coord(*seed, *offset),
                SystemKind::MarkovShift { hold } => markov_coord(*seed, hold, *offset),
                _ => unreachable!("stream point on a scalar system"),
            },
        }
    }

    /// Evaluates the generating function at a point.
    pub fn eval_f(&self, x: &SystemPoint) -> f64 {
        match self.f {
            GeneratingFunction::Projection | GeneratingFunction::Linear => self.point_value(x),
            GeneratingFunction::CosineSquared => {
                let c = (std::f64::consts::TAU * self.point_value(x)).cos();
                c * c
            }
            GeneratingFunction::HalfIndicator => {
                if self.point_value(x) < 0.5 {
                    1.0
                } else {
                    0.0
                }
            }
            GeneratingFunction::MapIncrement => {
                let v = self.point_value(x);
                let next = self.point_value(&self.iterate(x, 1));
                0.5 * (1.0 + v - next)
            }
            GeneratingFunction::Constant(c) => c,
        }
    }

    /// Success probability of the orientation at level `y` for the
    /// environment point `x`, i.e. `f(T^y x)` with the `|y|` convention for
    /// non-invertible maps.
    pub fn success_probability(&self, x: &SystemPoint, y: i64) -> f64 {
        self.eval_f(&self.iterate(x, self.level_index(y)))
    }
}

fn bernoulli_coord(seed: u64, index: i64) -> f64 {
    Key::new(seed, domain::COORD).uniform_at(index as u64)
}

/// Stationary realization of the hold-or-redraw chain on the integer line:
/// scan backwards to the most recent redraw mark and return its value.
fn markov_coord(seed: u64, hold: f64, index: i64) -> f64 {
    let marks = Key::new(seed, domain::MARKOV_MARK);
    let values = Key::new(seed, domain::MARKOV_VALUE);
    let redraw = 1.0 - hold;
    let mut i = index;
    loop {
        if marks.uniform_at(i as u64) < redraw {
            return values.uniform_at(i as u64);
        }
        i -= 1;
    }
}
