//! Lazily realized orientation fields.

use super::{SystemKind, SystemPoint, SystemSpec};
use crate::rng::{domain, Key, RngStream};
use crate::signed_vec::SignedVec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldMode {
    /// One fixed environment point; sites are independent but inhomogeneous.
    Quenched,
    /// Environment point drawn from the invariant measure at field creation.
    Annealed,
}

/// The random orientations `eps_y in {-1, +1}`, one per lattice level.
///
/// A site value is a pure function of `(site seed, y)` and of the
/// environment point, so fields are order-independent and replayable; the
/// per-level cache only avoids recomputing success probabilities while a
/// walk keeps hitting the same band of levels.
#[derive(Debug, Clone)]
pub struct OrientationField {
    spec: SystemSpec,
    base: SystemPoint,
    mode: FieldMode,
    site_key: Key,
    eps: SignedVec<i8>,
    /// Forward orbit cache for iterated scalar maps (Manneville-Pomeau);
    /// orbit[k] holds the value of T^k applied to the base point.
    orbit: Vec<f64>,
}

impl OrientationField {
    pub fn quenched(spec: SystemSpec, x: SystemPoint, site_seed: u64) -> Self {
        Self::build(spec, x, FieldMode::Quenched, site_seed)
    }

    /// Draws the environment point from the invariant measure, then a site
    /// seed, both from `rng`.
    pub fn annealed(spec: SystemSpec, rng: &mut RngStream) -> Self {
        let x = spec.sample_point(rng);
        let site_seed = rng.next_u64();
        Self::build(spec, x, FieldMode::Annealed, site_seed)
    }

    fn build(spec: SystemSpec, base: SystemPoint, mode: FieldMode, site_seed: u64) -> Self {
        let orbit = match (spec.kind, &base) {
            (SystemKind::MannevillePomeau { .. }, SystemPoint::Scalar(v)) => vec![*v],
            _ => Vec::new(),
        };
        OrientationField {
            spec,
            base,
            mode,
            site_key: Key::new(site_seed, domain::SITE),
            eps: SignedVec::new(0),
            orbit,
        }
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    pub fn mode(&self) -> FieldMode {
        self.mode
    }

    pub fn base_point(&self) -> &SystemPoint {
        &self.base
    }

    /// Success probability `f(T^y x)` of the site at level `y`.
    pub fn success_probability(&mut self, y: i64) -> f64 {
        match self.spec.kind {
            SystemKind::MannevillePomeau { .. } => {
                let k = y.unsigned_abs() as usize;
                while self.orbit.len() <= k {
                    let last = *self.orbit.last().expect("orbit seeded at construction");
                    self.orbit.push(self.spec.map_scalar(last));
                }
                self.spec.eval_f(&SystemPoint::Scalar(self.orbit[k]))
            }
            _ => self.spec.success_probability(&self.base, y),
        }
    }

    /// The orientation at level `y`: +1 with probability `f(T^y x)`.
    #[inline]
    pub fn orientation(&mut self, y: i64) -> i8 {
        let cached = self.eps.get(y);
        if cached != 0 {
            return cached;
        }
        let p = self.success_probability(y);
        let e = if self.site_key.uniform_at(y as u64) < p {
            1
        } else {
            -1
        };
        self.eps.set(y, e);
        e
    }
}
