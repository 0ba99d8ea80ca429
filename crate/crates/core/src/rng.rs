//! Counter-based random number generation.
//!
//! Every random quantity in this crate is a deterministic function of a
//! 64-bit seed plus a structured key: a domain tag and one or two integer
//! indices. Site-indexed draws (orientations, shift coordinates, jump
//! variables) can therefore be queried in any order, from any worker, and
//! always reproduce the same value. Sequential streams are the same
//! mechanism applied to an incrementing counter.

/// Domain tags keeping unrelated draw families decorrelated under one seed.
pub mod domain {
    /// Coordinates of a product-measure shift point.
    pub const COORD: u64 = 0x636f_6f72_6431;
    /// Redraw marks of the hold-or-redraw shift chain.
    pub const MARKOV_MARK: u64 = 0x6d6b_7230_6d72;
    /// Values attached to redraw marks of the shift chain.
    pub const MARKOV_VALUE: u64 = 0x6d6b_7230_766c;
    /// Bernoulli site draws of an orientation field.
    pub const SITE: u64 = 0x7369_7465_3031;
    /// Geometric jump variables of the horizontal embedding.
    pub const XI: u64 = 0x7869_6a75_6d70;
    /// Sequential stream draws.
    pub const STREAM: u64 = 0x7374_7265_616d;
    /// Per-replica stream derivation.
    pub const REPLICA: u64 = 0x7265_706c_6963;
    /// Environment point drawn once per quenched ensemble.
    pub const POINT: u64 = 0x706f_696e_7430;
    /// Generic sub-stream split.
    pub const SPLIT: u64 = 0x7370_6c69_7430;
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 step: add the golden-ratio increment, then finalize.
#[inline]
pub fn mix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds one key part into a running hash.
#[inline]
fn fold(h: u64, part: u64) -> u64 {
    mix64(h ^ mix64(part))
}

#[inline]
fn to_unit(bits: u64) -> f64 {
    // 53 high bits -> [0, 1)
    (bits >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

/// Precomputed (seed, domain) key for site-indexed draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Key(u64);

impl Key {
    pub fn new(seed: u64, domain: u64) -> Self {
        Key(fold(mix64(seed), domain))
    }

    #[inline]
    pub fn bits_at(self, index: u64) -> u64 {
        fold(self.0, index)
    }

    #[inline]
    pub fn bits_at2(self, a: u64, b: u64) -> u64 {
        fold(fold(self.0, a), b)
    }

    /// Uniform [0, 1) draw at a single index.
    #[inline]
    pub fn uniform_at(self, index: u64) -> f64 {
        to_unit(self.bits_at(index))
    }

    /// Uniform [0, 1) draw at an index pair.
    #[inline]
    pub fn uniform_at2(self, a: u64, b: u64) -> f64 {
        to_unit(self.bits_at2(a, b))
    }
}

/// Sequential stream of pseudo-random draws, cheap to derive and replay.
///
/// `derive` builds an independent child stream from a domain tag and an
/// index without consuming any state from the parent, so replica streams
/// are identical no matter how work is scheduled.
#[derive(Debug, Clone)]
pub struct RngStream {
    key: u64,
    counter: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            key: fold(mix64(seed), domain::STREAM),
            counter: 0,
        }
    }

    pub fn derive(&self, domain: u64, index: u64) -> RngStream {
        RngStream {
            key: fold(fold(self.key, domain), index),
            counter: 0,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        fold(self.key, self.counter)
    }

    /// Uniform draw from [0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        to_unit(self.next_u64())
    }

    /// Uniform draw from {0, 1, ..., n-1} via the widening-multiply trick.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Fair +/-1 draw.
    #[inline]
    pub fn sign(&mut self) -> i64 {
        if self.next_u64() >> 63 == 0 {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Standard normal draw (Box-Muller, two uniforms per call).
    #[inline]
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        r * (std::f64::consts::TAU * u2).cos()
    }
}
