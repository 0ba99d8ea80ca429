//! A vector indexed by `i64`, used for per-level caches and visit counts.
//!
//! Walk levels concentrate in a band around the origin, so two plain `Vec`s
//! (one per sign) are denser and faster than a hash map.

#[derive(Debug, Clone)]
pub struct SignedVec<T> {
    pos: Vec<T>, // index i >= 0 at pos[i]
    neg: Vec<T>, // index i < 0 at neg[-1 - i]
    default: T,
}

impl<T: Copy> SignedVec<T> {
    pub fn new(default: T) -> Self {
        SignedVec {
            pos: Vec::new(),
            neg: Vec::new(),
            default,
        }
    }

    #[inline]
    pub fn get(&self, index: i64) -> T {
        if index >= 0 {
            self.pos.get(index as usize).copied().unwrap_or(self.default)
        } else {
            self.neg
                .get((-1 - index) as usize)
                .copied()
                .unwrap_or(self.default)
        }
    }

    #[inline]
    pub fn set(&mut self, index: i64, value: T) {
        *self.slot(index) = value;
    }

    #[inline]
    fn slot(&mut self, index: i64) -> &mut T {
        let (vec, i) = if index >= 0 {
            (&mut self.pos, index as usize)
        } else {
            (&mut self.neg, (-1 - index) as usize)
        };
        if i >= vec.len() {
            vec.resize(i + 1, self.default);
        }
        &mut vec[i]
    }
}

impl SignedVec<u64> {
    /// Increments a counter slot and returns the new value.
    #[inline]
    pub fn increment(&mut self, index: i64) -> u64 {
        let slot = self.slot(index);
        *slot += 1;
        *slot
    }
}
