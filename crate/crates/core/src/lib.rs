//! Simple random walks on randomly oriented 2d lattices.
//!
//! Horizontal lines of Z^2 are one-way streets whose directions are
//! generated by a dynamical system; vertical lines stay undirected. This
//! crate builds such lattices, runs the simple random walk on them, and
//! provides the vertical/horizontal embedding, the random walk in random
//! scenery, a simulator of the self-similar limit process, and the
//! estimators the experiment harness needs. All randomness is counter-based
//! and keyed, so every result is a pure function of seed and configuration.

pub mod dynsys;
pub mod embedding;
pub mod error;
pub mod lattice;
pub mod rng;
pub mod scenery;
pub mod signed_vec;
pub mod stats;

pub use error::CoreError;
pub use rng::RngStream;
