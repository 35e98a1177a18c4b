//! Exact simulation of finitely generated probabilistic theories.
//!
//! * [`exact`]: rational scalars, vectors, matrices and cone feasibility.
//! * [`theory`]: systems, states, effects, measurements and the checkers for
//!   causality, tomographic locality and bit-symmetry.
//! * [`boxworld`]: the gbit, n-party no-signalling behaviors and f-boxes.
//! * [`zoo`]: classical bit, rebit and sampled qubit theories.
//! * [`commcc`]: the one-bit f-box communication protocol and exact classical
//!   communication-complexity oracles.
//! * [`advice`]: advice circuits that decide arbitrary language slices.

pub mod advice;
pub mod boxworld;
pub mod commcc;
pub mod error;
pub mod exact;
pub mod theory;
pub mod zoo;

pub use error::{Error, Result};
