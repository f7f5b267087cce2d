//! Finite one-way chains of threshold-coupled ("cascading") logistic maps.
//!
//! Every site iterates `f(x) = 4x(1-x)`; any value above the threshold `c1`
//! is clipped and the overflow is passed to the next site, and the overflow
//! leaving the last site is the output of the step.
//!
//! - [`scalar`]: the single-site threshold map, its intervals and the
//!   tent-map conjugacy.
//! - [`cascade`]: the N-site map.
//! - [`attractor`]: star values, the anti-phase window, Markov partitions,
//!   periodic-orbit detection and attractor censuses.
//! - [`basin`]: basin rendering, connected components and accumulation counts.
//! - [`output`]: CSV and PGM/PPM writers.

pub mod attractor;
pub mod basin;
pub mod cascade;
pub mod error;
pub mod output;
pub mod roots;
pub mod scalar;
pub mod seed;

pub use cascade::{cascade, excess_window_sum, iterate, step, ExcessTrace, LatticeState};
pub use error::{Error, Result};
pub use scalar::{threshold_map, Clipped, OrbitClass, Threshold};
