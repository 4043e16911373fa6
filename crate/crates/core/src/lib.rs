//! Emulation and benchmark harness for a p-bit probabilistic coprocessor.
//!
//! The machine being modeled is an array of parallel blocks, each pairing an
//! N-bit random-number generator with a problem-specific kernel pipeline and
//! draining into a shared data collector. This crate provides:
//!
//! - [`rng`]: bit-exact maximal-length LFSRs, the tanh p-bit behavioral
//!   model, and per-block seed derivation;
//! - [`coproc`]: the block-parallel architecture model with exact cycle
//!   accounting and the time-to-solution arithmetic;
//! - [`kernels`]: the four workload kernels (pi estimation, bootstrap
//!   resampling, Bayesian-network forward sampling, annealed 0/1 knapsack);
//! - [`oracles`]: independent brute-force references (lattice counts, full
//!   resample enumeration, exact network enumeration, knapsack DP);
//! - [`bench`](crate::bench): success-probability estimation, TTS
//!   formulas, annealing budget sweeps, error-scaling fits, and a
//!   single-stream baseline runner.
//!
//! Everything downstream of a seed is deterministic: replaying a
//! configuration reproduces every bit.

pub mod bench;
pub mod coproc;
pub mod error;
pub mod kernels;
pub mod oracles;
pub mod rng;

pub use error::{Error, Result};
