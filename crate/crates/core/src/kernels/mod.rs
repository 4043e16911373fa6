//! The four workload kernels, each a [`crate::coproc::Kernel`].
//!
//! Pi estimation, bootstrap resampling and Bayesian forward sampling are
//! feedback-free streams; the annealed knapsack sampler feeds accepted
//! states back into its proposal generator.

pub mod bayes;
pub mod bootstrap;
pub mod knapsack;
pub mod pi;

pub use bayes::{BayesKernel, BayesNetwork};
pub use bootstrap::{BootstrapKernel, BootstrapSpec};
pub use knapsack::{KnapsackInstance, KnapsackKernel};
pub use pi::PiKernel;
