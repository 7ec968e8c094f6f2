//! Built-in benchmark domains and the experiment harness.
//!
//! [`run_convergence`] folds the observer's belief over a problem sequence,
//! [`run_noise_sweep`] repeats that with misperceived actions, and
//! [`run_comparison`] tabulates OP, EXP and ActiveEXP plans side by side.
//! [`write_result`] stores any result as CSV tables plus a JSON manifest.

pub mod blocksworld;
pub mod config;
pub mod noise;
pub mod output;
pub mod runner;
pub mod taxi;
pub mod validation;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use config::{BuiltinDomain, DomainSelector, ExperimentConfig, ExperimentKind};
pub use noise::{corrupt_trace, CorruptedTrace, NoiseModel};
pub use output::{existing_manifest, write_result, Manifest};
pub use runner::{
    run_comparison, run_convergence, run_experiment, run_noise_sweep, ExperimentResult,
};

/// Every random draw in the harness goes through this generator.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
