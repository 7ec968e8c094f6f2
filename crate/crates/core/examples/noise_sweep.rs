//! Belief convergence when the observer misreads some of the robot's actions.
//!
//! ```text
//! cargo run --release --example noise_sweep -- 40
//! ```
//!
//! The optional argument is the number of seeds (default 20).

use active_explicable::experiments::{run_noise_sweep, ExperimentConfig, ExperimentKind};
use active_explicable::Result;

fn main() -> Result<()> {
    let seeds: u64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(20);
    let mut config = ExperimentConfig::preset(ExperimentKind::Noise, None);
    config.seeds = (0..seeds).collect();
    let result = run_noise_sweep(&config)?;
    print!("{}", result.summary_table());
    Ok(())
}
