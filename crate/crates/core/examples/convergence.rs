//! The observer's belief in the robot's true model over the ten shipped
//! Blocksworld problems, carried from one problem to the next.

use active_explicable::experiments::{run_convergence, ExperimentConfig, ExperimentKind};
use active_explicable::Result;

fn main() -> Result<()> {
    let result = run_convergence(&ExperimentConfig::preset(ExperimentKind::Convergence, None))?;
    print!("{}", result.summary_table());
    Ok(())
}
