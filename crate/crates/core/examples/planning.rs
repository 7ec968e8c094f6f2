//! Optimal plan and bounded-cost candidate set for a shipped Blocksworld
//! problem.
//!
//! ```text
//! cargo run --example planning -- 3
//! ```

use active_explicable::experiments::BuiltinDomain;
use active_explicable::{Cost, Planner, Result};

fn main() -> Result<()> {
    let index: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(0);
    let domain = BuiltinDomain::Blocksworld.load()?;
    let problem = domain.problem(index)?;
    let model = domain.space.true_model();
    let planner = Planner::default();

    let best = planner.optimal_plan(model, problem)?;
    println!("optimal ({}): {}", best.cost, best.actions.join(" "));

    for zeta in [Cost::ONE, Cost::new(11, 10), Cost::new(3, 2)] {
        let set = planner.enumerate_candidate_plans(model, problem, zeta, 1000)?;
        println!(
            "zeta {zeta}: {} plans within cost {}",
            set.len(),
            set.bound()
        );
    }
    Ok(())
}
