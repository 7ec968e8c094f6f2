//! The taxi benchmark: heavy traffic makes far fares unprofitable, but an
//! observer who expects light traffic finds far pickups natural.

use active_explicable::experiments::taxi::{TaxiGrid, HEAVY};
use active_explicable::experiments::{
    run_comparison, BuiltinDomain, ExperimentConfig, ExperimentKind,
};
use active_explicable::{Planner, Result};

fn main() -> Result<()> {
    let grid = TaxiGrid::default();
    for g in &grid.guests {
        let kind = if g.far { "far" } else { "near" };
        println!("guest {} at ({}, {}) {kind}", g.name, g.x, g.y);
    }

    let domain = BuiltinDomain::Taxi.load()?;
    for (mask, model) in domain.space.models().enumerate() {
        let plan = Planner::default().optimal_plan(model, &domain.problems[0])?;
        let traffic = if mask == HEAVY { "heavy" } else { "light" };
        println!(
            "{traffic} traffic optimum: {} (cost {})",
            plan.actions.join(" "),
            plan.cost
        );
    }

    let config = ExperimentConfig::preset(ExperimentKind::Comparison, Some(BuiltinDomain::Taxi));
    print!("{}", run_comparison(&config)?.summary_table());
    Ok(())
}
