//! Compares the forward belief filter with brute-force enumeration of the
//! full joint distribution, first on random instances and then along a
//! Blocksworld plan.

use active_explicable::experiments::validation::{cross_check, run_validation};
use active_explicable::experiments::BuiltinDomain;
use active_explicable::explicability::ORACLE_MAX_STEPS;
use active_explicable::*;

fn main() -> Result<()> {
    let report = run_validation(100, 7)?;
    println!(
        "{} random instances: max error {:.2e}, {} above {:e}",
        report.instances, report.max_error, report.failures, report.tolerance
    );

    // the oracle handles at most 8 models, so keep two of the four features
    let shipped = BuiltinDomain::Blocksworld.load()?;
    let features = shipped.space.features()[..2].to_vec();
    let space = ModelSpace::build(shipped.space.base().clone(), features, 0)?;
    let problem = &shipped.problems[0];
    let plan = Planner::default().optimal_plan(space.true_model(), problem)?;
    let steps = plan.len().min(ORACLE_MAX_STEPS);
    let trace =
        ObservationTrace::execute(space.true_model(), &problem.initial, &plan.actions[..steps])?;
    for alpha in [0.0, 0.3, 1.0] {
        let params = InferenceParams::default().with_alpha(alpha);
        let err = cross_check(
            &space,
            problem,
            &trace,
            &Belief::uniform(space.len()),
            &params,
        )?;
        println!("blocksworld, alpha {alpha}: max error {err:.2e} over {steps} steps");
    }
    Ok(())
}
