//! Scores every candidate plan of a comparison problem by active and static
//! explicability under the shipped observer prior.

use active_explicable::experiments::BuiltinDomain;
use active_explicable::*;

fn main() -> Result<()> {
    let domain = BuiltinDomain::BlocksworldComparison.load()?;
    let problem = domain.problem(0)?;
    let prior = domain.prior_or_uniform();
    let params = InferenceParams::default()
        .with_zeta(Cost::new(3, 2))
        .with_alpha(0.2);
    let observer = Observer::new(&domain.space, problem.goal.clone(), params)?;

    let set = Planner::default().enumerate_candidate_plans(
        domain.space.true_model(),
        problem,
        params.zeta,
        1000,
    )?;
    println!("{:>5}  {:>6}  {:>6}  plan", "cost", "E_A", "static");
    for plan in &set.plans {
        let active = observer.active_explicability(&plan.actions, &problem.initial, &prior)?;
        let stat = observer.static_explicability(&plan.actions, &problem.initial, &prior)?;
        println!(
            "{:>5}  {:.4}  {:.4}  {}",
            plan.cost,
            active.score,
            stat.score,
            plan.actions.join(" ")
        );
    }
    Ok(())
}
