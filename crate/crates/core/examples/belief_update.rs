//! How one observed action moves the observer's belief between two models.
//!
//! The robot can reach the goal by `a, b` or `c, d`; the observer suspects
//! it might not be able to do `b`.

use std::sync::Arc;

use active_explicable::explicability::belief_update;
use active_explicable::*;

fn main() -> Result<()> {
    let fluents = Arc::new(Fluents::new(["s0", "s1", "s2", "g"])?);
    let base = DomainModel::new(
        "two-routes",
        fluents,
        vec![
            ActionSpec::new("a", 1).pre(["s0"]).add(["s1"]).del(["s0"]),
            ActionSpec::new("b", 1).pre(["s1"]).add(["g"]).del(["s1"]),
            ActionSpec::new("c", 1).pre(["s0"]).add(["s2"]).del(["s0"]),
            ActionSpec::new("d", 1).pre(["s2"]).add(["g"]).del(["s2"]),
        ],
    )?;
    let space = ModelSpace::build(
        base,
        vec![ModelFeature::new("no-b", "b", FeatureEffect::RemoveAction)],
        0,
    )?;
    let problem = PlanningProblem {
        initial: space.base().state(["s0"])?,
        goal: space.base().state(["g"])?,
    };

    for alpha in [0.0, 0.5, 1.0] {
        let params = InferenceParams::default()
            .with_alpha(alpha)
            .with_zeta(Cost::ONE);
        for observed in ["a", "c"] {
            let step = belief_update(
                &Belief::uniform(2),
                &space,
                &problem.initial,
                observed,
                &problem.goal,
                &params,
            )?;
            println!(
                "alpha {alpha:.1}, observe {observed}: likelihoods {:?} -> belief {:.3?}",
                step.likelihoods,
                step.belief.weights()
            );
        }
    }
    Ok(())
}
