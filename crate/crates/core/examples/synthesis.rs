//! OP, EXP and ActiveEXP plans side by side, and how the cost weight gamma
//! pulls ActiveEXP back toward the optimal plan.

use active_explicable::experiments::BuiltinDomain;
use active_explicable::*;

fn main() -> Result<()> {
    let domain = BuiltinDomain::BlocksworldComparison.load()?;
    let prior = domain.prior_or_uniform();
    let problem = domain.problem(1)?;
    let config = SynthesisConfig {
        gamma: 0.01,
        params: InferenceParams::default()
            .with_zeta(Cost::new(3, 2))
            .with_alpha(0.2),
        ..Default::default()
    };
    let syn = Synthesizer::new(&domain.space, problem, config)?;
    for objective in Objective::ALL {
        let r = syn.select(objective, &prior)?;
        let e_a = syn.active_score(&r.plan, &prior)?;
        println!(
            "{objective:<9} cost {:<3} E_A {e_a:.4}  {}",
            r.cost,
            r.plan.actions.join(" ")
        );
    }

    for gamma in [0.0, 0.01, 0.05, 0.2] {
        let syn = Synthesizer::new(&domain.space, problem, config.with_gamma(gamma))?;
        let r = syn.active_explicable(&prior)?;
        println!(
            "gamma {gamma:<4}: ActiveEXP cost {} E_A {:.4}",
            r.cost,
            r.score.unwrap_or(0.0)
        );
    }
    Ok(())
}
