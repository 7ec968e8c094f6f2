//! Invariants over randomly generated inputs.

use active_explicable::experiments::output::render;
use active_explicable::experiments::validation::{random_instance, RandomInstance};
use active_explicable::experiments::{
    corrupt_trace, run_noise_sweep, seeded_rng, ExperimentConfig, ExperimentKind, NoiseModel,
};
use active_explicable::explicability::{boltzmann_distribution, forward_step, BeliefTransition};
use active_explicable::planner::CandidatePlanSet;
use active_explicable::*;
use proptest::prelude::*;

fn instance(seed: u64) -> RandomInstance {
    random_instance(&mut seeded_rng(seed)).unwrap()
}

fn plans_with_costs(costs: &[i64]) -> CandidatePlanSet {
    CandidatePlanSet {
        plans: costs
            .iter()
            .enumerate()
            .map(|(i, c)| Plan::new(vec![format!("a{i}")], Cost::integer(*c)))
            .collect(),
        optimal_cost: Cost::integer(*costs.iter().min().unwrap()),
        zeta: Cost::integer(100),
        truncated: false,
    }
}

fn masses(set: CandidatePlanSet, beta: f64) -> Vec<f64> {
    let names: Vec<Vec<String>> = set.plans.iter().map(|p| p.actions.clone()).collect();
    let dist = boltzmann_distribution(set, beta).unwrap();
    names.iter().map(|n| dist.plan_mass(n)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn forward_step_keeps_beliefs_normalized(
        weights in prop::collection::vec(0.001f64..1.0, 1..9),
        raw in prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..=1.0], 9),
        alpha in 0.0f64..=1.0,
    ) {
        let prior = Belief::from_weights(weights).unwrap();
        let likelihoods = &raw[..prior.len()];
        let (next, _) = forward_step(&prior, likelihoods, BeliefTransition::new(alpha).unwrap());
        let total: f64 = next.weights().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
        prop_assert!(next.weights().iter().all(|w| (0.0..=1.0).contains(w)));
    }

    #[test]
    fn boltzmann_ignores_a_common_cost_shift(
        costs in prop::collection::vec(1i64..30, 1..7),
        shift in 0i64..50,
        beta in 0.0f64..3.0,
    ) {
        let shifted: Vec<i64> = costs.iter().map(|c| c + shift).collect();
        let a = masses(plans_with_costs(&costs), beta);
        let b = masses(plans_with_costs(&shifted), beta);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        prop_assert!((a.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn boltzmann_depends_on_beta_times_cost(costs in prop::collection::vec(1i64..30, 1..7), k in 1i64..5) {
        let scaled: Vec<i64> = costs.iter().map(|c| c * k).collect();
        let a = masses(plans_with_costs(&costs), 1.0);
        let b = masses(plans_with_costs(&scaled), 1.0 / k as f64);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scores_are_probabilities_and_traces_stay_normalized(seed in any::<u64>()) {
        let inst = instance(seed);
        let observer = Observer::new(&inst.space, inst.problem.goal.clone(), inst.params).unwrap();
        let trace = observer.trace(&inst.prior, &inst.trace).unwrap();
        for b in &trace.beliefs {
            prop_assert!((b.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }
        let candidates = Planner::default()
            .enumerate_candidate_plans(inst.space.true_model(), &inst.problem, inst.params.zeta, inst.params.max_plans)
            .unwrap();
        for plan in &candidates.plans {
            let active = observer.active_explicability(&plan.actions, &inst.problem.initial, &inst.prior).unwrap();
            let stat = observer.static_explicability(&plan.actions, &inst.problem.initial, &inst.prior).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&active.score), "E_A = {}", active.score);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&stat.score));
            prop_assert!(active.step_scores.iter().all(|s| (0.0..=1.0 + 1e-12).contains(s)));
        }
    }

    #[test]
    fn selected_cost_never_rises_with_gamma(seed in any::<u64>()) {
        let inst = instance(seed);
        let gammas = [0.0, 0.01, 0.05, 0.1, 0.3, 1.0, 10.0];
        for objective in [Objective::Exp, Objective::ActiveExp] {
            let mut last: Option<Cost> = None;
            for gamma in gammas {
                let config = SynthesisConfig { gamma, params: inst.params, objective };
                let syn = Synthesizer::new(&inst.space, &inst.problem, config).unwrap();
                let chosen = syn.select(objective, &inst.prior).unwrap();
                prop_assert!(syn.candidates().unwrap().contains(&chosen.plan.actions));
                prop_assert!(inst.space.true_model().validate_plan(&inst.problem, &chosen.plan));
                if let Some(prev) = last {
                    prop_assert!(chosen.cost <= prev, "{objective}: cost {} after {prev} at gamma {gamma}", chosen.cost);
                }
                last = Some(chosen.cost);
            }
        }
    }

    #[test]
    fn scoring_is_deterministic(seed in any::<u64>()) {
        let inst = instance(seed);
        let run = || {
            let config = SynthesisConfig { gamma: 0.05, params: inst.params, objective: Objective::ActiveExp };
            let r = Synthesizer::new(&inst.space, &inst.problem, config).unwrap().active_explicable(&inst.prior).unwrap();
            serde_json::to_string(&r).unwrap()
        };
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn action_declaration_order_does_not_matter(seed in any::<u64>()) {
        let inst = instance(seed);
        let model = inst.space.true_model();
        let mut specs = model.action_specs();
        specs.reverse();
        let reversed = DomainModel::new("reversed", model.fluents().clone(), specs).unwrap();
        let planner = Planner::default();
        let a = planner.enumerate_candidate_plans(model, &inst.problem, inst.params.zeta, 1000).unwrap();
        let b = planner.enumerate_candidate_plans(&reversed, &inst.problem, inst.params.zeta, 1000).unwrap();
        prop_assert_eq!(&a.plans, &b.plans);
        prop_assert_eq!(
            planner.optimal_plan(model, &inst.problem).unwrap(),
            planner.optimal_plan(&reversed, &inst.problem).unwrap()
        );
    }

    #[test]
    fn corruption_is_seeded_and_nested_across_levels(seed in any::<u64>(), low in 0.0f64..0.5, extra in 0.0f64..0.5) {
        let inst = instance(seed);
        let model = inst.space.true_model();
        let at = |level| corrupt_trace(&inst.trace, model, NoiseModel::new(level, seed).unwrap()).unwrap();
        let (a, b) = (at(low), at(low));
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&a.trace.states, &inst.trace.states);
        let high = at(low + extra);
        for (t, action) in a.trace.actions.iter().enumerate() {
            if *action != inst.trace.actions[t] {
                prop_assert_eq!(action, &high.trace.actions[t]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn experiment_reruns_are_byte_identical(seed in 0u64..1000, level in 0.0f64..0.5) {
        let mut config = ExperimentConfig::preset(ExperimentKind::Noise, None);
        config.problems = Some(vec![0, 1]);
        config.noise_levels = vec![0.0, level];
        config.seeds = vec![seed, seed + 1];
        let a = render(&run_noise_sweep(&config).unwrap()).unwrap();
        let b = render(&run_noise_sweep(&config).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}
