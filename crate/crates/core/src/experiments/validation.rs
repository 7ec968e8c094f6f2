//! Cross-checks the forward belief filter against the brute-force oracle.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::cost::Cost;
use crate::domain::{ActionSpec, DomainModel, Fluents, PlanningProblem};
use crate::error::{Error, Result};
use crate::explicability::{
    exact_posterior_oracle, Belief, InferenceParams, ObservationTrace, Observer,
};
use crate::model_space::{FeatureEffect, ModelFeature, ModelSpace};
use crate::planner::Planner;

use super::seeded_rng;

/// Transition weights exercised by [`run_validation`].
pub const VALIDATION_ALPHAS: [f64; 4] = [0.0, 0.3, 0.7, 1.0];
pub const VALIDATION_TOLERANCE: f64 = 1e-9;

/// A small random model space (at most 4 models), a solvable problem, a
/// trace of at most 3 actions valid under the true model, a random prior
/// and one of [`VALIDATION_ALPHAS`].
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub space: ModelSpace,
    pub problem: PlanningProblem,
    pub trace: ObservationTrace,
    pub prior: Belief,
    pub params: InferenceParams,
}

pub fn random_instance<R: Rng>(rng: &mut R) -> Result<RandomInstance> {
    loop {
        if let Some(instance) = try_instance(rng)? {
            return Ok(instance);
        }
    }
}

fn try_instance<R: Rng>(rng: &mut R) -> Result<Option<RandomInstance>> {
    let n_fluents = rng.gen_range(3..=5);
    let names: Vec<String> = (0..n_fluents).map(|i| format!("p{i}")).collect();
    let n_actions = rng.gen_range(3..=6);
    let mut actions = Vec::with_capacity(n_actions);
    for i in 0..n_actions {
        let mut pool = names.clone();
        pool.shuffle(rng);
        let n_pre = rng.gen_range(0..=2);
        let n_add = rng.gen_range(1..=2).min(n_fluents - n_pre);
        let n_del = rng.gen_range(0..=1);
        let pre = pool[..n_pre].to_vec();
        let add = pool[n_pre..n_pre + n_add].to_vec();
        // deletes come from the preconditions, so effects never conflict
        let del = pre.iter().take(n_del).cloned().collect::<Vec<_>>();
        actions.push(
            ActionSpec::new(format!("a{i}"), rng.gen_range(1..=3))
                .pre(pre)
                .add(add)
                .del(del),
        );
    }
    let base = DomainModel::new("random", Arc::new(Fluents::new(names.clone())?), actions)?;
    let k = rng.gen_range(0..=2);
    let features = (0..k)
        .map(|f| {
            let target = format!("a{}", rng.gen_range(0..n_actions));
            let effect = match rng.gen_range(0..3) {
                0 => FeatureEffect::RemoveAction,
                1 => FeatureEffect::ScaleCost(Cost::integer(rng.gen_range(2..=3))),
                _ => FeatureEffect::AddPrecondition(names[rng.gen_range(0..n_fluents)].clone()),
            };
            ModelFeature::new(format!("f{f}"), target, effect)
        })
        .collect::<Vec<_>>();
    let true_mask = rng.gen_range(0..1usize << k);
    let space = match ModelSpace::build(base, features, true_mask) {
        Ok(space) => space,
        Err(Error::InvalidFeature { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let truth = space.true_model();
    let initial = {
        let chosen: Vec<&String> = names.iter().filter(|_| rng.gen_bool(0.4)).collect();
        truth.state(chosen)?
    };
    // goal: part of a state reached by a short random walk
    let mut state = initial.clone();
    for _ in 0..rng.gen_range(1..=3) {
        let ids = truth.applicable_ids(&state);
        let Some(id) = ids.choose(rng) else { break };
        state = truth.apply_action(&state, id)?;
    }
    let goal_names: Vec<String> = truth
        .fluents()
        .names_of(&state)
        .into_iter()
        .filter(|_| rng.gen_bool(0.6))
        .collect();
    let goal = truth.state(&goal_names)?;
    let problem = PlanningProblem { initial, goal };
    if problem.is_goal(&problem.initial)
        || Planner::default().optimal_plan(truth, &problem).is_err()
    {
        return Ok(None);
    }
    let mut observed = Vec::new();
    let mut state = problem.initial.clone();
    for _ in 0..rng.gen_range(0..=3) {
        let ids = truth.applicable_ids(&state);
        let Some(id) = ids.choose(rng) else { break };
        observed.push(id.to_string());
        state = truth.apply_action(&state, id)?;
    }
    let trace = ObservationTrace::execute(truth, &problem.initial, &observed)?;
    let prior = Belief::from_weights((0..space.len()).map(|_| rng.gen_range(0.05..1.0)).collect())?;
    let alpha = *VALIDATION_ALPHAS.choose(rng).expect("non-empty");
    let params = InferenceParams::default()
        .with_alpha(alpha)
        .with_zeta(Cost::new(rng.gen_range(10..=15), 10))
        .with_beta(rng.gen_range(0.5..2.0));
    Ok(Some(RandomInstance {
        space,
        problem,
        trace,
        prior,
        params,
    }))
}

/// Largest per-entry gap between the forward filter and the oracle over
/// every prefix of the trace.
pub fn cross_check(
    space: &ModelSpace,
    problem: &PlanningProblem,
    trace: &ObservationTrace,
    prior: &Belief,
    params: &InferenceParams,
) -> Result<f64> {
    let forward = Observer::new(space, problem.goal.clone(), *params)?.trace(prior, trace)?;
    let exact = exact_posterior_oracle(space, problem, prior, trace, params)?;
    let mut worst: f64 = 0.0;
    for (f, e) in forward.beliefs.iter().zip(&exact) {
        for (a, b) in f.weights().iter().zip(e.weights()) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub instances: usize,
    pub max_error: f64,
    pub failures: usize,
    pub tolerance: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Checks `count` seeded random instances.
pub fn run_validation(count: usize, seed: u64) -> Result<ValidationReport> {
    let mut rng = seeded_rng(seed);
    let mut report = ValidationReport {
        instances: count,
        max_error: 0.0,
        failures: 0,
        tolerance: VALIDATION_TOLERANCE,
    };
    for _ in 0..count {
        let inst = random_instance(&mut rng)?;
        let err = cross_check(
            &inst.space,
            &inst.problem,
            &inst.trace,
            &inst.prior,
            &inst.params,
        )?;
        report.max_error = report.max_error.max(err);
        report.failures += (err > VALIDATION_TOLERANCE) as usize;
    }
    Ok(report)
}

/// Checks every problem of a domain, observing a prefix of the true
/// model's optimal plan as long as the oracle allows, for every alpha in
/// [`VALIDATION_ALPHAS`].
pub fn validate_domain(
    space: &ModelSpace,
    problems: &[PlanningProblem],
    prior: &Belief,
    params: &InferenceParams,
) -> Result<ValidationReport> {
    let mut report = ValidationReport {
        instances: 0,
        max_error: 0.0,
        failures: 0,
        tolerance: VALIDATION_TOLERANCE,
    };
    let planner = Planner::default();
    for (i, problem) in problems.iter().enumerate() {
        let plan = match planner.optimal_plan(space.true_model(), problem) {
            Ok(plan) => plan,
            Err(Error::Unsolvable) => continue,
            Err(e) => return Err(Error::in_problem(i, e)),
        };
        let steps = plan.len().min(crate::explicability::ORACLE_MAX_STEPS);
        let trace = ObservationTrace::execute(
            space.true_model(),
            &problem.initial,
            &plan.actions[..steps],
        )?;
        for alpha in VALIDATION_ALPHAS {
            let err = cross_check(space, problem, &trace, prior, &params.with_alpha(alpha))
                .map_err(|e| Error::in_problem(i, e))?;
            report.instances += 1;
            report.max_error = report.max_error.max(err);
            report.failures += (err > VALIDATION_TOLERANCE) as usize;
        }
    }
    Ok(report)
}
