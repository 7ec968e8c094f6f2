use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::belief::{forward_step, Belief, BeliefTransition, ObservationTrace};
use super::boltzmann::{boltzmann_distribution, PlanDistribution};
use super::InferenceParams;
use crate::domain::{DomainModel, FluentSet, PlanningProblem, State};
use crate::error::{Error, Result};
use crate::model_space::ModelSpace;
use crate::planner::{Plan, Planner};

/// Boltzmann mass of one model's candidate plans, grouped by first action.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ActionMass {
    pub by_action: BTreeMap<String, f64>,
    pub solvable: bool,
    pub truncated: bool,
}

impl ActionMass {
    pub fn mass(&self, action: &str) -> f64 {
        self.by_action.get(action).copied().unwrap_or(0.0)
    }

    fn from_distribution(dist: &PlanDistribution) -> Self {
        let mut by_action = BTreeMap::new();
        for (plan, p) in dist.iter() {
            if let Some(first) = plan.first() {
                *by_action.entry(first.to_string()).or_insert(0.0) += p;
            }
        }
        ActionMass {
            by_action,
            solvable: true,
            truncated: dist.candidate_set.truncated,
        }
    }
}

/// Result of one belief update.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeliefStep {
    pub belief: Belief,
    /// Observation likelihood under each model, indexed by mask.
    pub likelihoods: Vec<f64>,
    /// No model could explain the observation; the floor likelihood was used.
    pub zero_evidence: bool,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeliefTrace {
    /// `beliefs[0]` is the prior; `beliefs[t]` follows the first `t` actions.
    pub beliefs: Vec<Belief>,
    pub steps: Vec<BeliefStep>,
}

impl BeliefTrace {
    pub fn last(&self) -> &Belief {
        self.beliefs
            .last()
            .expect("a trace holds at least the prior")
    }

    pub fn truncated(&self) -> bool {
        self.steps.iter().any(|s| s.truncated)
    }

    pub fn zero_evidence_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.zero_evidence).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActiveScore {
    pub score: f64,
    pub step_scores: Vec<f64>,
    pub trace: BeliefTrace,
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StaticScore {
    pub score: f64,
    pub truncated: bool,
    /// Models under which the problem has no plan; they contribute 0.
    pub unsolvable_models: usize,
}

/// What the observer expects plans to come from.
#[derive(Debug, Clone, Copy)]
pub enum Expectation<'a> {
    Model(&'a DomainModel),
    Belief(&'a ModelSpace, &'a Belief),
}

type PlanMasses = Option<Arc<(HashMap<Vec<String>, f64>, bool)>>;

/// Simulated observer for one model space and goal.
///
/// Candidate sets depend only on (model, state, goal), so they are computed
/// once per (mask, state) and shared by every score and update that needs
/// them. The caches make repeated scoring of many candidate plans cheap.
pub struct Observer<'a> {
    space: &'a ModelSpace,
    goal: FluentSet,
    params: InferenceParams,
    transition: BeliefTransition,
    planner: Planner,
    first_actions: Mutex<HashMap<(usize, State), Arc<ActionMass>>>,
    whole_plans: Mutex<HashMap<(usize, State), PlanMasses>>,
}

impl<'a> Observer<'a> {
    pub fn new(space: &'a ModelSpace, goal: FluentSet, params: InferenceParams) -> Result<Self> {
        params.validate()?;
        Ok(Observer {
            space,
            goal,
            transition: params.transition()?,
            params,
            planner: Planner::default(),
            first_actions: Mutex::new(HashMap::new()),
            whole_plans: Mutex::new(HashMap::new()),
        })
    }

    pub fn with_planner(mut self, planner: Planner) -> Self {
        self.planner = planner;
        self
    }

    pub fn space(&self) -> &ModelSpace {
        self.space
    }

    pub fn params(&self) -> &InferenceParams {
        &self.params
    }

    pub fn goal(&self) -> &FluentSet {
        &self.goal
    }

    fn distribution(&self, mask: usize, state: &State) -> Result<Option<PlanDistribution>> {
        let problem = PlanningProblem {
            initial: state.clone(),
            goal: self.goal.clone(),
        };
        match self.planner.enumerate_candidate_plans(
            self.space.model(mask),
            &problem,
            self.params.zeta,
            self.params.max_plans,
        ) {
            Ok(set) => Ok(Some(boltzmann_distribution(set, self.params.beta)?)),
            Err(Error::Unsolvable) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// First-action masses of model `mask`'s candidates from `state`.
    pub fn action_mass(&self, mask: usize, state: &State) -> Result<Arc<ActionMass>> {
        let key = (mask, state.clone());
        if let Some(hit) = self.first_actions.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let mass = Arc::new(match self.distribution(mask, state)? {
            Some(dist) => ActionMass::from_distribution(&dist),
            None => ActionMass::default(),
        });
        self.first_actions.lock().unwrap().insert(key, mass.clone());
        Ok(mass)
    }

    fn plan_masses(&self, mask: usize, state: &State) -> Result<PlanMasses> {
        let key = (mask, state.clone());
        if let Some(hit) = self.whole_plans.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let masses = self.distribution(mask, state)?.map(|dist| {
            let truncated = dist.candidate_set.truncated;
            let map = dist
                .iter()
                .map(|(p, pr)| (p.actions.clone(), pr))
                .collect::<HashMap<_, _>>();
            Arc::new((map, truncated))
        });
        self.whole_plans.lock().unwrap().insert(key, masses.clone());
        Ok(masses)
    }

    /// `L(m) = Σ_π P(π | m) δ(observed = first(π))` for every model.
    pub fn likelihoods(&self, state: &State, observed: &str) -> Result<(Vec<f64>, bool)> {
        let mut truncated = false;
        let values = (0..self.space.len())
            .map(|mask| {
                let mass = self.action_mass(mask, state)?;
                truncated |= mass.truncated;
                Ok(mass.mass(observed))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((values, truncated))
    }

    pub fn update(&self, prior: &Belief, state: &State, observed: &str) -> Result<BeliefStep> {
        check_belief(prior, self.space)?;
        let (likelihoods, truncated) = self.likelihoods(state, observed)?;
        let (belief, zero_evidence) = forward_step(prior, &likelihoods, self.transition);
        Ok(BeliefStep {
            belief,
            likelihoods,
            zero_evidence,
            truncated,
        })
    }

    pub fn trace(&self, initial: &Belief, trace: &ObservationTrace) -> Result<BeliefTrace> {
        check_belief(initial, self.space)?;
        let mut beliefs = vec![initial.clone()];
        let mut steps = Vec::with_capacity(trace.len());
        for (state, action) in trace.steps() {
            let step = self.update(beliefs.last().unwrap(), state, action)?;
            beliefs.push(step.belief.clone());
            steps.push(step);
        }
        Ok(BeliefTrace { beliefs, steps })
    }

    /// Per-step explicability averaged over the plan, with the belief
    /// updated by each observed action of the plan itself.
    pub fn active_explicability(
        &self,
        actions: &[String],
        initial: &State,
        belief: &Belief,
    ) -> Result<ActiveScore> {
        let trace = ObservationTrace::execute(self.space.true_model(), initial, actions)?;
        let beliefs = self.trace(belief, &trace)?;
        let step_scores: Vec<f64> = beliefs
            .steps
            .iter()
            .map(|step| {
                step.likelihoods
                    .iter()
                    .zip(step.belief.weights())
                    .map(|(l, b)| l * b)
                    .sum()
            })
            .collect();
        let score = if step_scores.is_empty() {
            1.0
        } else {
            step_scores.iter().sum::<f64>() / step_scores.len() as f64
        };
        Ok(ActiveScore {
            score,
            step_scores,
            truncated: beliefs.truncated(),
            trace: beliefs,
        })
    }

    /// Belief-weighted probability that the whole plan is one the observer
    /// would generate.
    pub fn static_explicability(
        &self,
        actions: &[String],
        initial: &State,
        belief: &Belief,
    ) -> Result<StaticScore> {
        check_belief(belief, self.space)?;
        let mut out = StaticScore {
            score: 0.0,
            truncated: false,
            unsolvable_models: 0,
        };
        for (mask, &b) in belief.weights().iter().enumerate() {
            match self.plan_masses(mask, initial)? {
                Some(masses) => {
                    out.truncated |= masses.1;
                    out.score += b * masses.0.get(actions).copied().unwrap_or(0.0);
                }
                None => out.unsolvable_models += 1,
            }
        }
        Ok(out)
    }
}

fn check_belief(belief: &Belief, space: &ModelSpace) -> Result<()> {
    if belief.len() != space.len() {
        return Err(Error::InvalidParameter(format!(
            "belief covers {} models, space has {}",
            belief.len(),
            space.len()
        )));
    }
    if !belief.is_normalized() {
        return Err(Error::InvalidParameter("belief is not normalized".into()));
    }
    Ok(())
}

/// Probability that a model's candidate plans from `state` begin with
/// `observed`; 0 when the goal is unreachable under the model.
pub fn observation_likelihood(
    model: &DomainModel,
    state: &State,
    observed: &str,
    goal: &FluentSet,
    params: &InferenceParams,
) -> Result<f64> {
    let problem = PlanningProblem {
        initial: state.clone(),
        goal: goal.clone(),
    };
    match Planner::default().enumerate_candidate_plans(
        model,
        &problem,
        params.zeta,
        params.max_plans,
    ) {
        Ok(set) => Ok(boltzmann_distribution(set, params.beta)?.first_action_mass(observed)),
        Err(Error::Unsolvable) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Whole-plan explicability under one model or a belief over models.
pub fn static_explicability(
    plan: &Plan,
    expectation: Expectation<'_>,
    problem: &PlanningProblem,
    params: &InferenceParams,
) -> Result<StaticScore> {
    match expectation {
        Expectation::Model(model) => {
            let space = ModelSpace::singleton(model.clone());
            let observer = Observer::new(&space, problem.goal.clone(), *params)?;
            observer.static_explicability(&plan.actions, &problem.initial, &Belief::uniform(1))
        }
        Expectation::Belief(space, belief) => {
            let observer = Observer::new(space, problem.goal.clone(), *params)?;
            observer.static_explicability(&plan.actions, &problem.initial, belief)
        }
    }
}

pub fn belief_update(
    prior: &Belief,
    space: &ModelSpace,
    state: &State,
    observed: &str,
    goal: &FluentSet,
    params: &InferenceParams,
) -> Result<BeliefStep> {
    Observer::new(space, goal.clone(), *params)?.update(prior, state, observed)
}

pub fn belief_trace(
    initial: &Belief,
    space: &ModelSpace,
    problem: &PlanningProblem,
    trace: &ObservationTrace,
    params: &InferenceParams,
) -> Result<BeliefTrace> {
    Observer::new(space, problem.goal.clone(), *params)?.trace(initial, trace)
}

pub fn active_explicability(
    plan: &Plan,
    space: &ModelSpace,
    problem: &PlanningProblem,
    initial: &Belief,
    params: &InferenceParams,
) -> Result<ActiveScore> {
    Observer::new(space, problem.goal.clone(), *params)?.active_explicability(
        &plan.actions,
        &problem.initial,
        initial,
    )
}
