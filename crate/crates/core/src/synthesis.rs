//! Plan selection under the optimal, statically explicable and actively
//! explicable objectives.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::domain::PlanningProblem;
use crate::error::{Error, Result};
use crate::explicability::{Belief, InferenceParams, Observer};
use crate::model_space::ModelSpace;
use crate::planner::{CandidatePlanSet, Plan, Planner};

pub const DEFAULT_GAMMA: f64 = 0.05;

/// Objective values closer than this are treated as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Cheapest plan under the true model.
    Op,
    /// Highest static explicability under a fixed belief, minus weighted cost.
    Exp,
    /// Highest active explicability, minus weighted cost.
    ActiveExp,
}

impl Objective {
    pub const ALL: [Objective; 3] = [Objective::Op, Objective::Exp, Objective::ActiveExp];

    pub fn name(&self) -> &'static str {
        match self {
            Objective::Op => "op",
            Objective::Exp => "exp",
            Objective::ActiveExp => "activeexp",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "op" => Ok(Objective::Op),
            "exp" => Ok(Objective::Exp),
            "activeexp" | "active-exp" | "active_exp" => Ok(Objective::ActiveExp),
            other => Err(Error::InvalidParameter(format!(
                "unknown objective `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisConfig {
    /// Weight of plan cost against explicability.
    pub gamma: f64,
    #[serde(flatten)]
    pub params: InferenceParams,
    pub objective: Objective,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig {
            gamma: DEFAULT_GAMMA,
            params: InferenceParams::default(),
            objective: Objective::ActiveExp,
        }
    }
}

impl SynthesisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be finite and >= 0, got {}",
                self.gamma
            )));
        }
        self.params.validate()
    }

    pub fn with_objective(self, objective: Objective) -> Self {
        SynthesisConfig { objective, ..self }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        SynthesisConfig { gamma, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthesisResult {
    pub objective: Objective,
    pub plan: Plan,
    pub cost: Cost,
    /// Active explicability for ActiveEXP, static explicability for EXP,
    /// absent for OP.
    pub score: Option<f64>,
    /// Maximized quantity: `score − γ·cost`, or `−γ·cost` for OP.
    pub objective_value: f64,
    /// Belief after each observed action of the plan (ActiveEXP only).
    pub per_step_beliefs: Vec<Belief>,
    pub candidates_considered: usize,
    pub candidates_truncated: bool,
    pub scores_truncated: bool,
}

/// Selects plans for one problem, sharing candidate-set caches across
/// objectives and scoring calls.
pub struct Synthesizer<'a> {
    observer: Observer<'a>,
    problem: PlanningProblem,
    config: SynthesisConfig,
    planner: Planner,
}

impl<'a> Synthesizer<'a> {
    pub fn new(
        space: &'a ModelSpace,
        problem: &PlanningProblem,
        config: SynthesisConfig,
    ) -> Result<Self> {
        config.validate()?;
        Ok(Synthesizer {
            observer: Observer::new(space, problem.goal.clone(), config.params)?,
            problem: problem.clone(),
            config,
            planner: Planner::default(),
        })
    }

    pub fn observer(&self) -> &Observer<'a> {
        &self.observer
    }

    pub fn config(&self) -> &SynthesisConfig {
        &self.config
    }

    fn space(&self) -> &ModelSpace {
        self.observer.space()
    }

    /// The true model's ζ-bounded candidate plans.
    pub fn candidates(&self) -> Result<CandidatePlanSet> {
        self.planner.enumerate_candidate_plans(
            self.space().true_model(),
            &self.problem,
            self.config.params.zeta,
            self.config.params.max_plans,
        )
    }

    pub fn select(&self, objective: Objective, belief: &Belief) -> Result<SynthesisResult> {
        match objective {
            Objective::Op => self.optimal(),
            Objective::Exp => self.explicable(belief),
            Objective::ActiveExp => self.active_explicable(belief),
        }
    }

    pub fn optimal(&self) -> Result<SynthesisResult> {
        let plan = self
            .planner
            .optimal_plan(self.space().true_model(), &self.problem)?;
        Ok(SynthesisResult {
            objective: Objective::Op,
            cost: plan.cost,
            objective_value: 0.0 - self.config.gamma * plan.cost.to_f64(),
            plan,
            score: None,
            per_step_beliefs: Vec::new(),
            candidates_considered: 1,
            candidates_truncated: false,
            scores_truncated: false,
        })
    }

    pub fn explicable(&self, belief: &Belief) -> Result<SynthesisResult> {
        let set = self.candidates()?;
        let mut truncated = false;
        let scores = set
            .plans
            .iter()
            .map(|p| {
                let s = self.observer.static_explicability(
                    &p.actions,
                    &self.problem.initial,
                    belief,
                )?;
                truncated |= s.truncated;
                Ok(s.score)
            })
            .collect::<Result<Vec<_>>>()?;
        let best = self.argmax(&set.plans, &scores);
        let plan = set.plans[best].clone();
        Ok(SynthesisResult {
            objective: Objective::Exp,
            cost: plan.cost,
            score: Some(scores[best]),
            objective_value: scores[best] - self.config.gamma * plan.cost.to_f64(),
            plan,
            per_step_beliefs: Vec::new(),
            candidates_considered: set.len(),
            candidates_truncated: set.truncated,
            scores_truncated: truncated,
        })
    }

    pub fn active_explicable(&self, belief: &Belief) -> Result<SynthesisResult> {
        let set = self.candidates()?;
        let scored = set
            .plans
            .iter()
            .map(|p| {
                self.observer
                    .active_explicability(&p.actions, &self.problem.initial, belief)
            })
            .collect::<Result<Vec<_>>>()?;
        let scores: Vec<f64> = scored.iter().map(|s| s.score).collect();
        let best = self.argmax(&set.plans, &scores);
        let plan = set.plans[best].clone();
        let chosen = &scored[best];
        Ok(SynthesisResult {
            objective: Objective::ActiveExp,
            cost: plan.cost,
            score: Some(chosen.score),
            objective_value: chosen.score - self.config.gamma * plan.cost.to_f64(),
            plan,
            per_step_beliefs: chosen.trace.beliefs[1..].to_vec(),
            candidates_considered: set.len(),
            candidates_truncated: set.truncated,
            scores_truncated: scored.iter().any(|s| s.truncated),
        })
    }

    /// Active explicability of an arbitrary plan of the true model.
    pub fn active_score(&self, plan: &Plan, belief: &Belief) -> Result<f64> {
        Ok(self
            .observer
            .active_explicability(&plan.actions, &self.problem.initial, belief)?
            .score)
    }

    /// Highest `score − γ·cost`; ties go to the cheaper plan, then to the
    /// earlier plan in (lexicographic) candidate order.
    fn argmax(&self, plans: &[Plan], scores: &[f64]) -> usize {
        let objective = |i: usize| scores[i] - self.config.gamma * plans[i].cost.to_f64();
        let mut best = 0;
        for i in 1..plans.len() {
            let (a, b) = (objective(i), objective(best));
            if a > b + TIE_TOLERANCE
                || ((a - b).abs() <= TIE_TOLERANCE && plans[i].cost < plans[best].cost)
            {
                best = i;
            }
        }
        best
    }
}

pub fn select_optimal(
    space: &ModelSpace,
    problem: &PlanningProblem,
    config: &SynthesisConfig,
) -> Result<SynthesisResult> {
    Synthesizer::new(space, problem, *config)?.optimal()
}

pub fn select_explicable(
    space: &ModelSpace,
    problem: &PlanningProblem,
    initial_belief: &Belief,
    config: &SynthesisConfig,
) -> Result<SynthesisResult> {
    Synthesizer::new(space, problem, *config)?.explicable(initial_belief)
}

pub fn select_active_explicable(
    space: &ModelSpace,
    problem: &PlanningProblem,
    initial_belief: &Belief,
    config: &SynthesisConfig,
) -> Result<SynthesisResult> {
    Synthesizer::new(space, problem, *config)?.active_explicable(initial_belief)
}
