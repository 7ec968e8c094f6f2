//! Plan likelihoods, explicability scores and the observer's belief update.
//!
//! The observer (a human watching the robot) holds a belief over the model
//! space. After each observed action the belief is updated with a forward
//! step of a two-chain dynamic Bayesian network: the observer's model
//! `M_H^t` and a per-step temporary robot model `M̄_R^t` whose likelihood is
//! the Boltzmann mass of candidate plans starting with the observed action.

mod belief;
mod boltzmann;
mod observer;
mod oracle;

use serde::{Deserialize, Serialize};

pub use belief::{
    forward_step, Belief, BeliefTransition, ObservationTrace, NORMALIZATION_TOLERANCE,
    ZERO_EVIDENCE_FLOOR,
};
pub use boltzmann::{boltzmann_distribution, first_action_consistent, PlanDistribution};
pub use observer::{
    active_explicability, belief_trace, belief_update, observation_likelihood,
    static_explicability, ActionMass, ActiveScore, BeliefStep, BeliefTrace, Expectation, Observer,
    StaticScore,
};
pub use oracle::{exact_posterior_oracle, ORACLE_MAX_MODELS, ORACLE_MAX_STEPS};

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::planner::DEFAULT_MAX_PLANS;

pub const DEFAULT_ZETA: Cost = Cost::new_const(11, 10);
pub const DEFAULT_BETA: f64 = 1.0;
pub const DEFAULT_ALPHA: f64 = 0.5;

/// Parameters shared by candidate generation, likelihoods and belief updates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InferenceParams {
    /// Candidate plans cost at most `zeta · c(π*)`.
    pub zeta: Cost,
    /// Boltzmann rationality.
    pub beta: f64,
    /// Weight of the temporary robot model in the belief transition.
    pub alpha: f64,
    pub max_plans: usize,
}

impl Default for InferenceParams {
    fn default() -> Self {
        InferenceParams {
            zeta: DEFAULT_ZETA,
            beta: DEFAULT_BETA,
            alpha: DEFAULT_ALPHA,
            max_plans: DEFAULT_MAX_PLANS,
        }
    }
}

impl InferenceParams {
    pub fn validate(&self) -> Result<()> {
        if self.zeta < Cost::ONE {
            return Err(Error::InvalidParameter(format!(
                "zeta must be >= 1, got {}",
                self.zeta
            )));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be finite and >= 0, got {}",
                self.beta
            )));
        }
        if self.max_plans == 0 {
            return Err(Error::InvalidParameter("max_plans must be positive".into()));
        }
        BeliefTransition::new(self.alpha).map(|_| ())
    }

    pub fn transition(&self) -> Result<BeliefTransition> {
        BeliefTransition::new(self.alpha)
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        InferenceParams { alpha, ..self }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        InferenceParams { beta, ..self }
    }

    pub fn with_zeta(self, zeta: Cost) -> Self {
        InferenceParams { zeta, ..self }
    }
}
