use serde::Serialize;

use crate::error::{Error, Result};
use crate::planner::{CandidatePlanSet, Plan};

/// Boltzmann-rational distribution over a candidate plan set.
#[derive(Debug, Clone, Serialize)]
pub struct PlanDistribution {
    pub candidate_set: CandidatePlanSet,
    pub probabilities: Vec<f64>,
}

/// `P(π) ∝ exp(−β·(c(π) − c(π*)))`, normalized over the set.
pub fn boltzmann_distribution(plans: CandidatePlanSet, beta: f64) -> Result<PlanDistribution> {
    if plans.is_empty() {
        return Err(Error::EmptySupport);
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "beta must be finite and >= 0, got {beta}"
        )));
    }
    let weights: Vec<f64> = plans
        .plans
        .iter()
        .map(|p| (-beta * (p.cost - plans.optimal_cost).to_f64()).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    let probabilities = weights.into_iter().map(|w| w / total).collect();
    Ok(PlanDistribution {
        candidate_set: plans,
        probabilities,
    })
}

impl PlanDistribution {
    pub fn iter(&self) -> impl Iterator<Item = (&Plan, f64)> {
        self.candidate_set
            .plans
            .iter()
            .zip(self.probabilities.iter().copied())
    }

    /// Probability of the exact action sequence (0 when it is not a candidate).
    pub fn plan_mass(&self, actions: &[String]) -> f64 {
        self.iter()
            .filter(|(p, _)| p.actions == actions)
            .map(|(_, pr)| pr)
            .sum()
    }

    /// Total probability of candidates whose first action is `action`.
    pub fn first_action_mass(&self, action: &str) -> f64 {
        self.iter()
            .filter(|(p, _)| first_action_consistent(action, p))
            .map(|(_, pr)| pr)
            .sum()
    }
}

/// Whether `observed` is the first action of `plan`. An empty plan predicts
/// no action and is never consistent.
pub fn first_action_consistent(observed: &str, plan: &Plan) -> bool {
    plan.first() == Some(observed)
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::cost::Cost;

    fn set(costs: &[i64]) -> CandidatePlanSet {
        let plans: Vec<Plan> = costs
            .iter()
            .enumerate()
            .map(|(i, &c)| Plan::new(vec![format!("a{i}")], Cost::integer(c)))
            .collect();
        CandidatePlanSet {
            optimal_cost: plans.iter().map(|p| p.cost).min().unwrap(),
            plans,
            zeta: Cost::integer(2),
            truncated: false,
        }
    }

    #[test]
    fn single_plan_gets_all_mass() {
        let d = boltzmann_distribution(set(&[5]), 1.0).unwrap();
        assert_eq!(d.probabilities, vec![1.0]);
    }

    #[test]
    fn equal_costs_split_evenly_and_zero_beta_is_uniform() {
        let d = boltzmann_distribution(set(&[3, 3]), 2.0).unwrap();
        assert_eq!(d.probabilities, vec![0.5, 0.5]);
        let d = boltzmann_distribution(set(&[1, 4, 9]), 0.0).unwrap();
        for p in d.probabilities {
            assert_abs_diff_eq!(p, 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn costs_four_and_six_at_unit_beta() {
        // 1/(1+e^-2) and e^-2/(1+e^-2)
        let d = boltzmann_distribution(set(&[4, 6]), 1.0).unwrap();
        assert_abs_diff_eq!(d.probabilities[0], 0.880_797_077_977_882_3, epsilon = 1e-12);
        assert_abs_diff_eq!(d.probabilities[1], 0.119_202_922_022_117_6, epsilon = 1e-12);
    }

    #[test]
    fn empty_set_is_an_error() {
        let empty = CandidatePlanSet {
            plans: vec![],
            optimal_cost: Cost::ZERO,
            zeta: Cost::ONE,
            truncated: false,
        };
        assert!(matches!(
            boltzmann_distribution(empty, 1.0),
            Err(Error::EmptySupport)
        ));
    }

    #[test]
    fn first_action_consistency() {
        let ab = Plan::new(vec!["a".into(), "b".into()], Cost::integer(2));
        let ba = Plan::new(vec!["b".into(), "a".into()], Cost::integer(2));
        assert!(first_action_consistent("a", &ab));
        assert!(!first_action_consistent("a", &ba));
        assert!(!first_action_consistent("a", &Plan::empty()));
    }
}
