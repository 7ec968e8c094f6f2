//! Brute-force posterior over the unrolled network.
//!
//! Sums the full joint over every assignment of `(M_H^0..t, M̄_R^1..t)` with
//! the factorization
//! `b_0(h_0) · Π_s P(r_s) · P(h_s | h_{s−1}, r_s) · L_s(r_s)`
//! and normalizes the marginal of `h_t`. Evidence is computed from the full
//! candidate plan sets rather than the cached first-action masses used by
//! [`Observer`](super::Observer), so the two routes share only the planner.

use super::belief::{Belief, BeliefTransition, ObservationTrace, ZERO_EVIDENCE_FLOOR};
use super::boltzmann::{boltzmann_distribution, first_action_consistent};
use super::InferenceParams;
use crate::domain::PlanningProblem;
use crate::error::{Error, Result};
use crate::model_space::ModelSpace;
use crate::planner::enumerate_candidate_plans;

pub const ORACLE_MAX_MODELS: usize = 8;
pub const ORACLE_MAX_STEPS: usize = 4;

pub fn exact_posterior_oracle(
    space: &ModelSpace,
    problem: &PlanningProblem,
    initial: &Belief,
    trace: &ObservationTrace,
    params: &InferenceParams,
) -> Result<Vec<Belief>> {
    let n = space.len();
    if n > ORACLE_MAX_MODELS {
        return Err(Error::TooLarge(format!(
            "oracle handles at most {ORACLE_MAX_MODELS} models, got {n}"
        )));
    }
    if trace.len() > ORACLE_MAX_STEPS {
        return Err(Error::TooLarge(format!(
            "oracle handles at most {ORACLE_MAX_STEPS} steps, got {}",
            trace.len()
        )));
    }
    if initial.len() != n {
        return Err(Error::InvalidParameter(
            "belief and space sizes differ".into(),
        ));
    }
    params.validate()?;
    let transition = params.transition()?;

    let evidence = trace
        .steps()
        .map(|(state, observed)| {
            let here = problem.from_state(state.clone());
            let raw = space
                .models()
                .map(|model| {
                    match enumerate_candidate_plans(model, &here, params.zeta, params.max_plans) {
                        Ok(set) => {
                            let dist = boltzmann_distribution(set, params.beta)?;
                            Ok(dist
                                .iter()
                                .filter(|(plan, _)| first_action_consistent(observed, plan))
                                .map(|(_, p)| p)
                                .sum())
                        }
                        Err(Error::Unsolvable) => Ok(0.0),
                        Err(e) => Err(e),
                    }
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(if raw.iter().all(|l| *l == 0.0) {
                vec![ZERO_EVIDENCE_FLOOR; n]
            } else {
                raw
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = vec![initial.clone()];
    for t in 1..=trace.len() {
        let mut marginal = vec![0.0; n];
        let mut joint = Joint {
            n,
            evidence: &evidence[..t],
            transition,
            marginal: &mut marginal,
        };
        for h0 in 0..n {
            let w = initial.get(h0);
            if w > 0.0 {
                joint.descend(0, h0, w);
            }
        }
        out.push(Belief::from_weights(marginal)?);
    }
    Ok(out)
}

struct Joint<'a> {
    n: usize,
    evidence: &'a [Vec<f64>],
    transition: BeliefTransition,
    marginal: &'a mut [f64],
}

impl Joint<'_> {
    fn descend(&mut self, step: usize, previous: usize, weight: f64) {
        if step == self.evidence.len() {
            self.marginal[previous] += weight;
            return;
        }
        let p_temporary = 1.0 / self.n as f64;
        for temporary in 0..self.n {
            let with_evidence = weight * p_temporary * self.evidence[step][temporary];
            if with_evidence == 0.0 {
                continue;
            }
            for next in 0..self.n {
                let w = with_evidence * self.transition.probability(next, previous, temporary);
                if w != 0.0 {
                    self.descend(step + 1, next, w);
                }
            }
        }
    }
}
