use serde::{Deserialize, Serialize};

use crate::domain::{DomainModel, State};
use crate::error::{Error, Result};

/// Tolerance for normalization checks.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Likelihood assigned to every model when an observation is inconsistent
/// with all of them.
pub const ZERO_EVIDENCE_FLOOR: f64 = 1e-6;

/// A probability distribution over model-space bitmasks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Belief {
    weights: Vec<f64>,
}

impl Belief {
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "a belief needs at least one model");
        Belief {
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn point_mass(n: usize, mask: usize) -> Self {
        assert!(mask < n, "mask {mask} outside a space of {n} models");
        let mut weights = vec![0.0; n];
        weights[mask] = 1.0;
        Belief { weights }
    }

    /// Normalizes non-negative weights. Fails on negative, non-finite or
    /// all-zero input.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("belief over zero models".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter(
                "belief weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidParameter("belief weights sum to zero".into()));
        }
        Ok(Belief {
            weights: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, mask: usize) -> f64 {
        self.weights[mask]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Lowest mask among the most probable models.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &w) in self.weights.iter().enumerate() {
            if w > self.weights[best] {
                best = i;
            }
        }
        best
    }

    pub fn is_normalized(&self) -> bool {
        self.weights.iter().all(|w| *w >= 0.0)
            && (self.weights.iter().sum::<f64>() - 1.0).abs() <= NORMALIZATION_TOLERANCE
    }
}

/// Transition CPT of the observer's model variable:
/// `P(M_H^t = m | M_H^{t-1} = m', M̄_R^t = m'') = (1−α)[m = m'] + α[m = m'']`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeliefTransition {
    alpha: f64,
}

impl BeliefTransition {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        Ok(BeliefTransition { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn probability(&self, next: usize, previous: usize, temporary: usize) -> f64 {
        let mut p = 0.0;
        if next == previous {
            p += 1.0 - self.alpha;
        }
        if next == temporary {
            p += self.alpha;
        }
        p
    }
}

/// Observed actions together with the states they were observed in.
///
/// `states` has one more entry than `actions`; `states[t]` is the state in
/// which `actions[t]` was observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationTrace {
    pub actions: Vec<String>,
    pub states: Vec<State>,
}

impl ObservationTrace {
    /// Executes `actions` under `model` from `initial`.
    pub fn execute<S: AsRef<str>>(
        model: &DomainModel,
        initial: &State,
        actions: &[S],
    ) -> Result<Self> {
        Ok(ObservationTrace {
            states: model.trajectory(initial, actions)?,
            actions: actions.iter().map(|a| a.as_ref().to_string()).collect(),
        })
    }

    pub fn empty(initial: State) -> Self {
        ObservationTrace {
            actions: Vec::new(),
            states: vec![initial],
        }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// `(state, action)` pairs in observation order.
    pub fn steps(&self) -> impl Iterator<Item = (&State, &str)> {
        self.states
            .iter()
            .zip(self.actions.iter().map(String::as_str))
    }

    /// Checks that each observed action is applicable in its state under
    /// `model`.
    pub fn check_applicable(&self, model: &DomainModel) -> Result<()> {
        if self.states.len() != self.actions.len() + 1 {
            return Err(Error::InvalidParameter(
                "trace needs exactly one more state than actions".into(),
            ));
        }
        for (t, (state, action)) in self.steps().enumerate() {
            if !model.is_applicable(state, action)? {
                return Err(Error::InvalidParameter(format!(
                    "step {}: action `{action}` is not applicable",
                    t + 1
                )));
            }
        }
        Ok(())
    }
}

/// One forward step, given per-model observation likelihoods.
///
/// Returns the normalized posterior and whether the zero-evidence floor was
/// needed.
pub fn forward_step(
    prior: &Belief,
    likelihoods: &[f64],
    transition: BeliefTransition,
) -> (Belief, bool) {
    let n = prior.len();
    assert_eq!(likelihoods.len(), n, "one likelihood per model");
    let zero_evidence = likelihoods.iter().all(|l| *l == 0.0);
    let likelihood = |m: usize| {
        if zero_evidence {
            ZERO_EVIDENCE_FLOOR
        } else {
            likelihoods[m]
        }
    };
    let temporary_prior = 1.0 / n as f64;
    let stay = 1.0 - transition.alpha();
    let follow = transition.alpha();

    // Σ_{m'} b(m') Σ_{m''} P(m'') P(m | m', m'') L(m''); the CPT has at most
    // two non-zero entries per (m', m''), so distribute each pair's mass.
    let mut unnormalized = vec![0.0; n];
    for (previous, &b) in prior.weights().iter().enumerate() {
        if b == 0.0 {
            continue;
        }
        for temporary in 0..n {
            let mass = b * temporary_prior * likelihood(temporary);
            if mass == 0.0 {
                continue;
            }
            unnormalized[previous] += mass * stay;
            unnormalized[temporary] += mass * follow;
        }
    }
    let total: f64 = unnormalized.iter().sum();
    let weights = unnormalized.into_iter().map(|u| u / total).collect();
    (Belief { weights }, zero_evidence)
}
