//! Observation noise: actions misperceived as other applicable actions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domain::DomainModel;
use crate::error::{Error, Result};
use crate::explicability::ObservationTrace;

use super::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Probability that an observed action is replaced.
    pub level: f64,
    pub rng_seed: u64,
}

impl NoiseModel {
    pub fn new(level: f64, rng_seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&level) {
            return Err(Error::InvalidParameter(format!(
                "noise level must be in [0, 1], got {level}"
            )));
        }
        Ok(NoiseModel { level, rng_seed })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptedTrace {
    pub trace: ObservationTrace,
    /// Actions replaced by a different action.
    pub substitutions: usize,
    /// Steps drawn for corruption whose state offered no alternative.
    pub noop_corruptions: usize,
}

/// Replaces each action, with probability `noise.level`, by a uniformly
/// drawn different action applicable in the same state under `model`.
///
/// States are kept: the robot still executed its own plan, only the
/// observation is wrong, so every observed action stays applicable in the
/// state it was observed in. Each step consumes the same random draws
/// whatever the level, so for a fixed seed the corrupted steps at a lower
/// level are a subset of those at a higher level.
pub fn corrupt_trace(
    trace: &ObservationTrace,
    model: &DomainModel,
    noise: NoiseModel,
) -> Result<CorruptedTrace> {
    NoiseModel::new(noise.level, noise.rng_seed)?;
    trace.check_applicable(model)?;
    let mut rng = seeded_rng(noise.rng_seed);
    let mut out = trace.clone();
    let (mut substitutions, mut noop_corruptions) = (0, 0);
    for (t, action) in out.actions.iter_mut().enumerate() {
        let u: f64 = rng.gen();
        let pick: u64 = rng.gen();
        if u >= noise.level {
            continue;
        }
        let alternatives: Vec<&str> = model
            .applicable_ids(&trace.states[t])
            .into_iter()
            .filter(|a| *a != action)
            .collect();
        if alternatives.is_empty() {
            noop_corruptions += 1;
        } else {
            *action = alternatives[(pick % alternatives.len() as u64) as usize].to_string();
            substitutions += 1;
        }
    }
    Ok(CorruptedTrace {
        trace: out,
        substitutions,
        noop_corruptions,
    })
}

/// Seed of the noise stream for one (seed, problem) cell. Noise levels share
/// it on purpose.
pub fn cell_seed(seed: u64, problem: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (problem as u64).wrapping_add(1)
}
