//! Active explicable planning.
//!
//! A robot acts under its true model while a human observer holds a belief
//! over a space of possible robot models. This crate predicts how that
//! belief shifts as each action is observed, scores plans by how well every
//! step matches the observer's (evolving) expectations, and selects plans
//! that trade this score against cost.
//!
//! - [`domain`] and [`model_space`]: ground STRIPS models and the `2^k`
//!   feature lattice of candidate models.
//! - [`planner`]: optimal plans and cost-bounded candidate plan sets.
//! - [`explicability`]: Boltzmann plan likelihoods, belief updates, static
//!   and active explicability, and a brute-force posterior oracle.
//! - [`synthesis`]: OP / EXP / ActiveEXP plan selection.
//! - [`experiments`]: built-in Blocksworld and Taxi benchmarks and the
//!   convergence, noise and comparison harness.
//! - [`cli`]: the `actexp` command-line front end.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod cli;
pub mod cost;
pub mod domain;
pub mod error;
pub mod experiments;
pub mod explicability;
pub mod format;
pub mod model_space;
pub mod planner;
pub mod synthesis;

pub use cost::Cost;
pub use domain::{ActionSpec, DomainModel, Fluents, PlanningProblem, State};
pub use error::{Error, Result};
pub use explicability::{Belief, InferenceParams, ObservationTrace, Observer};
pub use format::{Domain, DomainFile};
pub use model_space::{FeatureEffect, ModelFeature, ModelSpace};
pub use planner::{CandidatePlanSet, Plan, Planner};
pub use synthesis::{Objective, SynthesisConfig, SynthesisResult, Synthesizer};
