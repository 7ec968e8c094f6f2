//! Experiment configuration and the shipped benchmark data.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::explicability::{InferenceParams, DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_ZETA};
use crate::format::{Domain, DomainFile, SCHEMA_VERSION};
use crate::planner::DEFAULT_MAX_PLANS;
use crate::synthesis::{Objective, SynthesisConfig, DEFAULT_GAMMA};

use super::blocksworld::{COMPARISON_ZETA, EXPERIMENT_ZETA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Convergence,
    Noise,
    Comparison,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Convergence => "convergence",
            ExperimentKind::Noise => "noise",
            ExperimentKind::Comparison => "comparison",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convergence" => Ok(ExperimentKind::Convergence),
            "noise" => Ok(ExperimentKind::Noise),
            "comparison" => Ok(ExperimentKind::Comparison),
            other => Err(Error::InvalidParameter(format!(
                "unknown experiment kind `{other}`"
            ))),
        }
    }
}

/// Domains shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinDomain {
    /// 4-block, 16-model Blocksworld with the 10-problem convergence sequence.
    Blocksworld,
    /// Same model space, 4 comparison problems and a biased observer prior.
    BlocksworldComparison,
    /// Taxi pickup scheduling, heavy-traffic truth, light-biased prior.
    Taxi,
}

impl BuiltinDomain {
    pub const ALL: [BuiltinDomain; 3] = [
        BuiltinDomain::Blocksworld,
        BuiltinDomain::BlocksworldComparison,
        BuiltinDomain::Taxi,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinDomain::Blocksworld => "blocksworld",
            BuiltinDomain::BlocksworldComparison => "blocksworld-comparison",
            BuiltinDomain::Taxi => "taxi",
        }
    }

    /// The shipped domain file.
    pub fn source(&self) -> &'static str {
        match self {
            BuiltinDomain::Blocksworld => include_str!("../../data/blocksworld.json"),
            BuiltinDomain::BlocksworldComparison => {
                include_str!("../../data/blocksworld_comparison.json")
            }
            BuiltinDomain::Taxi => include_str!("../../data/taxi.json"),
        }
    }

    pub fn load(&self) -> Result<Domain> {
        DomainFile::parse(self.source())?.into_domain()
    }

    /// Rebuilds the domain from its generator; equals [`Self::load`].
    pub fn generate(&self) -> Result<Domain> {
        use super::{blocksworld as bw, taxi};
        match self {
            BuiltinDomain::Blocksworld => {
                let (space, problems) = bw::build_blocksworld(4, &bw::FeatureChoice::Default)?;
                Ok(Domain {
                    space,
                    problems,
                    prior: None,
                })
            }
            BuiltinDomain::BlocksworldComparison => {
                let (space, _) = bw::build_blocksworld(4, &bw::FeatureChoice::Default)?;
                let problems = bw::comparison_problems(
                    &space,
                    4,
                    bw::COMPARISON_OBSERVER,
                    &bw::COMPARISON_COSTS,
                    bw::COMPARISON_SEED,
                    bw::COMPARISON_ZETA,
                )?;
                let prior =
                    bw::observer_prior(&space, bw::COMPARISON_OBSERVER, bw::COMPARISON_PRIOR_MASS)?;
                Ok(Domain {
                    space,
                    problems,
                    prior: Some(prior),
                })
            }
            BuiltinDomain::Taxi => {
                let (space, problems) = taxi::build_taxi(&taxi::TaxiGrid::default())?;
                let prior = taxi::light_biased_prior(taxi::DEFAULT_LIGHT_PRIOR)?;
                Ok(Domain {
                    space,
                    problems,
                    prior: Some(prior),
                })
            }
        }
    }
}

impl FromStr for BuiltinDomain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BuiltinDomain::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown builtin domain `{s}`")))
    }
}

/// A shipped domain by name, or a domain file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainSelector {
    Builtin(BuiltinDomain),
    File(PathBuf),
}

impl DomainSelector {
    /// The domain file text, read once so that hashing and parsing agree.
    pub fn source(&self) -> Result<String> {
        match self {
            DomainSelector::Builtin(b) => Ok(b.source().to_string()),
            DomainSelector::File(path) => std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidParameter(format!("cannot read {}: {e}", path.display()))
            }),
        }
    }

    pub fn builtin(&self) -> Option<BuiltinDomain> {
        match self {
            DomainSelector::Builtin(b) => Some(*b),
            DomainSelector::File(_) => None,
        }
    }
}

impl FromStr for DomainSelector {
    type Err = Error;

    /// Builtin names win over files of the same name.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.parse::<BuiltinDomain>() {
            Ok(b) => DomainSelector::Builtin(b),
            Err(_) => DomainSelector::File(PathBuf::from(s)),
        })
    }
}

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}
fn default_zeta() -> Cost {
    DEFAULT_ZETA
}
fn default_beta() -> f64 {
    DEFAULT_BETA
}
fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}
fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}
fn default_max_plans() -> usize {
    DEFAULT_MAX_PLANS
}
fn default_noise_levels() -> Vec<f64> {
    vec![0.0]
}
fn default_seeds() -> Vec<u64> {
    vec![0]
}
fn default_true() -> bool {
    true
}
fn default_objective() -> Objective {
    Objective::ActiveExp
}

/// Everything an experiment run depends on. Omitted keys take the library
/// defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub domain: DomainSelector,
    /// Problem indices to run, in order; all problems when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problems: Option<Vec<usize>>,
    #[serde(default = "default_zeta")]
    pub zeta: Cost,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_max_plans")]
    pub max_plans: usize,
    #[serde(default = "default_noise_levels")]
    pub noise_levels: Vec<f64>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Start each problem from the previous problem's final belief.
    #[serde(default = "default_true")]
    pub carry_belief: bool,
    /// The robot's plan selector in convergence and noise runs.
    #[serde(default = "default_objective")]
    pub objective: Objective,
}

/// Belief transition weight of the convergence and noise presets.
///
/// Each update mixes in a fraction `α` of the evidence and keeps `1 − α`
/// of the old belief, so uninformative steps drift back toward uniform. A
/// small `α` lets rare informative steps accumulate across problems.
pub const CONVERGENCE_ALPHA: f64 = 0.02;

/// Noise levels and seed count of the noise preset.
pub const NOISE_LEVELS: [f64; 5] = [0.0, 0.1, 0.2, 0.3, 0.4];
pub const NOISE_SEEDS: u64 = 20;

/// Comparison parameters on Blocksworld. Extra cost there buys small
/// explicability gains, so cost is weighted lightly.
pub const COMPARISON_ALPHA: f64 = 0.2;
pub const COMPARISON_GAMMA: f64 = 0.01;

/// Taxi comparison parameters: sharper rationality and faster belief
/// updates than the defaults, so the two traffic models are told apart
/// within a four-pickup schedule.
pub const TAXI_ZETA: Cost = Cost::new_const(5, 4);
pub const TAXI_BETA: f64 = 4.0;
pub const TAXI_ALPHA: f64 = 0.2;

impl ExperimentConfig {
    pub fn new(domain: DomainSelector) -> Self {
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            domain,
            problems: None,
            zeta: DEFAULT_ZETA,
            beta: DEFAULT_BETA,
            alpha: DEFAULT_ALPHA,
            gamma: DEFAULT_GAMMA,
            max_plans: DEFAULT_MAX_PLANS,
            noise_levels: default_noise_levels(),
            seeds: default_seeds(),
            carry_belief: true,
            objective: Objective::ActiveExp,
        }
    }

    /// The shipped setup of an experiment kind on a builtin domain. `None`
    /// picks the kind's usual domain.
    pub fn preset(kind: ExperimentKind, domain: Option<BuiltinDomain>) -> Self {
        let domain = domain.unwrap_or(match kind {
            ExperimentKind::Comparison => BuiltinDomain::BlocksworldComparison,
            _ => BuiltinDomain::Blocksworld,
        });
        let mut config = ExperimentConfig::new(DomainSelector::Builtin(domain));
        match domain {
            BuiltinDomain::Taxi => {
                config.zeta = TAXI_ZETA;
                config.beta = TAXI_BETA;
                config.alpha = TAXI_ALPHA;
            }
            BuiltinDomain::BlocksworldComparison if kind == ExperimentKind::Comparison => {
                config.zeta = COMPARISON_ZETA;
                config.alpha = COMPARISON_ALPHA;
                config.gamma = COMPARISON_GAMMA;
            }
            _ => {
                config.zeta = EXPERIMENT_ZETA;
                config.alpha = CONVERGENCE_ALPHA;
            }
        }
        if kind == ExperimentKind::Noise {
            config.noise_levels = NOISE_LEVELS.to_vec();
            config.seeds = (0..NOISE_SEEDS).collect();
        }
        config
    }

    pub fn params(&self) -> InferenceParams {
        InferenceParams {
            zeta: self.zeta,
            beta: self.beta,
            alpha: self.alpha,
            max_plans: self.max_plans,
        }
    }

    pub fn synthesis(&self) -> SynthesisConfig {
        SynthesisConfig {
            gamma: self.gamma,
            params: self.params(),
            objective: self.objective,
        }
    }

    /// Range checks; run before any computation.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        self.synthesis().validate()?;
        if self.noise_levels.is_empty() {
            return Err(Error::InvalidParameter("noise_levels is empty".into()));
        }
        for level in &self.noise_levels {
            super::noise::NoiseModel::new(*level, 0)?;
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidParameter("seeds is empty".into()));
        }
        if matches!(&self.problems, Some(p) if p.is_empty()) {
            return Err(Error::InvalidParameter("problem list is empty".into()));
        }
        Ok(())
    }

    /// Hex SHA-256 prefix over this config and the domain file text.
    pub fn hash(&self, domain_source: &str) -> Result<String> {
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_string(self)?.as_bytes());
        hasher.update([0u8]);
        hasher.update(domain_source.as_bytes());
        Ok(hex::encode(hasher.finalize())[..12].to_string())
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}
