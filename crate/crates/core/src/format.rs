//! JSON domain files.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "fluents": ["p", "q"],
//!   "actions": [{"id": "a", "pre": ["p"], "add": ["q"], "del": [], "cost": 1}],
//!   "features": [{"id": "f", "kind": "scale_cost", "target": "a", "payload": 2}],
//!   "true_mask": 1,
//!   "problems": [{"initial": ["p"], "goal": ["q"]}],
//!   "prior": [0.5, 0.5]
//! }
//! ```
//!
//! `schema_version`, `features`, `true_mask` and `prior` are optional.
//! Costs are integers, decimals, or `"p/q"` strings. Unknown keys are
//! rejected.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::domain::{ActionSpec, DomainModel, Fluents, PlanningProblem, ProblemSpec};
use crate::error::{Error, Result};
use crate::explicability::Belief;
use crate::model_space::{FeatureSpec, ModelFeature, ModelSpace};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub fluents: Vec<String>,
    pub actions: Vec<ActionSpec>,
    #[serde(default)]
    pub features: Vec<FeatureSpec>,
    #[serde(default)]
    pub true_mask: usize,
    pub problems: Vec<ProblemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<Vec<f64>>,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

/// A model space with its problems and optional observer prior.
#[derive(Debug, Clone)]
pub struct Domain {
    pub space: ModelSpace,
    pub problems: Vec<PlanningProblem>,
    pub prior: Option<Belief>,
}

impl Domain {
    pub fn prior_or_uniform(&self) -> Belief {
        self.prior
            .clone()
            .unwrap_or_else(|| Belief::uniform(self.space.len()))
    }

    pub fn problem(&self, index: usize) -> Result<&PlanningProblem> {
        self.problems.get(index).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "problem index {index} out of range ({} problems)",
                self.problems.len()
            ))
        })
    }

    pub fn to_file(&self) -> DomainFile {
        let base = self.space.base();
        DomainFile {
            schema_version: SCHEMA_VERSION,
            fluents: base.fluents().names().to_vec(),
            actions: base.action_specs(),
            features: self
                .space
                .features()
                .iter()
                .cloned()
                .map(FeatureSpec::from)
                .collect(),
            true_mask: self.space.true_mask(),
            problems: self
                .problems
                .iter()
                .map(|p| p.to_spec(base.fluents()))
                .collect(),
            prior: self.prior.as_ref().map(|b| b.weights().to_vec()),
        }
    }
}

impl DomainFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Domain> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::parse(&text)?.into_domain()
    }

    pub fn into_domain(self) -> Result<Domain> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        let fluents = Arc::new(Fluents::new(self.fluents)?);
        let base = DomainModel::new("base", fluents.clone(), self.actions)?;
        let features = self
            .features
            .into_iter()
            .map(ModelFeature::try_from)
            .collect::<Result<Vec<_>>>()?;
        let space = ModelSpace::build(base, features, self.true_mask)?;
        let problems = self
            .problems
            .iter()
            .map(|p| PlanningProblem::from_spec(&fluents, p))
            .collect::<Result<Vec<_>>>()?;
        let prior = self.prior.map(Belief::from_weights).transpose()?;
        if let Some(p) = &prior {
            if p.len() != space.len() {
                return Err(Error::Format(format!(
                    "prior has {} entries but the model space has {}",
                    p.len(),
                    space.len()
                )));
            }
        }
        Ok(Domain {
            space,
            problems,
            prior,
        })
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "fluents": ["p", "q"],
        "actions": [
            {"id": "a", "add": ["p"], "cost": 1},
            {"id": "b", "pre": ["p"], "add": ["q"], "cost": "3/2"}
        ],
        "features": [{"id": "dear-b", "kind": "scale_cost", "target": "b", "payload": 2}],
        "true_mask": 1,
        "problems": [{"initial": [], "goal": ["q"]}]
    }"#;

    #[test]
    fn loads_a_small_domain() {
        let domain = DomainFile::parse(SMALL).unwrap().into_domain().unwrap();
        assert_eq!(domain.space.len(), 2);
        assert_eq!(domain.space.true_mask(), 1);
        assert_eq!(
            domain.space.true_model().action("b").unwrap().cost,
            crate::cost::Cost::integer(3)
        );
        assert_eq!(domain.problems.len(), 1);
        assert!(domain.prior.is_none());
    }

    #[test]
    fn rejects_unknown_keys_with_a_position() {
        let text = SMALL.replace("\"true_mask\"", "\"bogus\": 0, \"true_mask\"");
        let err = DomainFile::parse(&text).unwrap_err().to_string();
        assert!(err.contains("unknown field"), "{err}");
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn rejects_dangling_problem_fluents_and_bad_priors() {
        let text = SMALL.replace(r#""goal": ["q"]"#, r#""goal": ["zz"]"#);
        assert!(DomainFile::parse(&text).unwrap().into_domain().is_err());
        let text = SMALL.replace(r#""true_mask": 1,"#, r#""true_mask": 1, "prior": [1.0],"#);
        assert!(DomainFile::parse(&text).unwrap().into_domain().is_err());
    }

    #[test]
    fn file_roundtrip_preserves_the_space() {
        let domain = DomainFile::parse(SMALL).unwrap().into_domain().unwrap();
        let text = domain.to_file().to_json_pretty().unwrap();
        let again = DomainFile::parse(&text).unwrap().into_domain().unwrap();
        for mask in 0..2 {
            assert_eq!(again.space.model(mask), domain.space.model(mask));
        }
        assert_eq!(again.problems, domain.problems);
    }
}
