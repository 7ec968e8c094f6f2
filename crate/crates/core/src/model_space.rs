//! Feature-induced model spaces.
//!
//! `k` binary features over a base model induce `2^k` models. The model at
//! bitmask `b` is the base with every feature whose bit is set in `b` applied,
//! in feature-list order.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::domain::{ground, ActionSpec, DomainModel, GroundAction};
use crate::error::{Error, Result};

/// Largest feature count accepted by [`ModelSpace::build`].
pub const DEFAULT_MAX_FEATURES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeatureEffect {
    RemoveAction,
    /// The target names the new action.
    AddAction(ActionSpec),
    ScaleCost(Cost),
    SetCost(Cost),
    AddPrecondition(String),
    RemovePrecondition(String),
}

/// One binary difference between models.
///
/// `target` is an action id, or a prefix ending in `*` that selects every
/// action whose id starts with it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FeatureSpec", into = "FeatureSpec")]
pub struct ModelFeature {
    pub id: String,
    pub target: String,
    pub effect: FeatureEffect,
}

impl ModelFeature {
    pub fn new(id: impl Into<String>, target: impl Into<String>, effect: FeatureEffect) -> Self {
        ModelFeature {
            id: id.into(),
            target: target.into(),
            effect,
        }
    }

    fn matches(&self, action_id: &str) -> bool {
        match self.target.strip_suffix('*') {
            Some(prefix) => action_id.starts_with(prefix),
            None => action_id == self.target,
        }
    }

    fn invalid(&self, reason: impl Into<String>) -> Error {
        Error::InvalidFeature {
            feature: self.id.clone(),
            reason: reason.into(),
        }
    }

    /// Applies the transformation. Targets that match nothing leave the model
    /// unchanged (an earlier feature may have removed them).
    pub fn apply(&self, model: &DomainModel, label: impl Into<String>) -> Result<DomainModel> {
        let fluents = model.fluents().clone();
        let mut actions: Vec<GroundAction> = model.actions().to_vec();
        match &self.effect {
            FeatureEffect::RemoveAction => actions.retain(|a| !self.matches(&a.id)),
            FeatureEffect::AddAction(spec) => {
                if model.has_action(&spec.id) {
                    return Err(self.invalid(format!("action `{}` already exists", spec.id)));
                }
                actions.push(ground(&fluents, spec).map_err(|e| self.invalid(e.to_string()))?);
            }
            FeatureEffect::ScaleCost(factor) => {
                for a in actions.iter_mut().filter(|a| self.matches(&a.id)) {
                    a.cost = a.cost * *factor;
                }
            }
            FeatureEffect::SetCost(cost) => {
                for a in actions.iter_mut().filter(|a| self.matches(&a.id)) {
                    a.cost = *cost;
                }
            }
            FeatureEffect::AddPrecondition(fluent) | FeatureEffect::RemovePrecondition(fluent) => {
                let index = fluents
                    .index_of(fluent)
                    .map_err(|e| self.invalid(e.to_string()))?;
                let add = matches!(self.effect, FeatureEffect::AddPrecondition(_));
                for a in actions.iter_mut().filter(|a| self.matches(&a.id)) {
                    if add {
                        a.pre.insert(index);
                    } else {
                        a.pre.remove(index);
                    }
                }
            }
        }
        DomainModel::from_ground(label.into(), fluents, actions)
    }

    fn check_static(&self, base: &DomainModel, added_before: &[&str]) -> Result<()> {
        match &self.effect {
            FeatureEffect::AddAction(spec) => {
                if spec.id != self.target {
                    return Err(self.invalid("add_action target must equal the new action id"));
                }
                if self.target.ends_with('*') {
                    return Err(self.invalid("add_action target cannot be a wildcard"));
                }
                ground(base.fluents(), spec).map_err(|e| self.invalid(e.to_string()))?;
            }
            FeatureEffect::ScaleCost(c) | FeatureEffect::SetCost(c) if c.is_negative() => {
                return Err(self.invalid("cost factor must be non-negative"));
            }
            FeatureEffect::AddPrecondition(f) | FeatureEffect::RemovePrecondition(f) => {
                base.fluents()
                    .index_of(f)
                    .map_err(|e| self.invalid(e.to_string()))?;
            }
            _ => {}
        }
        if !matches!(self.effect, FeatureEffect::AddAction(_)) {
            let known = base.actions().iter().any(|a| self.matches(&a.id))
                || added_before.iter().any(|id| self.matches(id));
            if !known {
                return Err(self.invalid(format!("target `{}` matches no action", self.target)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    RemoveAction,
    AddAction,
    ScaleCost,
    SetCost,
    AddPrecondition,
    RemovePrecondition,
}

/// File-level feature record: `{id, kind, target, payload}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureSpec {
    pub id: String,
    pub kind: FeatureKind,
    pub target: String,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub payload: serde_json::Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AddedAction {
    #[serde(default)]
    pre: Vec<String>,
    #[serde(default)]
    add: Vec<String>,
    #[serde(default)]
    del: Vec<String>,
    cost: Cost,
}

impl TryFrom<FeatureSpec> for ModelFeature {
    type Error = Error;

    fn try_from(spec: FeatureSpec) -> Result<Self> {
        let bad = |reason: String| Error::InvalidFeature {
            feature: spec.id.clone(),
            reason,
        };
        let payload = spec.payload.clone();
        let effect = match spec.kind {
            FeatureKind::RemoveAction => FeatureEffect::RemoveAction,
            FeatureKind::AddAction => {
                let a: AddedAction = serde_json::from_value(payload)
                    .map_err(|e| bad(format!("add_action payload: {e}")))?;
                FeatureEffect::AddAction(ActionSpec {
                    id: spec.target.clone(),
                    pre: a.pre,
                    add: a.add,
                    del: a.del,
                    cost: a.cost,
                })
            }
            FeatureKind::ScaleCost | FeatureKind::SetCost => {
                let c: Cost = serde_json::from_value(payload)
                    .map_err(|e| bad(format!("cost payload: {e}")))?;
                if spec.kind == FeatureKind::ScaleCost {
                    FeatureEffect::ScaleCost(c)
                } else {
                    FeatureEffect::SetCost(c)
                }
            }
            FeatureKind::AddPrecondition | FeatureKind::RemovePrecondition => {
                let f = payload
                    .as_str()
                    .ok_or_else(|| bad("precondition payload must be a fluent name".into()))?
                    .to_string();
                if spec.kind == FeatureKind::AddPrecondition {
                    FeatureEffect::AddPrecondition(f)
                } else {
                    FeatureEffect::RemovePrecondition(f)
                }
            }
        };
        Ok(ModelFeature {
            id: spec.id,
            target: spec.target,
            effect,
        })
    }
}

impl From<ModelFeature> for FeatureSpec {
    fn from(f: ModelFeature) -> Self {
        let (kind, payload) = match f.effect {
            FeatureEffect::RemoveAction => (FeatureKind::RemoveAction, serde_json::Value::Null),
            FeatureEffect::AddAction(a) => (
                FeatureKind::AddAction,
                serde_json::json!({ "pre": a.pre, "add": a.add, "del": a.del, "cost": a.cost }),
            ),
            FeatureEffect::ScaleCost(c) => (FeatureKind::ScaleCost, serde_json::json!(c)),
            FeatureEffect::SetCost(c) => (FeatureKind::SetCost, serde_json::json!(c)),
            FeatureEffect::AddPrecondition(p) => (FeatureKind::AddPrecondition, p.into()),
            FeatureEffect::RemovePrecondition(p) => (FeatureKind::RemovePrecondition, p.into()),
        };
        FeatureSpec {
            id: f.id,
            kind,
            target: f.target,
            payload,
        }
    }
}

/// The `2^k` models induced by `k` features over a base model.
#[derive(Debug, Clone)]
pub struct ModelSpace {
    base: DomainModel,
    features: Vec<ModelFeature>,
    models: Vec<Arc<DomainModel>>,
    true_mask: usize,
}

impl ModelSpace {
    pub fn build(base: DomainModel, features: Vec<ModelFeature>, true_mask: usize) -> Result<Self> {
        Self::build_capped(base, features, true_mask, DEFAULT_MAX_FEATURES)
    }

    pub fn build_capped(
        base: DomainModel,
        features: Vec<ModelFeature>,
        true_mask: usize,
        max_features: usize,
    ) -> Result<Self> {
        let k = features.len();
        if k > max_features {
            return Err(Error::TooLarge(format!(
                "{k} features exceeds the cap of {max_features}"
            )));
        }
        let size = 1usize << k;
        if true_mask >= size {
            return Err(Error::InvalidParameter(format!(
                "true mask {true_mask} outside a space of {size} models"
            )));
        }
        let mut added: Vec<&str> = Vec::new();
        for f in &features {
            f.check_static(&base, &added)?;
            if let FeatureEffect::AddAction(spec) = &f.effect {
                added.push(&spec.id);
            }
        }
        let models = (0..size)
            .map(|mask| {
                let mut model = base.clone();
                for (bit, f) in features.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        model = f.apply(&model, model.label().to_string())?;
                    }
                }
                DomainModel::from_ground(
                    mask_label(mask, k),
                    model.fluents().clone(),
                    model.actions().to_vec(),
                )
                .map(Arc::new)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModelSpace {
            base,
            features,
            models,
            true_mask,
        })
    }

    /// A space holding one model, which is also the true one.
    pub fn singleton(model: DomainModel) -> Self {
        let model = DomainModel::from_ground(
            mask_label(0, 0),
            model.fluents().clone(),
            model.actions().to_vec(),
        )
        .expect("a valid model stays valid when relabelled");
        ModelSpace {
            base: model.clone(),
            features: Vec::new(),
            models: vec![Arc::new(model)],
            true_mask: 0,
        }
    }

    pub fn base(&self) -> &DomainModel {
        &self.base
    }

    pub fn features(&self) -> &[ModelFeature] {
        &self.features
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn model(&self, mask: usize) -> &DomainModel {
        &self.models[mask]
    }

    pub fn models(&self) -> impl Iterator<Item = &DomainModel> {
        self.models.iter().map(|m| m.as_ref())
    }

    pub fn true_mask(&self) -> usize {
        self.true_mask
    }

    pub fn true_model(&self) -> &DomainModel {
        self.model(self.true_mask)
    }

    /// Same models, different ground truth.
    pub fn with_true_mask(&self, true_mask: usize) -> Result<Self> {
        if true_mask >= self.len() {
            return Err(Error::InvalidParameter(format!(
                "true mask {true_mask} outside a space of {} models",
                self.len()
            )));
        }
        Ok(ModelSpace {
            true_mask,
            ..self.clone()
        })
    }
}

fn mask_label(mask: usize, k: usize) -> String {
    if k == 0 {
        "m".to_string()
    } else {
        format!("m{mask:0k$b}")
    }
}
