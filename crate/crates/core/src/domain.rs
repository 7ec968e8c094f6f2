//! Ground STRIPS models: fluents, actions, states and plan validation.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::planner::Plan;

/// A set of fluents, stored as a bitset over the owning model's fluent indices.
///
/// Used both for world states and for precondition/effect/goal sets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FluentSet {
    words: SmallVec<[u64; 2]>,
}

/// A world state: the set of fluents that are true.
pub type State = FluentSet;

impl FluentSet {
    pub fn empty(n_fluents: usize) -> Self {
        FluentSet {
            words: SmallVec::from_elem(0, n_fluents.div_ceil(64).max(1)),
        }
    }

    pub fn from_indices(n_fluents: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = FluentSet::empty(n_fluents);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn contains(&self, index: usize) -> bool {
        self.words
            .get(index / 64)
            .is_some_and(|w| w & (1u64 << (index % 64)) != 0)
    }

    pub fn insert(&mut self, index: usize) {
        self.words[index / 64] |= 1u64 << (index % 64);
    }

    pub fn remove(&mut self, index: usize) {
        self.words[index / 64] &= !(1u64 << (index % 64));
    }

    pub fn is_superset(&self, other: &FluentSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == *b)
    }

    pub fn is_disjoint(&self, other: &FluentSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `(self \ del) ∪ add`
    pub fn progress(&self, add: &FluentSet, del: &FluentSet) -> FluentSet {
        let words = self
            .words
            .iter()
            .zip(add.words.iter().zip(del.words.iter()))
            .map(|(s, (a, d))| (s & !d) | a)
            .collect();
        FluentSet { words }
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }
}

impl fmt::Debug for FluentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

/// Name-level description of a ground action, as found in domain files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub id: String,
    #[serde(default)]
    pub pre: Vec<String>,
    #[serde(default)]
    pub add: Vec<String>,
    #[serde(default)]
    pub del: Vec<String>,
    pub cost: Cost,
}

impl ActionSpec {
    pub fn new(id: impl Into<String>, cost: impl Into<Cost>) -> Self {
        ActionSpec {
            id: id.into(),
            pre: Vec::new(),
            add: Vec::new(),
            del: Vec::new(),
            cost: cost.into(),
        }
    }

    pub fn pre<S: Into<String>>(mut self, fluents: impl IntoIterator<Item = S>) -> Self {
        self.pre.extend(fluents.into_iter().map(Into::into));
        self
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add<S: Into<String>>(mut self, fluents: impl IntoIterator<Item = S>) -> Self {
        self.add.extend(fluents.into_iter().map(Into::into));
        self
    }

    pub fn del<S: Into<String>>(mut self, fluents: impl IntoIterator<Item = S>) -> Self {
        self.del.extend(fluents.into_iter().map(Into::into));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundAction {
    pub id: String,
    pub pre: FluentSet,
    pub add: FluentSet,
    pub del: FluentSet,
    pub cost: Cost,
}

/// The fluent vocabulary shared by every model of a model space.
#[derive(Debug, PartialEq, Eq)]
pub struct Fluents {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Fluents {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateId {
                    kind: "fluent",
                    id: name.clone(),
                });
            }
        }
        Ok(Fluents { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownFluent(name.to_string()))
    }

    pub fn set<S: AsRef<str>>(&self, names: impl IntoIterator<Item = S>) -> Result<FluentSet> {
        let mut set = FluentSet::empty(self.len());
        for name in names {
            set.insert(self.index_of(name.as_ref())?);
        }
        Ok(set)
    }

    pub fn names_of(&self, set: &FluentSet) -> Vec<String> {
        set.indices().map(|i| self.names[i].clone()).collect()
    }
}

/// Initial state and conjunctive positive goal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanningProblem {
    pub initial: State,
    pub goal: FluentSet,
}

/// Name-level problem description, as found in domain files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub initial: Vec<String>,
    pub goal: Vec<String>,
}

impl PlanningProblem {
    pub fn from_spec(fluents: &Fluents, spec: &ProblemSpec) -> Result<Self> {
        Ok(PlanningProblem {
            initial: fluents.set(&spec.initial)?,
            goal: fluents.set(&spec.goal)?,
        })
    }

    pub fn to_spec(&self, fluents: &Fluents) -> ProblemSpec {
        ProblemSpec {
            initial: fluents.names_of(&self.initial),
            goal: fluents.names_of(&self.goal),
        }
    }

    /// Same goal, different starting state.
    pub fn from_state(&self, state: State) -> Self {
        PlanningProblem {
            initial: state,
            goal: self.goal.clone(),
        }
    }

    pub fn is_goal(&self, state: &State) -> bool {
        state.is_superset(&self.goal)
    }
}

/// One point of the model space: a fluent vocabulary plus ground actions.
///
/// Actions are kept sorted by id; every iteration over actions, and therefore
/// every tie-break in search, follows that order.
#[derive(Debug, Clone)]
pub struct DomainModel {
    label: String,
    fluents: Arc<Fluents>,
    actions: Vec<GroundAction>,
    action_index: HashMap<String, usize>,
}

impl PartialEq for DomainModel {
    fn eq(&self, other: &Self) -> bool {
        self.fluents == other.fluents && self.actions == other.actions
    }
}

impl DomainModel {
    pub fn new(
        label: impl Into<String>,
        fluents: Arc<Fluents>,
        actions: impl IntoIterator<Item = ActionSpec>,
    ) -> Result<Self> {
        let actions = actions
            .into_iter()
            .map(|spec| ground(&fluents, &spec))
            .collect::<Result<Vec<_>>>()?;
        Self::from_ground(label.into(), fluents, actions)
    }

    pub(crate) fn from_ground(
        label: String,
        fluents: Arc<Fluents>,
        mut actions: Vec<GroundAction>,
    ) -> Result<Self> {
        actions.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = actions.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::DuplicateId {
                kind: "action",
                id: w[0].id.clone(),
            });
        }
        let action_index = actions
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.clone(), i))
            .collect();
        Ok(DomainModel {
            label,
            fluents,
            actions,
            action_index,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn fluents(&self) -> &Arc<Fluents> {
        &self.fluents
    }

    pub fn actions(&self) -> &[GroundAction] {
        &self.actions
    }

    pub fn action(&self, id: &str) -> Result<&GroundAction> {
        self.action_index
            .get(id)
            .map(|&i| &self.actions[i])
            .ok_or_else(|| Error::UnknownAction(id.to_string()))
    }

    pub fn has_action(&self, id: &str) -> bool {
        self.action_index.contains_key(id)
    }

    pub fn action_specs(&self) -> Vec<ActionSpec> {
        self.actions
            .iter()
            .map(|a| ActionSpec {
                id: a.id.clone(),
                pre: self.fluents.names_of(&a.pre),
                add: self.fluents.names_of(&a.add),
                del: self.fluents.names_of(&a.del),
                cost: a.cost,
            })
            .collect()
    }

    pub fn empty_state(&self) -> State {
        FluentSet::empty(self.fluents.len())
    }

    pub fn state<S: AsRef<str>>(&self, names: impl IntoIterator<Item = S>) -> Result<State> {
        self.fluents.set(names)
    }

    pub fn is_applicable(&self, state: &State, action_id: &str) -> Result<bool> {
        Ok(state.is_superset(&self.action(action_id)?.pre))
    }

    pub fn apply_action(&self, state: &State, action_id: &str) -> Result<State> {
        let action = self.action(action_id)?;
        if let Some(missing) = action.pre.indices().find(|&i| !state.contains(i)) {
            return Err(Error::PreconditionViolated {
                action: action_id.to_string(),
                fluent: self.fluents.names()[missing].clone(),
            });
        }
        Ok(state.progress(&action.add, &action.del))
    }

    /// Indices of applicable actions, in id order.
    pub(crate) fn applicable<'a>(&'a self, state: &'a State) -> impl Iterator<Item = usize> + 'a {
        self.actions
            .iter()
            .enumerate()
            .filter(move |(_, a)| state.is_superset(&a.pre))
            .map(|(i, _)| i)
    }

    pub(crate) fn successor(&self, state: &State, action: usize) -> State {
        let a = &self.actions[action];
        state.progress(&a.add, &a.del)
    }

    pub fn applicable_ids(&self, state: &State) -> Vec<&str> {
        self.applicable(state)
            .map(|i| self.actions[i].id.as_str())
            .collect()
    }

    pub fn plan_cost<S: AsRef<str>>(&self, actions: &[S]) -> Result<Cost> {
        actions
            .iter()
            .map(|id| self.action(id.as_ref()).map(|a| a.cost))
            .sum()
    }

    /// Executes `plan` from the problem's initial state. Returns false on any
    /// inapplicable or unknown action, an unmet goal, or a cost mismatch.
    pub fn validate_plan(&self, problem: &PlanningProblem, plan: &Plan) -> bool {
        let mut state = problem.initial.clone();
        let mut cost = Cost::ZERO;
        for id in &plan.actions {
            match self.apply_action(&state, id) {
                Ok(next) => state = next,
                Err(_) => return false,
            }
            cost = cost + self.action(id).map(|a| a.cost).unwrap_or_default();
        }
        problem.is_goal(&state) && cost == plan.cost
    }

    /// State sequence visited by executing `actions` from `initial`.
    pub fn trajectory<S: AsRef<str>>(&self, initial: &State, actions: &[S]) -> Result<Vec<State>> {
        let mut states = Vec::with_capacity(actions.len() + 1);
        states.push(initial.clone());
        for id in actions {
            let next = self.apply_action(states.last().unwrap(), id.as_ref())?;
            states.push(next);
        }
        Ok(states)
    }
}

pub(crate) fn ground(fluents: &Fluents, spec: &ActionSpec) -> Result<GroundAction> {
    if spec.cost.is_negative() {
        return Err(Error::NegativeCost(spec.id.clone()));
    }
    let add = fluents.set(&spec.add)?;
    let del = fluents.set(&spec.del)?;
    if let Some(both) = add.indices().find(|&i| del.contains(i)) {
        return Err(Error::ConflictingEffects {
            action: spec.id.clone(),
            fluent: fluents.names()[both].clone(),
        });
    }
    Ok(GroundAction {
        id: spec.id.clone(),
        pre: fluents.set(&spec.pre)?,
        add,
        del,
        cost: spec.cost,
    })
}
