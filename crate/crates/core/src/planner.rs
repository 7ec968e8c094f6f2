//! Optimal planning and enumeration of cost-bounded candidate plans.

use std::cmp::{Ordering, Reverse};
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::domain::{DomainModel, PlanningProblem, State};
use crate::error::{Error, Result};

/// Default cap on candidate plans per (model, problem).
pub const DEFAULT_MAX_PLANS: usize = 1000;
/// Default cap on distinct states a single search may expand.
pub const DEFAULT_EXPANSION_BUDGET: usize = 500_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Plan {
    pub actions: Vec<String>,
    pub cost: Cost,
}

impl Plan {
    pub fn new(actions: Vec<String>, cost: Cost) -> Self {
        Plan { actions, cost }
    }

    pub fn empty() -> Self {
        Plan::new(Vec::new(), Cost::ZERO)
    }

    /// Builds a plan, pricing it under `model`.
    pub fn priced<S: AsRef<str>>(model: &DomainModel, actions: &[S]) -> Result<Self> {
        Ok(Plan {
            cost: model.plan_cost(actions)?,
            actions: actions.iter().map(|a| a.as_ref().to_string()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn first(&self) -> Option<&str> {
        self.actions.first().map(String::as_str)
    }

    fn from_indices(model: &DomainModel, path: &[usize], cost: Cost) -> Self {
        Plan {
            actions: path
                .iter()
                .map(|&i| model.actions()[i].id.clone())
                .collect(),
            cost,
        }
    }
}

/// The candidate plan space of one model for one problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePlanSet {
    pub plans: Vec<Plan>,
    pub optimal_cost: Cost,
    pub zeta: Cost,
    pub truncated: bool,
}

impl CandidatePlanSet {
    pub fn len(&self) -> usize {
        self.plans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plans.is_empty()
    }

    pub fn bound(&self) -> Cost {
        self.zeta * self.optimal_cost
    }

    pub fn contains(&self, actions: &[String]) -> bool {
        self.plans.iter().any(|p| p.actions == actions)
    }
}

/// Search limits shared by the optimal planner and the enumerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Planner {
    pub expansion_budget: usize,
}

impl Default for Planner {
    fn default() -> Self {
        Planner {
            expansion_budget: DEFAULT_EXPANSION_BUDGET,
        }
    }
}

#[derive(PartialEq, Eq)]
struct Node {
    g: Cost,
    path: Vec<usize>,
    state: State,
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.g
            .cmp(&other.g)
            .then_with(|| self.path.cmp(&other.path))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Planner {
    /// Uniform-cost search with duplicate detection.
    ///
    /// Nodes are ordered by cost and then by action-id sequence, so the
    /// returned plan is the lexicographically least among the optimal ones.
    pub fn optimal_plan(&self, model: &DomainModel, problem: &PlanningProblem) -> Result<Plan> {
        let mut open = BinaryHeap::new();
        let mut best: HashMap<State, Cost> = HashMap::new();
        let mut expanded = 0usize;
        best.insert(problem.initial.clone(), Cost::ZERO);
        open.push(Reverse(Node {
            g: Cost::ZERO,
            path: Vec::new(),
            state: problem.initial.clone(),
        }));
        let mut closed = std::collections::HashSet::new();
        while let Some(Reverse(node)) = open.pop() {
            if !closed.insert(node.state.clone()) {
                continue;
            }
            if problem.is_goal(&node.state) {
                return Ok(Plan::from_indices(model, &node.path, node.g));
            }
            expanded += 1;
            if expanded > self.expansion_budget {
                return Err(Error::BudgetExceeded(self.expansion_budget));
            }
            for a in model.applicable(&node.state) {
                let next = model.successor(&node.state, a);
                if closed.contains(&next) {
                    continue;
                }
                let g = node.g + model.actions()[a].cost;
                match best.entry(next.clone()) {
                    Entry::Occupied(mut e) => {
                        if g > *e.get() {
                            continue;
                        }
                        e.insert(g);
                    }
                    Entry::Vacant(e) => {
                        e.insert(g);
                    }
                }
                let mut path = node.path.clone();
                path.push(a);
                open.push(Reverse(Node {
                    g,
                    path,
                    state: next,
                }));
            }
        }
        Err(Error::Unsolvable)
    }

    /// Exact cost-to-goal for every state reachable from the problem's
    /// initial state that can still reach the goal.
    pub fn cost_to_go(
        &self,
        model: &DomainModel,
        problem: &PlanningProblem,
    ) -> Result<HashMap<State, Cost>> {
        // forward reachability
        let mut ids: HashMap<State, usize> = HashMap::new();
        let mut states: Vec<State> = Vec::new();
        let mut reverse: Vec<Vec<(usize, Cost)>> = Vec::new();
        ids.insert(problem.initial.clone(), 0);
        states.push(problem.initial.clone());
        reverse.push(Vec::new());
        let mut cursor = 0;
        while cursor < states.len() {
            if cursor >= self.expansion_budget {
                return Err(Error::BudgetExceeded(self.expansion_budget));
            }
            let state = states[cursor].clone();
            if !problem.is_goal(&state) {
                for a in model.applicable(&state) {
                    let next = model.successor(&state, a);
                    let id = match ids.entry(next) {
                        Entry::Occupied(e) => *e.get(),
                        Entry::Vacant(e) => {
                            let id = states.len();
                            states.push(e.key().clone());
                            reverse.push(Vec::new());
                            e.insert(id);
                            id
                        }
                    };
                    reverse[id].push((cursor, model.actions()[a].cost));
                }
            }
            cursor += 1;
        }

        // backward Dijkstra from all goal states
        let mut dist: Vec<Option<Cost>> = vec![None; states.len()];
        let mut heap = BinaryHeap::new();
        for (id, s) in states.iter().enumerate() {
            if problem.is_goal(s) {
                dist[id] = Some(Cost::ZERO);
                heap.push(Reverse((Cost::ZERO, id)));
            }
        }
        while let Some(Reverse((d, id))) = heap.pop() {
            if dist[id].is_some_and(|best| d > best) {
                continue;
            }
            for &(pred, c) in &reverse[id] {
                let nd = d + c;
                if dist[pred].is_none_or(|cur| nd < cur) {
                    dist[pred] = Some(nd);
                    heap.push(Reverse((nd, pred)));
                }
            }
        }
        Ok(states
            .into_iter()
            .zip(dist)
            .filter_map(|(s, d)| d.map(|d| (s, d)))
            .collect())
    }

    /// Every acyclic plan with cost at most `zeta · c(π*)`, in lexicographic
    /// action-id order, up to `max_plans`.
    ///
    /// A plan ends at the first goal state it reaches and never revisits a
    /// state of its own trajectory. When the cap cuts the enumeration short
    /// the set is flagged as truncated and still contains an optimal plan.
    pub fn enumerate_candidate_plans(
        &self,
        model: &DomainModel,
        problem: &PlanningProblem,
        zeta: Cost,
        max_plans: usize,
    ) -> Result<CandidatePlanSet> {
        if zeta < Cost::ONE {
            return Err(Error::InvalidParameter(format!(
                "zeta must be >= 1, got {zeta}"
            )));
        }
        if max_plans == 0 {
            return Err(Error::InvalidParameter("max_plans must be positive".into()));
        }
        let h = self.cost_to_go(model, problem)?;
        let optimal_cost = *h.get(&problem.initial).ok_or(Error::Unsolvable)?;
        let bound = zeta * optimal_cost;

        let mut search = Dfs {
            model,
            problem,
            h: &h,
            bound,
            limit: max_plans + 1,
            path: Vec::new(),
            trail: vec![problem.initial.clone()],
            plans: Vec::new(),
        };
        search.run(&problem.initial, Cost::ZERO);
        let mut plans = search.plans;

        let truncated = plans.len() > max_plans;
        if truncated {
            plans.truncate(max_plans);
            if !plans.iter().any(|p| p.cost == optimal_cost) {
                let mut exact = Dfs {
                    model,
                    problem,
                    h: &h,
                    bound: optimal_cost,
                    limit: 1,
                    path: Vec::new(),
                    trail: vec![problem.initial.clone()],
                    plans: Vec::new(),
                };
                exact.run(&problem.initial, Cost::ZERO);
                plans.pop();
                plans.extend(exact.plans);
                plans.sort_by(|a, b| a.actions.cmp(&b.actions));
            }
        }
        Ok(CandidatePlanSet {
            plans,
            optimal_cost,
            zeta,
            truncated,
        })
    }
}

struct Dfs<'a> {
    model: &'a DomainModel,
    problem: &'a PlanningProblem,
    h: &'a HashMap<State, Cost>,
    bound: Cost,
    limit: usize,
    path: Vec<usize>,
    trail: Vec<State>,
    plans: Vec<Plan>,
}

impl Dfs<'_> {
    fn run(&mut self, state: &State, g: Cost) {
        if self.problem.is_goal(state) {
            self.plans
                .push(Plan::from_indices(self.model, &self.path, g));
            return;
        }
        let model = self.model;
        for a in model.applicable(state) {
            if self.plans.len() >= self.limit {
                return;
            }
            let next = model.successor(state, a);
            let g2 = g + model.actions()[a].cost;
            let Some(&rest) = self.h.get(&next) else {
                continue;
            };
            if g2 + rest > self.bound || self.trail.contains(&next) {
                continue;
            }
            self.path.push(a);
            self.trail.push(next.clone());
            self.run(&next, g2);
            self.trail.pop();
            self.path.pop();
        }
    }
}

pub fn optimal_plan(model: &DomainModel, problem: &PlanningProblem) -> Result<Plan> {
    Planner::default().optimal_plan(model, problem)
}

pub fn enumerate_candidate_plans(
    model: &DomainModel,
    problem: &PlanningProblem,
    zeta: Cost,
    max_plans: usize,
) -> Result<CandidatePlanSet> {
    Planner::default().enumerate_candidate_plans(model, problem, zeta, max_plans)
}
