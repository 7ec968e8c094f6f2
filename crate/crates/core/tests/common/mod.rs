//! Independent reference implementations used by the integration tests.
//!
//! They work from the action specs alone, with their own state encoding, so
//! they share no search code with the library.

#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use active_explicable::{Cost, DomainModel, PlanningProblem};

/// Fluent sets as bitmasks over the model's fluent list.
pub struct Bits {
    index: HashMap<String, usize>,
    actions: Vec<(String, u128, u128, u128, Cost)>,
}

impl Bits {
    pub fn new(model: &DomainModel) -> Self {
        let names = model.fluents().names().to_vec();
        assert!(names.len() <= 128, "oracle handles at most 128 fluents");
        let index: HashMap<String, usize> = names
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect();
        let mask = |fs: &[String]| fs.iter().fold(0u128, |m, f| m | 1 << index[f]);
        let mut actions: Vec<_> = model
            .action_specs()
            .into_iter()
            .map(|a| {
                (
                    a.id.clone(),
                    mask(&a.pre),
                    mask(&a.add),
                    mask(&a.del),
                    a.cost,
                )
            })
            .collect();
        actions.sort_by(|a, b| a.0.cmp(&b.0));
        Bits { index, actions }
    }

    pub fn encode(&self, model: &DomainModel, state: &active_explicable::State) -> u128 {
        model
            .fluents()
            .names_of(state)
            .iter()
            .fold(0u128, |m, f| m | 1 << self.index[f])
    }

    /// Applicable actions in lexicographic id order.
    pub fn successors(&self, s: u128) -> impl Iterator<Item = (&str, u128, Cost)> + '_ {
        self.actions
            .iter()
            .filter(move |a| s & a.1 == a.1)
            .map(move |a| (a.0.as_str(), (s & !a.3) | a.2, a.4))
    }
}

/// Uniform-cost search minimum, `None` when unsolvable.
pub fn brute_optimal_cost(model: &DomainModel, problem: &PlanningProblem) -> Option<Cost> {
    let bits = Bits::new(model);
    let start = bits.encode(model, &problem.initial);
    let goal = bits.encode(model, &problem.goal);
    let mut best: HashMap<u128, Cost> = HashMap::from([(start, Cost::ZERO)]);
    let mut heap = BinaryHeap::from([Reverse((Cost::ZERO, start))]);
    while let Some(Reverse((g, s))) = heap.pop() {
        if s & goal == goal {
            return Some(g);
        }
        if best.get(&s).is_some_and(|b| *b < g) {
            continue;
        }
        for (_, t, c) in bits.successors(s) {
            let ng = g + c;
            if best.get(&t).is_none_or(|b| ng < *b) {
                best.insert(t, ng);
                heap.push(Reverse((ng, t)));
            }
        }
    }
    None
}

/// Every plan that ends at its first goal state, never revisits a state,
/// and costs at most `bound`, in lexicographic order. No heuristic pruning.
pub fn brute_candidates(
    model: &DomainModel,
    problem: &PlanningProblem,
    bound: Cost,
) -> Vec<(Vec<String>, Cost)> {
    let bits = Bits::new(model);
    let start = bits.encode(model, &problem.initial);
    let goal = bits.encode(model, &problem.goal);
    let mut out = Vec::new();
    let mut path = Vec::new();
    let mut seen = vec![start];
    dfs(
        &bits,
        goal,
        bound,
        start,
        Cost::ZERO,
        &mut path,
        &mut seen,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    bits: &Bits,
    goal: u128,
    bound: Cost,
    s: u128,
    g: Cost,
    path: &mut Vec<String>,
    seen: &mut Vec<u128>,
    out: &mut Vec<(Vec<String>, Cost)>,
) {
    if s & goal == goal {
        out.push((path.clone(), g));
        return;
    }
    for (id, t, c) in bits.successors(s) {
        if g + c > bound || seen.contains(&t) {
            continue;
        }
        path.push(id.to_string());
        seen.push(t);
        dfs(bits, goal, bound, t, g + c, path, seen, out);
        seen.pop();
        path.pop();
    }
}

/// Number of Blocksworld states with `n` labelled blocks: towers with the
/// hand empty, plus one held block over towers of the rest.
pub fn blocksworld_state_count(n: usize) -> u64 {
    // arrangements of n labelled blocks into unordered sets of ordered towers
    // (Lah-number sums): a(n) = (2n-1)·a(n-1) - (n-1)(n-2)·a(n-2)
    fn towers(n: usize) -> u64 {
        let mut a: BTreeMap<usize, i64> = BTreeMap::from([(0, 1), (1, 1)]);
        for k in 2..=n {
            let v =
                (2 * k as i64 - 1) * a[&(k - 1)] - (k as i64 - 1) * (k as i64 - 2) * a[&(k - 2)];
            a.insert(k, v);
        }
        a[&n] as u64
    }
    towers(n) + n as u64 * towers(n - 1)
}

/// All states reachable from `initial` (breadth-first, own encoding).
pub fn reachable_states(model: &DomainModel, initial: &active_explicable::State) -> usize {
    let bits = Bits::new(model);
    let start = bits.encode(model, initial);
    let mut seen = std::collections::HashSet::from([start]);
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for (_, t, _) in bits.successors(s) {
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    seen.len()
}

/// Boltzmann weights `exp(-β·(c - min))`, normalized.
pub fn boltzmann(costs: &[f64], beta: f64) -> Vec<f64> {
    let min = costs.iter().cloned().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = costs.iter().map(|c| (-beta * (c - min)).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}
