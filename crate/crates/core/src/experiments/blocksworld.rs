//! Ground Blocksworld with a four-feature model space.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cost::Cost;
use crate::domain::{ActionSpec, DomainModel, Fluents, PlanningProblem, State};
use crate::error::{Error, Result};
use crate::model_space::{FeatureEffect, ModelFeature, ModelSpace};
use crate::planner::Planner;

use super::seeded_rng;

pub const MIN_BLOCKS: usize = 3;
pub const MAX_BLOCKS: usize = 6;

/// Seed of the shipped problem sequence.
pub const DEFAULT_PROBLEM_SEED: u64 = 7;
pub const DEFAULT_PROBLEM_COUNT: usize = 10;

/// Every generated problem exercises at least this many features.
pub const MIN_EXERCISED: usize = 2;

/// Cost bound used when checking that a problem exercises a feature.
pub const EXPERIMENT_ZETA: Cost = Cost::new_const(11, 10);

pub fn block_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect()
}

/// Fluents and unit-cost pickup/putdown/stack/unstack actions.
pub fn base_model(n_blocks: usize) -> Result<DomainModel> {
    if !(MIN_BLOCKS..=MAX_BLOCKS).contains(&n_blocks) {
        return Err(Error::InvalidParameter(format!(
            "blocksworld needs {MIN_BLOCKS}..={MAX_BLOCKS} blocks, got {n_blocks}"
        )));
    }
    let blocks = block_names(n_blocks);
    let mut fluents = vec!["handempty".to_string()];
    for x in &blocks {
        fluents.push(format!("clear-{x}"));
        fluents.push(format!("ontable-{x}"));
        fluents.push(format!("holding-{x}"));
        for y in blocks.iter().filter(|y| *y != x) {
            fluents.push(format!("on-{x}-{y}"));
        }
    }
    let mut actions = Vec::new();
    for x in &blocks {
        actions.push(
            ActionSpec::new(format!("pickup-{x}"), 1)
                .pre([
                    format!("clear-{x}"),
                    format!("ontable-{x}"),
                    "handempty".into(),
                ])
                .add([format!("holding-{x}")])
                .del([
                    format!("clear-{x}"),
                    format!("ontable-{x}"),
                    "handempty".into(),
                ]),
        );
        actions.push(
            ActionSpec::new(format!("putdown-{x}"), 1)
                .pre([format!("holding-{x}")])
                .add([
                    format!("ontable-{x}"),
                    format!("clear-{x}"),
                    "handempty".into(),
                ])
                .del([format!("holding-{x}")]),
        );
        for y in blocks.iter().filter(|y| *y != x) {
            actions.push(
                ActionSpec::new(format!("stack-{x}-{y}"), 1)
                    .pre([format!("holding-{x}"), format!("clear-{y}")])
                    .add([
                        format!("on-{x}-{y}"),
                        format!("clear-{x}"),
                        "handempty".into(),
                    ])
                    .del([format!("holding-{x}"), format!("clear-{y}")]),
            );
            actions.push(
                ActionSpec::new(format!("unstack-{x}-{y}"), 1)
                    .pre([
                        format!("on-{x}-{y}"),
                        format!("clear-{x}"),
                        "handempty".into(),
                    ])
                    .add([format!("holding-{x}"), format!("clear-{y}")])
                    .del([
                        format!("on-{x}-{y}"),
                        format!("clear-{x}"),
                        "handempty".into(),
                    ]),
            );
        }
    }
    DomainModel::new("blocksworld", Arc::new(Fluents::new(fluents)?), actions)
}

/// Which features span the model space.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum FeatureChoice {
    #[default]
    Default,
    Custom {
        features: Vec<ModelFeature>,
        true_mask: usize,
    },
}

/// The four default features and the true model's mask.
///
/// Each feature withholds a capability the robot actually has, so the true
/// model is the unrestricted base (mask 0) and every other model is an
/// observer who underestimates the robot.
pub fn default_features() -> (Vec<ModelFeature>, usize) {
    let features = vec![
        ModelFeature::new("no-putdown-a", "putdown-a", FeatureEffect::RemoveAction),
        ModelFeature::new("no-pickup-b", "pickup-b", FeatureEffect::RemoveAction),
        ModelFeature::new("no-stack-b", "stack-b-*", FeatureEffect::RemoveAction),
        ModelFeature::new("no-putdown-b", "putdown-b", FeatureEffect::RemoveAction),
    ];
    (features, 0)
}

/// A block configuration: towers listed bottom to top.
pub type Towers = Vec<Vec<usize>>;

pub fn towers_state(model: &DomainModel, towers: &Towers, holding: Option<usize>) -> Result<State> {
    let names = block_names_for(model);
    let mut facts = Vec::new();
    if let Some(h) = holding {
        facts.push(format!("holding-{}", names[h]));
    } else {
        facts.push("handempty".to_string());
    }
    for tower in towers {
        for (level, &b) in tower.iter().enumerate() {
            if level == 0 {
                facts.push(format!("ontable-{}", names[b]));
            } else {
                facts.push(format!("on-{}-{}", names[b], names[tower[level - 1]]));
            }
        }
        if let Some(&top) = tower.last() {
            facts.push(format!("clear-{}", names[top]));
        }
    }
    model.state(facts)
}

/// Goal facts (`on`/`ontable`) describing a full configuration.
pub fn towers_goal(model: &DomainModel, towers: &Towers) -> Result<State> {
    let names = block_names_for(model);
    let mut facts = Vec::new();
    for tower in towers {
        for (level, &b) in tower.iter().enumerate() {
            if level == 0 {
                facts.push(format!("ontable-{}", names[b]));
            } else {
                facts.push(format!("on-{}-{}", names[b], names[tower[level - 1]]));
            }
        }
    }
    model.state(facts)
}

fn block_names_for(model: &DomainModel) -> Vec<String> {
    let n = model
        .fluents()
        .names()
        .iter()
        .filter(|f| f.starts_with("ontable-"))
        .count();
    block_names(n)
}

pub fn random_towers<R: Rng>(rng: &mut R, n_blocks: usize) -> Towers {
    let mut order: Vec<usize> = (0..n_blocks).collect();
    order.shuffle(rng);
    let mut towers: Towers = Vec::new();
    for b in order {
        // new tower with probability 1/(towers+1), else on a random tower
        let slot = rng.gen_range(0..=towers.len());
        if slot == towers.len() {
            towers.push(vec![b]);
        } else {
            towers[slot].push(b);
        }
    }
    towers
}

/// Distinct random problems solvable under the base and true models, with
/// true optimal cost in `cost_range`. Problem `i` is kept only if it
/// exercises feature `i mod k`, and at least [`MIN_EXERCISED`] features
/// overall, at bound `zeta`.
pub fn generate_problems(
    space: &ModelSpace,
    n_blocks: usize,
    count: usize,
    seed: u64,
    cost_range: (i64, i64),
    zeta: Cost,
) -> Result<Vec<PlanningProblem>> {
    let mut rng = seeded_rng(seed);
    let planner = Planner::default();
    let truth = space.true_model();
    let mut problems = Vec::with_capacity(count);
    let mut attempts = 0;
    while problems.len() < count {
        attempts += 1;
        if attempts > 10_000 {
            return Err(Error::InvalidParameter(
                "could not generate enough solvable problems".into(),
            ));
        }
        let initial = towers_state(truth, &random_towers(&mut rng, n_blocks), None)?;
        let goal = towers_goal(truth, &random_towers(&mut rng, n_blocks))?;
        let problem = PlanningProblem { initial, goal };
        if problem.is_goal(&problem.initial) || problems.contains(&problem) {
            continue;
        }
        let cost = match planner.optimal_plan(truth, &problem) {
            Ok(plan) => plan.cost,
            Err(Error::Unsolvable) => continue,
            Err(e) => return Err(e),
        };
        if cost < Cost::integer(cost_range.0) || cost > Cost::integer(cost_range.1) {
            continue;
        }
        if planner.optimal_plan(space.base(), &problem).is_err() {
            continue;
        }
        let k = space.features().len();
        if k > 0 {
            let hit = (0..k)
                .map(|bit| exercises(&planner, space, &problem, bit, zeta))
                .collect::<Result<Vec<_>>>()?;
            if !hit[problems.len() % k] || hit.iter().filter(|h| **h).count() < MIN_EXERCISED.min(k)
            {
                continue;
            }
        }
        problems.push(problem);
    }
    Ok(problems)
}

/// True when flipping `bit` of the true mask changes the candidate plans
/// (or makes the problem unsolvable), so the problem exercises that feature.
fn exercises(
    planner: &Planner,
    space: &ModelSpace,
    problem: &PlanningProblem,
    bit: usize,
    zeta: Cost,
) -> Result<bool> {
    let max = crate::planner::DEFAULT_MAX_PLANS;
    let actions = |mask: usize| -> Result<Option<Vec<Vec<String>>>> {
        match planner.enumerate_candidate_plans(space.model(mask), problem, zeta, max) {
            Ok(set) => Ok(Some(set.plans.into_iter().map(|p| p.actions).collect())),
            Err(Error::Unsolvable) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let truth = space.true_mask();
    Ok(actions(truth)? != actions(truth ^ (1 << bit))?)
}

/// Builds the model space and the convergence problem sequence.
pub fn build_blocksworld(
    n_blocks: usize,
    choice: &FeatureChoice,
) -> Result<(ModelSpace, Vec<PlanningProblem>)> {
    let base = base_model(n_blocks)?;
    let (features, true_mask) = match choice {
        FeatureChoice::Default => default_features(),
        FeatureChoice::Custom {
            features,
            true_mask,
        } => (features.clone(), *true_mask),
    };
    let space = ModelSpace::build(base, features, true_mask)?;
    let problems = generate_problems(
        &space,
        n_blocks,
        DEFAULT_PROBLEM_COUNT,
        DEFAULT_PROBLEM_SEED,
        (4, 10),
        EXPERIMENT_ZETA,
    )?;
    Ok((space, problems))
}

/// Seed and true optimal costs of the comparison problems.
pub const COMPARISON_SEED: u64 = 5;
pub const COMPARISON_COSTS: [i64; 4] = [6, 8, 8, 10];

/// The observer model the comparison prior leans toward: a robot that
/// cannot put block `a` down.
pub const COMPARISON_OBSERVER: usize = 0b0001;

/// Prior weight on [`COMPARISON_OBSERVER`].
pub const COMPARISON_PRIOR_MASS: f64 = 0.5;

/// Cost bound of the comparison runs.
pub const COMPARISON_ZETA: Cost = Cost::new_const(3, 2);

/// One problem per entry of `costs` whose true optimal cost equals that
/// entry and which the `observer` model can only solve at a higher cost,
/// at most `zeta` times the true optimum. On such problems the observer
/// expects a detour the robot does not need.
pub fn comparison_problems(
    space: &ModelSpace,
    n_blocks: usize,
    observer: usize,
    costs: &[i64],
    seed: u64,
    zeta: Cost,
) -> Result<Vec<PlanningProblem>> {
    if observer >= space.len() {
        return Err(Error::InvalidParameter(format!(
            "observer mask {observer} out of range"
        )));
    }
    let mut rng = seeded_rng(seed);
    let planner = Planner::default();
    let truth = space.true_model();
    let mut problems: Vec<PlanningProblem> = Vec::with_capacity(costs.len());
    for &target in costs {
        let mut attempts = 0;
        let problem = loop {
            attempts += 1;
            if attempts > 20_000 {
                return Err(Error::InvalidParameter(format!(
                    "no comparison problem with optimal cost {target}"
                )));
            }
            let problem = PlanningProblem {
                initial: towers_state(truth, &random_towers(&mut rng, n_blocks), None)?,
                goal: towers_goal(truth, &random_towers(&mut rng, n_blocks))?,
            };
            if problems.contains(&problem) {
                continue;
            }
            let true_cost = match planner.optimal_plan(truth, &problem) {
                Ok(plan) if plan.cost == Cost::integer(target) => plan.cost,
                Ok(_) | Err(Error::Unsolvable) => continue,
                Err(e) => return Err(e),
            };
            match planner.optimal_plan(space.model(observer), &problem) {
                Ok(plan) if plan.cost > true_cost && plan.cost <= zeta * true_cost => {
                    break problem
                }
                Ok(_) | Err(Error::Unsolvable) => continue,
                Err(e) => return Err(e),
            }
        };
        problems.push(problem);
    }
    Ok(problems)
}

/// Observer prior with weight `mass` on `observer` and the rest spread
/// uniformly over the other models.
pub fn observer_prior(
    space: &ModelSpace,
    observer: usize,
    mass: f64,
) -> Result<crate::explicability::Belief> {
    let n = space.len();
    if observer >= n || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "observer mask {observer} out of range"
        )));
    }
    let mut w = vec![(1.0 - mass) / (n - 1) as f64; n];
    w[observer] = mass;
    crate::explicability::Belief::from_weights(w)
}
