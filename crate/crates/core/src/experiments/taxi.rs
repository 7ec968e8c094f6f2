//! Taxi pickup scheduling with a hidden traffic feature.
//!
//! A taxi based at the convention center picks up four of eight guests,
//! one round trip each. Guests lie on a circular route and are visited in
//! route order, so a schedule is fixed by the set of guests it serves.
//! Far guests pay twice the fare of near guests. Heavy traffic multiplies
//! the travel time of far trips, which is the single model feature.
//!
//! An action `far-A-1` serves far guest `A` as the first pickup. Its cost
//! is `fare_offset + travel − reward`, so minimizing cost maximizes payoff
//! (`Σ reward − Σ travel`).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::domain::{ActionSpec, DomainModel, Fluents, PlanningProblem};
use crate::error::{Error, Result};
use crate::explicability::Belief;
use crate::model_space::{FeatureEffect, ModelFeature, ModelSpace};
use crate::planner::Plan;

pub const GUESTS: usize = 8;
pub const PICKUPS: usize = 4;

/// Mask of the light-traffic model; heavy traffic is mask 1.
pub const LIGHT: usize = 0;
pub const HEAVY: usize = 1;

/// Prior weight on light traffic in the shipped domain.
pub const DEFAULT_LIGHT_PRIOR: f64 = 0.7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Guest {
    pub name: String,
    pub x: i64,
    pub y: i64,
    pub far: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaxiGrid {
    pub width: i64,
    pub height: i64,
    pub depot: (i64, i64),
    /// Listed in route order.
    pub guests: Vec<Guest>,
    pub near_reward: Cost,
    pub far_reward: Cost,
    /// Travel cost per grid step in light traffic.
    pub step_cost: Cost,
    /// Heavy traffic multiplies far-trip travel by this factor.
    pub heavy_factor: Cost,
    /// Added to every pickup so that costs stay positive.
    pub fare_offset: Cost,
}

impl Default for TaxiGrid {
    /// A 9×9 map with the depot in the middle, near guests two blocks
    /// away and far guests four blocks away.
    fn default() -> Self {
        let guest = |name: &str, x, y, far| Guest {
            name: name.into(),
            x,
            y,
            far,
        };
        TaxiGrid {
            width: 9,
            height: 9,
            depot: (4, 4),
            guests: vec![
                guest("A", 2, 2, true),
                guest("B", 6, 2, true),
                guest("C", 4, 2, false),
                guest("D", 6, 4, false),
                guest("E", 4, 6, false),
                guest("F", 2, 4, false),
                guest("G", 6, 6, true),
                guest("H", 2, 6, true),
            ],
            near_reward: Cost::integer(3),
            far_reward: Cost::integer(6),
            step_cost: Cost::new(1, 2),
            heavy_factor: Cost::new(3, 2),
            fare_offset: Cost::integer(5),
        }
    }
}

impl TaxiGrid {
    fn distance(&self, g: &Guest) -> i64 {
        (g.x - self.depot.0).abs() + (g.y - self.depot.1).abs()
    }

    /// Round-trip travel cost in light traffic.
    pub fn light_travel(&self, g: &Guest) -> Cost {
        Cost::integer(2 * self.distance(g)) * self.step_cost
    }

    pub fn travel(&self, g: &Guest, heavy: bool) -> Cost {
        if heavy && g.far {
            self.light_travel(g) * self.heavy_factor
        } else {
            self.light_travel(g)
        }
    }

    pub fn reward(&self, g: &Guest) -> Cost {
        if g.far {
            self.far_reward
        } else {
            self.near_reward
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidParameter(format!("taxi grid: {reason}")));
        if self.guests.len() != GUESTS {
            return bad(format!("needs {GUESTS} guests, got {}", self.guests.len()));
        }
        let inside = |x: i64, y: i64| (0..self.width).contains(&x) && (0..self.height).contains(&y);
        if !inside(self.depot.0, self.depot.1) {
            return bad("depot outside the grid".into());
        }
        for (i, g) in self.guests.iter().enumerate() {
            if !inside(g.x, g.y) {
                return bad(format!("guest {} outside the grid", g.name));
            }
            if (g.x, g.y) == self.depot {
                return bad(format!("guest {} at the depot", g.name));
            }
            if self.guests[..i].iter().any(|h| h.name == g.name) {
                return bad(format!("duplicate guest {}", g.name));
            }
        }
        // One scale_cost feature can only stretch travel exactly when every
        // far trip has the same length and reward.
        let far: Vec<i64> = self
            .guests
            .iter()
            .filter(|g| g.far)
            .map(|g| self.distance(g))
            .collect();
        if far.is_empty() || far.iter().any(|d| *d != far[0]) {
            return bad("far guests must be equidistant from the depot".into());
        }
        if self.far_reward != self.near_reward * Cost::integer(2) {
            return bad("far guests pay twice the near fare".into());
        }
        for g in &self.guests {
            for heavy in [false, true] {
                let net = self.net_cost(g, heavy);
                if net.is_negative() || net == Cost::ZERO {
                    return bad("fare_offset too small for positive costs".into());
                }
            }
        }
        Ok(())
    }

    fn net_cost(&self, g: &Guest, heavy: bool) -> Cost {
        self.fare_offset + self.travel(g, heavy) - self.reward(g)
    }

    fn prefix(g: &Guest) -> &'static str {
        if g.far {
            "far"
        } else {
            "near"
        }
    }

    /// `Σ reward − Σ travel` of a schedule under the given traffic.
    pub fn payoff(&self, plan: &Plan, heavy: bool) -> Result<Cost> {
        plan.actions.iter().try_fold(Cost::ZERO, |acc, id| {
            let g = self.guest_of(id)?;
            Ok(acc + self.reward(g) - self.travel(g, heavy))
        })
    }

    /// The guest served by an action id such as `far-A-1`.
    pub fn guest_of(&self, action: &str) -> Result<&Guest> {
        let name = action
            .split('-')
            .nth(1)
            .ok_or_else(|| Error::UnknownAction(action.into()))?;
        self.guests
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| Error::UnknownAction(action.into()))
    }
}

/// Builds the {light, heavy} model space (true model heavy) and the single
/// pickup problem.
pub fn build_taxi(grid: &TaxiGrid) -> Result<(ModelSpace, Vec<PlanningProblem>)> {
    grid.validate()?;
    let mut fluents: Vec<String> = (0..=PICKUPS).map(|k| format!("count-{k}")).collect();
    for g in &grid.guests {
        fluents.push(format!("open-{}", g.name));
        fluents.push(format!("served-{}", g.name));
    }
    let mut actions = Vec::new();
    for (i, g) in grid.guests.iter().enumerate() {
        for k in 0..PICKUPS {
            // serving a guest closes it and every guest earlier on the route
            let closed = grid.guests[..=i].iter().map(|h| format!("open-{}", h.name));
            actions.push(
                ActionSpec::new(
                    format!("{}-{}-{}", TaxiGrid::prefix(g), g.name, k + 1),
                    grid.net_cost(g, false),
                )
                .pre([format!("open-{}", g.name), format!("count-{k}")])
                .add([format!("served-{}", g.name), format!("count-{}", k + 1)])
                .del(closed.chain([format!("count-{k}")])),
            );
        }
    }
    let base = DomainModel::new("taxi", Arc::new(Fluents::new(fluents)?), actions)?;
    let far = grid
        .guests
        .iter()
        .find(|g| g.far)
        .expect("validated: at least one far guest");
    let factor = grid.net_cost(far, true).ratio() / grid.net_cost(far, false).ratio();
    let factor = Cost::new(*factor.numer(), *factor.denom());
    let heavy = ModelFeature::new("heavy-traffic", "far-*", FeatureEffect::ScaleCost(factor));
    let space = ModelSpace::build(base, vec![heavy], HEAVY)?;
    let initial = space.base().state(
        std::iter::once("count-0".to_string())
            .chain(grid.guests.iter().map(|g| format!("open-{}", g.name))),
    )?;
    let goal = space.base().state([format!("count-{PICKUPS}")])?;
    Ok((space, vec![PlanningProblem { initial, goal }]))
}

/// Observer prior putting `light` on light traffic.
pub fn light_biased_prior(light: f64) -> Result<Belief> {
    let mut w = vec![0.0; 2];
    w[LIGHT] = light;
    w[HEAVY] = 1.0 - light;
    Belief::from_weights(w)
}
