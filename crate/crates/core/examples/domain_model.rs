//! Builds a small STRIPS model by hand, executes a plan, and expands two
//! model features into a four-model space.

use std::sync::Arc;

use active_explicable::{
    ActionSpec, Cost, DomainModel, FeatureEffect, Fluents, ModelFeature, ModelSpace, Result,
};

fn main() -> Result<()> {
    let fluents = Arc::new(Fluents::new([
        "at-home",
        "at-shop",
        "at-work",
        "has-coffee",
    ])?);
    let actions = vec![
        ActionSpec::new("walk-shop", 2)
            .pre(["at-home"])
            .add(["at-shop"])
            .del(["at-home"]),
        ActionSpec::new("buy-coffee", 1)
            .pre(["at-shop"])
            .add(["has-coffee"]),
        ActionSpec::new("walk-work", 3)
            .pre(["at-shop"])
            .add(["at-work"])
            .del(["at-shop"]),
        ActionSpec::new("bus-work", 2)
            .pre(["at-home"])
            .add(["at-work"])
            .del(["at-home"]),
    ];
    let base = DomainModel::new("commute", fluents, actions)?;

    let home = base.state(["at-home"])?;
    let plan = ["walk-shop", "buy-coffee", "walk-work"];
    let states = base.trajectory(&home, &plan)?;
    for (action, state) in plan.iter().zip(&states[1..]) {
        println!("{action:<11} -> {:?}", base.fluents().names_of(state));
    }
    println!("cost {}", base.plan_cost(&plan)?);

    let features = vec![
        ModelFeature::new("no-bus", "bus-work", FeatureEffect::RemoveAction),
        ModelFeature::new(
            "slow-walk",
            "walk-*",
            FeatureEffect::ScaleCost(Cost::integer(2)),
        ),
    ];
    let space = ModelSpace::build(base, features, 0b10)?;
    for (mask, model) in space.models().enumerate() {
        let ids: Vec<String> = model
            .actions()
            .iter()
            .map(|a| format!("{}:{}", a.id, a.cost))
            .collect();
        let marker = if mask == space.true_mask() {
            " (true)"
        } else {
            ""
        };
        println!("model {mask:02b}{marker}: {}", ids.join(" "));
    }
    Ok(())
}
