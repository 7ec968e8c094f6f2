//! Loads a domain file and prints the optimal plan of every problem under
//! every model.
//!
//! ```text
//! cargo run --example load_domain_file -- path/to/domain.json
//! ```
//!
//! Without an argument a small inline domain is used.

use active_explicable::{DomainFile, Error, Planner, Result};

const INLINE: &str = r#"{
  "schema_version": 1,
  "fluents": ["door-closed", "door-open", "inside"],
  "actions": [
    {"id": "open-door", "pre": ["door-closed"], "add": ["door-open"], "del": ["door-closed"], "cost": 1},
    {"id": "enter", "pre": ["door-open"], "add": ["inside"], "del": [], "cost": 1},
    {"id": "climb-window", "pre": [], "add": ["inside"], "del": [], "cost": "5/2"}
  ],
  "features": [
    {"id": "locked", "kind": "remove_action", "target": "open-door"}
  ],
  "problems": [{"initial": ["door-closed"], "goal": ["inside"]}]
}"#;

fn main() -> Result<()> {
    let domain = match std::env::args().nth(1) {
        Some(path) => DomainFile::load(path)?,
        None => DomainFile::parse(INLINE)?.into_domain()?,
    };
    println!(
        "{} models, true mask {}",
        domain.space.len(),
        domain.space.true_mask()
    );
    for (i, problem) in domain.problems.iter().enumerate() {
        for (mask, model) in domain.space.models().enumerate() {
            match Planner::default().optimal_plan(model, problem) {
                Ok(plan) => println!(
                    "problem {i}, model {mask}: [{}] cost {}",
                    plan.actions.join(" "),
                    plan.cost
                ),
                Err(Error::Unsolvable) => println!("problem {i}, model {mask}: unsolvable"),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}
