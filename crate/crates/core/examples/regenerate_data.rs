//! Rebuilds the shipped domain files under `data/` from their generators.
//!
//! ```text
//! cargo run --example regenerate_data
//! ```

use std::path::Path;

use active_explicable::experiments::BuiltinDomain;
use active_explicable::Result;

fn main() -> Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for builtin in BuiltinDomain::ALL {
        let domain = builtin.generate()?;
        let file = dir.join(format!("{}.json", builtin.name().replace('-', "_")));
        let mut text = domain.to_file().to_json_pretty()?;
        text.push('\n');
        std::fs::write(&file, text)?;
        println!(
            "{}: {} models, {} problems -> {}",
            builtin.name(),
            domain.space.len(),
            domain.problems.len(),
            file.display()
        );
    }
    Ok(())
}
