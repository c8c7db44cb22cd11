//! Loads a scenario file, runs it and writes the result files.
//!
//! ```text
//! cargo run --example run_scenario -- scenarios/disjoint.toml out/
//! ```

use std::path::PathBuf;

use qsep::scenario::{self, ScenarioDoc};

fn main() -> qsep::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/intersection.toml"));
    let out = args.next().map(PathBuf::from);

    let (doc, base) = ScenarioDoc::load(&config)?;
    let s = scenario::build(&doc, &base)?;
    let report = s.run()?;
    for rec in &report.decisions {
        println!("r={:3}  {}", rec.observation, rec.decision.verdict);
    }
    if let Some(dir) = out {
        for p in report.write_to(&dir)? {
            println!("wrote {}", p.display());
        }
    }
    Ok(())
}
