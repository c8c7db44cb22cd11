//! Two overlapping sources, classified with ML and with MAP under skewed
//! priors, in exact and quantum mode.

use std::collections::BTreeMap;
use std::sync::Arc;

use qsep::separator::{separate, EstimationConfig, Priors, Rule, SeparationConfig};
use qsep::vdb::{AdditiveOffset, Axis, ParamGrid, Quantizer, Symbol, VirtualDb};

fn main() -> qsep::Result<()> {
    let grid = Arc::new(ParamGrid::new(vec![
        Axis::linspace("drift", "V", -3.0, 3.0, 7)?,
        Axis::linspace("jitter", "V", -3.0, 3.0, 7)?,
    ])?);
    let q = Quantizer::new(0.0, 1.0, 32)?;
    let dbs = [(0, 10.0), (1, 14.0)]
        .into_iter()
        .map(|(id, mu)| VirtualDb::new(id, grid.clone(), Arc::new(AdditiveOffset::new(q).with_source(id, mu))))
        .collect::<qsep::Result<Vec<_>>>()?;

    let ml = SeparationConfig::exact_ml();
    let map = SeparationConfig {
        rule: Rule::Map,
        priors: Some(Priors::new(BTreeMap::from([(0, 0.8), (1, 0.2)]))?),
        ..SeparationConfig::exact_ml()
    };
    let quantum = SeparationConfig {
        estimation: EstimationConfig::quantum(2003),
        ..SeparationConfig::exact_ml()
    };

    println!(" r  | ML exact        | MAP 0.8/0.2     | ML quantum");
    for code in (4..=20).step_by(2) {
        let r = Symbol::new(code, 32)?;
        let a = separate(&dbs, r, &ml)?;
        let b = separate(&dbs, r, &map)?;
        let c = separate(&dbs, r, &quantum)?;
        let flag = if c.within_error_bound { " (within bound)" } else { "" };
        println!("{code:3} | {:15} | {:15} | {}{flag}", a.verdict.to_string(), b.verdict.to_string(), c.verdict);
    }
    Ok(())
}
