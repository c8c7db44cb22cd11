//! Builds a virtual database over a two-axis grid and inspects it: grid
//! indexing, padding, per-symbol histogram and the match oracle.

use std::sync::Arc;

use qsep::vdb::{AdditiveOffset, Axis, ParamGrid, Quantizer, Symbol, VirtualDb};

fn main() -> qsep::Result<()> {
    let grid = Arc::new(ParamGrid::new(vec![
        Axis::linspace("drift", "V", -2.0, 2.0, 5)?,
        Axis::linspace("jitter", "V", -1.0, 1.0, 3)?,
    ])?);
    let q = Quantizer::new(0.0, 1.0, 8)?;
    let db = VirtualDb::new(0, grid, Arc::new(AdditiveOffset::new(q).with_source(0, 4.0)))?;

    println!(
        "{} records in a {}-qubit register ({} padding slots)",
        db.total_points(),
        db.n_qubits(),
        (1usize << db.n_qubits()) - db.total_points()
    );
    for x in [0, 4, 5, 14, 15] {
        let params = db.grid().index_to_params(x).ok();
        println!("index {x:2}: params {params:?} -> symbol {}", db.evaluate(x)?);
    }

    println!("histogram: {:?}", db.histogram()?);
    let r = Symbol::new(4, 8)?;
    let marked: Vec<usize> = db
        .match_oracle(r)?
        .marks()
        .iter()
        .enumerate()
        .filter_map(|(x, &m)| m.then_some(x))
        .collect();
    println!("indices matching {r}: {marked:?}");
    Ok(())
}
