//! Likelihood curve f(r|s) over the whole alphabet for one set, exact and
//! quantum, drawn as a text bar chart.

use std::sync::Arc;

use qsep::separator::{pdf_curve, EstimationConfig};
use qsep::vdb::{AdditiveOffset, Axis, ParamGrid, Quantizer, Symbol, VirtualDb};

fn main() -> qsep::Result<()> {
    let grid = Arc::new(ParamGrid::new(vec![
        Axis::linspace("drift", "V", -3.0, 3.0, 7)?,
        Axis::linspace("jitter", "V", -3.0, 3.0, 7)?,
    ])?);
    let q = Quantizer::new(0.0, 1.0, 24)?;
    let db = VirtualDb::new(0, grid, Arc::new(AdditiveOffset::new(q).with_source(0, 12.0)))?;

    let symbols = Symbol::alphabet(24);
    let exact = pdf_curve(&db, &symbols, &EstimationConfig::exact())?;
    let quantum = pdf_curve(&db, &symbols, &EstimationConfig::quantum(9))?;
    let total: f64 = exact.iter().map(|(_, e)| e.value).sum();
    println!("sum of exact curve = {total}");
    for ((s, e), (_, qe)) in exact.iter().zip(&quantum) {
        let bar = "#".repeat((e.value * 200.0).round() as usize);
        println!("{:3} {:.4} {:.4}±{:.4} {bar}", s.code(), e.value, qe.value, qe.error_bound);
    }
    Ok(())
}
