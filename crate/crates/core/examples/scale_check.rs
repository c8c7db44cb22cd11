//! Exact separation on a 31712-point delay/velocity grid (15 qubits), then a
//! quantum-mode resource curve: wall time of preparing the counting
//! distribution as the register grows.

use std::sync::Arc;
use std::time::Instant;

use qsep::grover::OracleSpec;
use qsep::qcount::{counting_register_size, CountingDistribution};
use qsep::separator::{separate, SeparationConfig};
use qsep::vdb::{Axis, DelayVelocity, ParamGrid, Quantizer, Symbol, VirtualDb};

fn main() -> qsep::Result<()> {
    let grid = Arc::new(ParamGrid::new(vec![
        Axis::logspace("delay", "s", 1e-10, 1e-1, 32)?,
        Axis::linspace("velocity", "m/s", 1.0, 100.0, 991)?,
    ])?);
    let q = Quantizer::new(0.0, 1.0, 64)?;
    let dbs = [(0, 0.5, 1.0), (1, 0.4, 2.0)]
        .into_iter()
        .map(|(id, mu, shift)| {
            let model = DelayVelocity::new(q, 1.0, shift)?.with_source(id, mu);
            VirtualDb::new(id, grid.clone(), Arc::new(model))
        })
        .collect::<qsep::Result<Vec<_>>>()?;
    println!("{} points, {} qubits", dbs[0].total_points(), dbs[0].n_qubits());

    let start = Instant::now();
    for code in [8, 24, 40, 56] {
        let d = separate(&dbs, Symbol::new(code, 64)?, &SeparationConfig::exact_ml())?;
        println!("r={code:2}: {}", d.verdict);
    }
    println!("exact: {:.3}s", start.elapsed().as_secs_f64());

    println!("\n n   t  qubits  seconds");
    for n in [4u32, 6, 8, 10, 12] {
        let t = counting_register_size(n, 0.125)?.min(20 - n);
        let oracle = OracleSpec::from_predicate(n, |x| x % 7 == 3)?;
        let start = Instant::now();
        CountingDistribution::prepare(&oracle, t)?.sample(0);
        println!("{n:2} {t:3} {:6} {:9.3}", n + t, start.elapsed().as_secs_f64());
    }
    Ok(())
}
