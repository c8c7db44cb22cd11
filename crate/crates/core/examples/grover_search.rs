//! Amplitude amplification on a 6-qubit register with three marked indices.
//!
//! Prints the marked probability after every iteration next to the closed
//! form, then runs the planned search a few times.

use qsep::grover::{self, grover_iteration, marked_probability, plan, OracleSpec};
use qsep::qsim::StateVector;

fn main() -> qsep::Result<()> {
    let n = 6;
    let oracle = OracleSpec::from_indices(n, &[5, 17, 42])?;
    let p = plan(n, 3)?;
    println!("theta = {:.4} rad, planned iterations = {}", p.theta, p.iterations);

    let mut state = StateVector::init_uniform(n)?;
    for k in 0..=p.iterations + 2 {
        let sim = marked_probability(&state, &oracle)?;
        let closed = grover::success_probability(p.theta, k);
        println!("k={k:2}  P(marked)={sim:.6}  closed form={closed:.6}");
        grover_iteration(&mut state, &oracle)?;
    }

    for seed in 0..5 {
        let out = grover::search(&oracle, p.iterations, seed)?;
        let tag = if oracle.is_marked(out.index) { "marked" } else { "miss" };
        println!("seed {seed}: measured {:2} ({tag})", out.index);
    }
    Ok(())
}
