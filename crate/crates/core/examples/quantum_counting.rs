//! Quantum counting of a 5-qubit oracle with four solutions.
//!
//! Shows the outcome distribution of the counting register, a handful of
//! seeded estimates and how the error bound shrinks as `t` grows.

use qsep::grover::OracleSpec;
use qsep::qcount::{counting_register_size, exact_count, CountingDistribution};

fn main() -> qsep::Result<()> {
    let oracle = OracleSpec::from_indices(5, &[3, 8, 19, 30])?;
    println!("exact count: {}", exact_count(&oracle).m_hat);

    let t = counting_register_size(5, 0.125)?;
    let dist = CountingDistribution::prepare(&oracle, t)?;
    println!("t = {t}; most likely outcomes:");
    let mut ranked: Vec<(usize, f64)> = dist.probabilities().iter().copied().enumerate().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (y, p) in ranked.iter().take(4) {
        let e = dist.estimate_from_outcome(*y as u64);
        println!("  y={y:4}  p={p:.4}  m_hat={:.3} ± {:.3}", e.m_hat, e.error_bound);
    }

    for seed in 0..5 {
        let e = dist.sample(seed);
        println!("seed {seed}: m_hat = {:.3} (bound {:.3})", e.m_hat, e.error_bound);
    }

    for t in 4..=10 {
        let e = CountingDistribution::prepare(&oracle, t)?.sample(1);
        println!("t={t:2}: m_hat = {:7.3}, bound = {:.3}", e.m_hat, e.error_bound);
    }
    Ok(())
}
