//! Quantum counting: phase estimation over the Grover operator.
//!
//! The Grover operator `G = D·O` acts on the uniform start state as a
//! rotation by `2θ`, with eigenphases `±θ/π` (as fractions of a full turn)
//! where `sin²θ = M/N`. Estimating that phase on a `t`-qubit counting register
//! and mapping it through `N·sin²(π·phase)` yields an estimate of `M`. Both
//! eigenphases give the same `sin²`, so no sign disambiguation is needed.
//!
//! Register layout: data qubits `0..n`, counting qubits `n..n+t` with qubit
//! `n` the least-significant counting bit. Counting-register value `c`
//! therefore lives in the amplitude block `c·2^n .. (c+1)·2^n`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::grover::{grover_step, OracleSpec};
use crate::qsim::{self, StateVector, MAX_QUBITS};

/// How a count was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CountMode {
    /// Classical enumeration of every index.
    Exact,
    /// One phase-estimation shot.
    Quantum {
        t_qubits: u32,
        /// Measured counting-register value.
        outcome: u64,
        /// `outcome / 2^t`, in `[0, 1)`.
        raw_phase: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CountEstimate {
    /// Estimated number of marked indices, in `[0, N]`.
    pub m_hat: f64,
    /// Size `N = 2^n` of the searched space.
    pub space_size: u64,
    pub error_bound: f64,
    pub mode: CountMode,
}

impl CountEstimate {
    pub fn is_exact(&self) -> bool {
        matches!(self.mode, CountMode::Exact)
    }
}

/// Counts marked indices by enumeration.
pub fn exact_count(oracle: &OracleSpec) -> CountEstimate {
    let m = oracle.exact_m().unwrap_or_else(|| oracle.enumerate_marked());
    CountEstimate {
        m_hat: m as f64,
        space_size: oracle.dim() as u64,
        error_bound: 0.0,
        mode: CountMode::Exact,
    }
}

/// Default counting-register size for a target relative phase error:
/// `n + ⌈log2(2 + 1/(2ε))⌉`.
pub fn counting_register_size(n_qubits: u32, relative_error: f64) -> Result<u32> {
    if !(relative_error > 0.0 && relative_error <= 1.0) {
        return Err(arg(format!(
            "relative error {relative_error} outside (0, 1]"
        )));
    }
    let extra = (2.0 + 1.0 / (2.0 * relative_error)).log2().ceil() as u32;
    Ok(n_qubits + extra)
}

/// Error bound on a count estimate from a `t`-qubit counting register:
/// `(2π·√(m(N−m)) + π²·N/2^t) / 2^t`.
pub fn count_error_bound(m_hat: f64, space_size: u64, t_qubits: u32) -> f64 {
    let n = space_size as f64;
    let p = (t_qubits as f64).exp2();
    let spread = (m_hat * (n - m_hat)).max(0.0).sqrt();
    (2.0 * PI * spread + PI * PI * n / p) / p
}

/// How the controlled powers `G^{2^j}` are applied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ControlStrategy {
    /// Counting value `c` receives `G^c`, built from block `c−1` by one more
    /// Grover iteration. Produces the same state as the controlled circuit in
    /// `2^t` Grover steps on `2^n` amplitudes.
    #[default]
    Branchwise,
    /// Literal circuit: Hadamards on every qubit, then for each counting qubit
    /// `j`, `2^j` applications of `G` controlled on that qubit.
    RepeatedControlled,
}

/// Outcome distribution of the counting register after the inverse QFT.
///
/// The distribution does not depend on the measurement seed, so it is built
/// once and sampled for each shot.
#[derive(Clone, Debug, PartialEq)]
pub struct CountingDistribution {
    n_qubits: u32,
    t_qubits: u32,
    probabilities: Vec<f64>,
}

impl CountingDistribution {
    pub fn prepare(oracle: &OracleSpec, t_qubits: u32) -> Result<Self> {
        Self::prepare_with(oracle, t_qubits, ControlStrategy::default())
    }

    pub fn prepare_with(
        oracle: &OracleSpec,
        t_qubits: u32,
        strategy: ControlStrategy,
    ) -> Result<Self> {
        let state = phase_estimation_state(oracle, t_qubits, strategy)?;
        let n = oracle.n_qubits();
        let block = 1usize << n;
        let probabilities = state
            .amplitudes()
            .chunks(block)
            .map(|chunk| chunk.iter().map(|a| a.norm_sqr()).sum())
            .collect();
        Ok(Self {
            n_qubits: n,
            t_qubits,
            probabilities,
        })
    }

    pub fn t_qubits(&self) -> u32 {
        self.t_qubits
    }

    /// Probability of each counting-register value `0..2^t`.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Converts a measured counting-register value into an estimate.
    pub fn estimate_from_outcome(&self, outcome: u64) -> CountEstimate {
        let space_size = 1u64 << self.n_qubits;
        let raw_phase = outcome as f64 / (self.t_qubits as f64).exp2();
        let m_hat = (space_size as f64 * (PI * raw_phase).sin().powi(2)).clamp(0.0, space_size as f64);
        CountEstimate {
            m_hat,
            space_size,
            error_bound: count_error_bound(m_hat, space_size, self.t_qubits),
            mode: CountMode::Quantum {
                t_qubits: self.t_qubits,
                outcome,
                raw_phase,
            },
        }
    }

    /// One measurement shot of the counting register.
    pub fn sample(&self, rng_seed: u64) -> CountEstimate {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let outcome = qsim::sample_index(self.probabilities.iter().copied(), &mut rng);
        self.estimate_from_outcome(outcome as u64)
    }
}

/// Joint data+counting state just before measurement: uniform data register,
/// controlled Grover powers, inverse QFT on the counting register.
pub fn phase_estimation_state(
    oracle: &OracleSpec,
    t_qubits: u32,
    strategy: ControlStrategy,
) -> Result<StateVector> {
    if t_qubits == 0 {
        return Err(arg("counting register needs at least one qubit"));
    }
    let n = oracle.n_qubits();
    let total = n + t_qubits;
    if total > MAX_QUBITS {
        return Err(Error::Resource {
            requested: total,
            limit: MAX_QUBITS,
        });
    }
    let block = 1usize << n;
    let marks = oracle.marks();

    let mut state = match strategy {
        ControlStrategy::Branchwise => {
            let mut state = StateVector::init_uniform(total)?;
            let amps = state.amplitudes_mut();
            for c in 1..1usize << t_qubits {
                let (done, rest) = amps.split_at_mut(c * block);
                let current = &mut rest[..block];
                current.copy_from_slice(&done[(c - 1) * block..]);
                grover_step(current, marks);
            }
            state
        }
        ControlStrategy::RepeatedControlled => {
            let mut state = StateVector::zero(total)?;
            for q in 0..total {
                state.apply_hadamard(q)?;
            }
            let amps = state.amplitudes_mut();
            for j in 0..t_qubits {
                for _ in 0..1u64 << j {
                    for (c, chunk) in amps.chunks_mut(block).enumerate() {
                        if (c >> j) & 1 == 1 {
                            grover_step(chunk, marks);
                        }
                    }
                }
            }
            state
        }
    };

    let counting: Vec<u32> = (n..total).collect();
    state.inverse_qft(&counting)?;
    Ok(state)
}

/// Single-shot quantum count with a `t_qubits` counting register.
pub fn quantum_count(oracle: &OracleSpec, t_qubits: u32, rng_seed: u64) -> Result<CountEstimate> {
    Ok(CountingDistribution::prepare(oracle, t_qubits)?.sample(rng_seed))
}
