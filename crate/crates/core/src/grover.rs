//! Grover amplitude amplification over a phase oracle.
//!
//! Starting from the uniform superposition the state stays in the plane
//! spanned by the equal superpositions of unmarked (`|α⟩`) and marked (`|β⟩`)
//! indices. With `θ = arcsin(√(M/N))` the start state is
//! `cos θ·|α⟩ + sin θ·|β⟩` and every Grover iteration rotates it by `2θ`, so
//! after `k` iterations the marked mass is `sin²((2k+1)θ)`.

use std::f64::consts::PI;

use crate::error::{arg, Error, Result};
use crate::qsim::{self, Amplitude, MeasurementOutcome, StateVector};

/// A compiled phase oracle: the marked/unmarked flag of every register index.
///
/// The predicate is evaluated once per index at construction and stored as a
/// table, so repeated Grover iterations do not re-run the classical function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSpec {
    n_qubits: u32,
    marks: Vec<bool>,
    exact_m: Option<u64>,
}

impl OracleSpec {
    pub fn from_predicate<F>(n_qubits: u32, marked: F) -> Result<Self>
    where
        F: FnMut(usize) -> bool,
    {
        qsim::check_register_size(n_qubits)?;
        let marks = (0..1usize << n_qubits).map(marked).collect();
        Ok(Self {
            n_qubits,
            marks,
            exact_m: None,
        })
    }

    pub fn from_indices(n_qubits: u32, marked: &[usize]) -> Result<Self> {
        qsim::check_register_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut marks = vec![false; dim];
        for &x in marked {
            if x >= dim {
                return Err(arg(format!(
                    "marked index {x} out of range for {n_qubits} qubits"
                )));
            }
            marks[x] = true;
        }
        Ok(Self {
            n_qubits,
            marks,
            exact_m: None,
        })
    }

    /// Wraps a precomputed flag table of length `2^n_qubits`.
    pub fn from_marks(n_qubits: u32, marks: Vec<bool>) -> Result<Self> {
        qsim::check_register_size(n_qubits)?;
        if marks.len() != 1usize << n_qubits {
            return Err(arg(format!(
                "mark table has {} entries, expected {}",
                marks.len(),
                1usize << n_qubits
            )));
        }
        Ok(Self {
            n_qubits,
            marks,
            exact_m: None,
        })
    }

    /// Fills the cached solution count by enumerating every index.
    pub fn with_exact_m(mut self) -> Self {
        self.exact_m = Some(self.enumerate_marked());
        self
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    /// Size `N = 2^n` of the searched index space.
    pub fn dim(&self) -> usize {
        self.marks.len()
    }

    pub fn is_marked(&self, x: usize) -> bool {
        self.marks[x]
    }

    pub fn marks(&self) -> &[bool] {
        &self.marks
    }

    pub fn exact_m(&self) -> Option<u64> {
        self.exact_m
    }

    pub(crate) fn enumerate_marked(&self) -> u64 {
        self.marks.iter().filter(|&&m| m).count() as u64
    }

    /// Oracle marking exactly the indices this one leaves unmarked.
    pub fn complement(&self) -> Self {
        let dim = self.dim() as u64;
        Self {
            n_qubits: self.n_qubits,
            marks: self.marks.iter().map(|m| !m).collect(),
            exact_m: self.exact_m.map(|m| dim - m),
        }
    }
}

/// Iteration count and closed-form success probability for a search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroverPlan {
    pub iterations: u64,
    /// `arcsin(√(M/N))`, in `[0, π/2]`.
    pub theta: f64,
    /// `sin²((2·iterations + 1)·theta)`.
    pub predicted_success: f64,
}

/// `arcsin(√(M/N))`.
pub fn rotation_angle(m: u64, n: u64) -> f64 {
    (m as f64 / n as f64).sqrt().min(1.0).asin()
}

/// Marked mass after `k` iterations from the uniform state.
pub fn success_probability(theta: f64, k: u64) -> f64 {
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

/// One Grover iteration on raw amplitudes: phase oracle, then diffusion.
pub(crate) fn grover_step(amps: &mut [Amplitude], marks: &[bool]) {
    qsim::phase_flip(amps, |x| marks[x]);
    qsim::invert_about_mean(amps);
}

fn check_dims(state: &StateVector, oracle: &OracleSpec) -> Result<()> {
    if state.n_qubits() != oracle.n_qubits() {
        return Err(arg(format!(
            "state has {} qubits but the oracle expects {}",
            state.n_qubits(),
            oracle.n_qubits()
        )));
    }
    Ok(())
}

/// Applies `D·O` (oracle, then inversion about the mean) in place.
pub fn grover_iteration(state: &mut StateVector, oracle: &OracleSpec) -> Result<()> {
    check_dims(state, oracle)?;
    grover_step(state.amplitudes_mut(), oracle.marks());
    Ok(())
}

/// Total probability on marked indices.
pub fn marked_probability(state: &StateVector, oracle: &OracleSpec) -> Result<f64> {
    check_dims(state, oracle)?;
    Ok(state
        .amplitudes()
        .iter()
        .zip(oracle.marks())
        .filter(|(_, &m)| m)
        .map(|(a, _)| a.norm_sqr())
        .sum())
}

/// Optimal iteration count for `m` solutions among `2^n_qubits` indices.
///
/// Starts from `⌊π/(4θ)⌋` and keeps whichever of `k−1`, `k`, `k+1` has the
/// largest predicted success; ties go to the smallest count.
pub fn plan(n_qubits: u32, m: u64) -> Result<GroverPlan> {
    qsim::check_register_size(n_qubits)?;
    let n = 1u64 << n_qubits;
    if m == 0 {
        return Err(Error::Domain(
            "no solutions; search undefined, use counting first".into(),
        ));
    }
    if m > n {
        return Err(arg(format!("{m} solutions exceed the {n} indices")));
    }
    let theta = rotation_angle(m, n);
    let k0 = (PI / (4.0 * theta)).floor() as u64;
    let mut best = k0.saturating_sub(1);
    let mut best_p = success_probability(theta, best);
    for k in best + 1..=k0 + 1 {
        let p = success_probability(theta, k);
        if p > best_p {
            best = k;
            best_p = p;
        }
    }
    Ok(GroverPlan {
        iterations: best,
        theta,
        predicted_success: best_p,
    })
}

/// Prepares the uniform state, runs `iterations` Grover iterations and
/// measures the register.
pub fn search(oracle: &OracleSpec, iterations: u64, rng_seed: u64) -> Result<MeasurementOutcome> {
    let mut state = StateVector::init_uniform(oracle.n_qubits())?;
    for _ in 0..iterations {
        grover_step(state.amplitudes_mut(), oracle.marks());
    }
    Ok(state.measure_all(rng_seed))
}
