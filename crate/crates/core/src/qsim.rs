//! Dense state-vector simulator.
//!
//! A register of `n` qubits is stored as `2^n` complex amplitudes. Qubit 0 is
//! the least-significant bit of the basis-state index, so basis state `|x⟩`
//! has qubit `q` set iff `(x >> q) & 1 == 1`. Every gate, the QFT and the
//! controlled operations used by quantum counting follow this convention.
//!
//! Registers are limited to [`MAX_QUBITS`] qubits (`2^24` amplitudes, 256 MiB).
//! Operations may introduce a global phase; comparisons in tests are made on
//! probability vectors or up to global phase.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{arg, Error, Result};

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: u32 = 24;

/// Tolerance on `|Σ|a|² − 1|` that every operation is expected to keep.
pub const NORM_TOLERANCE: f64 = 1e-12;

pub type Amplitude = Complex64;

/// Outcome of a computational-basis measurement of the whole register.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementOutcome {
    pub index: usize,
    /// `|amps[index]|²` at measurement time.
    pub probability: f64,
}

/// Gate set understood by [`StateVector::apply`].
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(u32),
    X(u32),
    Z(u32),
    /// `diag(1, e^{iφ})` on one qubit.
    Phase(u32, f64),
    ControlledPhase { control: u32, target: u32, angle: f64 },
    Swap(u32, u32),
    /// Phase flip on the listed basis indices.
    PhaseOracle(Vec<usize>),
    Diffusion,
    Qft(Vec<u32>),
    InverseQft(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: u32,
    amps: Vec<Amplitude>,
}

pub(crate) fn check_register_size(n_qubits: u32) -> Result<()> {
    if n_qubits == 0 {
        return Err(arg("a register needs at least one qubit"));
    }
    if n_qubits > MAX_QUBITS {
        return Err(Error::Resource {
            requested: n_qubits,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: u32) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: u32, index: usize) -> Result<Self> {
        check_register_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(arg(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Equal superposition `H^{⊗n}|0⟩`: every amplitude is `1/√(2^n)`.
    pub fn init_uniform(n_qubits: u32) -> Result<Self> {
        check_register_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            n_qubits,
            amps: vec![a; dim],
        })
    }

    /// Wraps explicit amplitudes. The length must be a power of two (at least
    /// 2), every entry finite, and the norm within `1e-10` of one.
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(arg(format!(
                "amplitude vector length {dim} is not a power of two >= 2"
            )));
        }
        let n_qubits = dim.trailing_zeros();
        check_register_size(n_qubits)?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(arg("amplitudes must be finite"));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(arg(format!("amplitudes are not normalized (norm² = {norm})")));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Amplitude] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Amplitude> {
        self.amps
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: u32) -> Result<()> {
        if q >= self.n_qubits {
            return Err(arg(format!(
                "qubit {q} out of range for a {}-qubit register",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// Negates the amplitude of every index for which `marked` holds.
    pub fn apply_phase_oracle<F>(&mut self, marked: F)
    where
        F: Fn(usize) -> bool,
    {
        phase_flip(&mut self.amps, marked);
    }

    /// Inversion about the mean: `a ← 2·mean(a) − a`.
    pub fn apply_diffusion(&mut self) {
        invert_about_mean(&mut self.amps);
    }

    pub fn apply_hadamard(&mut self, q: u32) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a = self.amps[i];
                let b = self.amps[i | bit];
                self.amps[i] = (a + b) * s;
                self.amps[i | bit] = (a - b) * s;
            }
        }
        Ok(())
    }

    pub fn apply_x(&mut self, q: u32) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
        Ok(())
    }

    pub fn apply_z(&mut self, q: u32) -> Result<()> {
        self.apply_phase(q, PI)
    }

    pub fn apply_phase(&mut self, q: u32, angle: f64) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        let w = Complex64::from_polar(1.0, angle);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a *= w;
            }
        }
        Ok(())
    }

    pub fn apply_controlled_phase(&mut self, control: u32, target: u32, angle: f64) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(arg("control and target must differ"));
        }
        let mask = (1usize << control) | (1usize << target);
        let w = Complex64::from_polar(1.0, angle);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a *= w;
            }
        }
        Ok(())
    }

    pub fn apply_swap(&mut self, a: u32, b: u32) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Ok(());
        }
        let (ba, bb) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            // visit each pair once, from the side with qubit a set
            if i & ba != 0 && i & bb == 0 {
                self.amps.swap(i, (i & !ba) | bb);
            }
        }
        Ok(())
    }

    fn check_targets(&self, targets: &[u32]) -> Result<()> {
        if targets.is_empty() {
            return Err(arg("QFT needs at least one target qubit"));
        }
        for (i, &q) in targets.iter().enumerate() {
            self.check_qubit(q)?;
            if targets[..i].contains(&q) {
                return Err(arg(format!("duplicate target qubit {q}")));
            }
        }
        Ok(())
    }

    /// Quantum Fourier transform on the sub-register formed by `targets`,
    /// with `targets[0]` as its least-significant bit:
    /// `|x⟩ ↦ 2^{-t/2} Σ_y e^{2πi·xy/2^t} |y⟩`.
    pub fn qft(&mut self, targets: &[u32]) -> Result<()> {
        self.check_targets(targets)?;
        let m = targets.len();
        for j in (0..m).rev() {
            self.apply_hadamard(targets[j])?;
            for k in (0..j).rev() {
                let angle = PI / (1u64 << (j - k)) as f64;
                self.apply_controlled_phase(targets[k], targets[j], angle)?;
            }
        }
        for i in 0..m / 2 {
            self.apply_swap(targets[i], targets[m - 1 - i])?;
        }
        Ok(())
    }

    /// Adjoint of [`StateVector::qft`] on the same target ordering.
    pub fn inverse_qft(&mut self, targets: &[u32]) -> Result<()> {
        self.check_targets(targets)?;
        let m = targets.len();
        for i in 0..m / 2 {
            self.apply_swap(targets[i], targets[m - 1 - i])?;
        }
        for j in 0..m {
            for k in 0..j {
                let angle = -PI / (1u64 << (j - k)) as f64;
                self.apply_controlled_phase(targets[k], targets[j], angle)?;
            }
            self.apply_hadamard(targets[j])?;
        }
        Ok(())
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match gate {
            Gate::H(q) => self.apply_hadamard(*q),
            Gate::X(q) => self.apply_x(*q),
            Gate::Z(q) => self.apply_z(*q),
            Gate::Phase(q, angle) => self.apply_phase(*q, *angle),
            Gate::ControlledPhase {
                control,
                target,
                angle,
            } => self.apply_controlled_phase(*control, *target, *angle),
            Gate::Swap(a, b) => self.apply_swap(*a, *b),
            Gate::PhaseOracle(marked) => {
                if let Some(&bad) = marked.iter().find(|&&x| x >= self.dim()) {
                    return Err(arg(format!("marked index {bad} out of range")));
                }
                // duplicates would cancel; flip each listed index once
                let mut unique = marked.clone();
                unique.sort_unstable();
                unique.dedup();
                for x in unique {
                    self.amps[x] = -self.amps[x];
                }
                Ok(())
            }
            Gate::Diffusion => {
                self.apply_diffusion();
                Ok(())
            }
            Gate::Qft(t) => self.qft(t),
            Gate::InverseQft(t) => self.inverse_qft(t),
        }
    }

    /// Samples a basis index with probability `|amps[x]|²`.
    ///
    /// The state is left untouched; collapsing it is up to the caller. The
    /// same seed always yields the same outcome.
    pub fn measure_all(&self, seed: u64) -> MeasurementOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let index = sample_index(self.amps.iter().map(|a| a.norm_sqr()), &mut rng);
        MeasurementOutcome {
            index,
            probability: self.amps[index].norm_sqr(),
        }
    }
}

pub(crate) fn phase_flip<F>(amps: &mut [Amplitude], marked: F)
where
    F: Fn(usize) -> bool,
{
    for (x, a) in amps.iter_mut().enumerate() {
        if marked(x) {
            *a = -*a;
        }
    }
}

pub(crate) fn invert_about_mean(amps: &mut [Amplitude]) {
    let n = amps.len() as f64;
    let mean = amps.iter().sum::<Complex64>() / n;
    let twice = mean * 2.0;
    for a in amps.iter_mut() {
        *a = twice - *a;
    }
}

/// Draws an index from nonnegative weights that sum to (about) one.
///
/// If rounding leaves the drawn value past the cumulative total, the last
/// index with positive weight is returned.
pub(crate) fn sample_index<I, R>(weights: I, rng: &mut R) -> usize
where
    I: IntoIterator<Item = f64>,
    R: Rng,
{
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, w) in weights.into_iter().enumerate() {
        if w > 0.0 {
            last_positive = i;
        }
        acc += w;
        if u < acc {
            return i;
        }
    }
    last_positive
}
