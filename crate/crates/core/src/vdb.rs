//! Virtual databases: quantized parameter grids, disturbance models and the
//! match oracle.
//!
//! A [`VirtualDb`] pairs a set identifier with a [`ParamGrid`] and a
//! [`DisturbanceModel`]. Register index `x` selects a grid point by mixed-radix
//! decomposition (first axis least significant) and the model maps that point
//! to an output [`Symbol`]. The table of `(x, symbol)` records is never stored;
//! it exists only through [`VirtualDb::evaluate`] and the oracles built from it.
//!
//! Grids rarely hold exactly `2^n` points. Indices in `[total_points, 2^n)` are
//! padding and evaluate to a reserved symbol that no observation can equal.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::grover::OracleSpec;
use crate::qsim;

/// One named, quantized parameter axis with strictly increasing values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    #[serde(default)]
    pub unit: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: impl Into<String>, unit: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let axis = Self {
            name: name.into(),
            unit: unit.into(),
            values,
        };
        axis.check()?;
        Ok(axis)
    }

    /// `count` evenly spaced values from `start` to `stop` inclusive.
    pub fn linspace(name: impl Into<String>, unit: impl Into<String>, start: f64, stop: f64, count: usize) -> Result<Self> {
        let values = match count {
            0 => Vec::new(),
            1 => vec![start],
            _ => {
                let step = (stop - start) / (count - 1) as f64;
                (0..count).map(|i| start + step * i as f64).collect()
            }
        };
        Self::new(name, unit, values)
    }

    /// `count` log-spaced values from `start` to `stop` inclusive (both > 0).
    pub fn logspace(name: impl Into<String>, unit: impl Into<String>, start: f64, stop: f64, count: usize) -> Result<Self> {
        if !(start > 0.0 && stop > 0.0) {
            return Err(arg("logspace bounds must be positive"));
        }
        let lin = Self::linspace("", "", start.log10(), stop.log10(), count)?;
        let values = lin.values.iter().map(|e| 10f64.powf(*e)).collect();
        Self::new(name, unit, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(arg(format!("axis `{}` has no values", self.name)));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(arg(format!("axis `{}` has a non-finite value", self.name)));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(arg(format!(
                "axis `{}` values are not strictly increasing",
                self.name
            )));
        }
        Ok(())
    }
}

/// Cartesian product of quantized axes. Index `x` decomposes as
/// `x = i₀ + s₀·(i₁ + s₁·(i₂ + …))` where `iₖ` indexes axis `k` of size `sₖ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamGrid {
    axes: Vec<Axis>,
    total_points: usize,
}

impl ParamGrid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(arg("a parameter grid needs at least one axis"));
        }
        let mut total: usize = 1;
        for axis in &axes {
            axis.check()?;
            total = total
                .checked_mul(axis.len())
                .ok_or_else(|| arg("grid size overflows"))?;
        }
        Ok(Self {
            axes,
            total_points: total,
        })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn total_points(&self) -> usize {
        self.total_points
    }

    /// Smallest register (at least one qubit) whose index space covers the grid.
    pub fn required_qubits(&self) -> u32 {
        let bits = usize::BITS - (self.total_points - 1).leading_zeros();
        bits.max(1)
    }

    /// Per-axis positions of grid index `x`.
    pub fn index_to_positions(&self, x: usize) -> Result<Vec<usize>> {
        if x >= self.total_points {
            return Err(arg(format!(
                "index {x} outside grid of {} points",
                self.total_points
            )));
        }
        let mut rest = x;
        Ok(self
            .axes
            .iter()
            .map(|axis| {
                let i = rest % axis.len();
                rest /= axis.len();
                i
            })
            .collect())
    }

    /// Parameter tuple (one value per axis) of grid index `x`.
    pub fn index_to_params(&self, x: usize) -> Result<Vec<f64>> {
        let positions = self.index_to_positions(x)?;
        Ok(positions
            .iter()
            .zip(&self.axes)
            .map(|(&i, axis)| axis.values[i])
            .collect())
    }

    /// Inverse of [`ParamGrid::index_to_params`]; values must be grid values.
    pub fn params_to_index(&self, params: &[f64]) -> Result<usize> {
        if params.len() != self.axes.len() {
            return Err(arg(format!(
                "expected {} parameters, got {}",
                self.axes.len(),
                params.len()
            )));
        }
        let mut x = 0;
        for (axis, &v) in self.axes.iter().zip(params).rev() {
            let i = axis
                .values
                .binary_search_by(|probe| probe.total_cmp(&v))
                .map_err(|_| arg(format!("{v} is not a value of axis `{}`", axis.name)))?;
            x = x * axis.len() + i;
        }
        Ok(x)
    }
}

/// Quantized output of `g(s, x)`: a code in a finite alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Symbol {
    code: u64,
    alphabet_size: u64,
}

impl Symbol {
    pub fn new(code: u64, alphabet_size: u64) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(arg("alphabet must be non-empty"));
        }
        if code >= alphabet_size {
            return Err(arg(format!(
                "symbol {code} outside alphabet of size {alphabet_size}"
            )));
        }
        Ok(Self {
            code,
            alphabet_size,
        })
    }

    /// The padding symbol: code equal to the alphabet size, so it can never
    /// be built by [`Symbol::new`] and never matches an observation.
    pub fn reserved(alphabet_size: u64) -> Self {
        Self {
            code: alphabet_size,
            alphabet_size,
        }
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn alphabet_size(&self) -> u64 {
        self.alphabet_size
    }

    pub fn is_reserved(&self) -> bool {
        self.code >= self.alphabet_size
    }

    /// Every symbol of an alphabet, in code order.
    pub fn alphabet(alphabet_size: u64) -> Vec<Symbol> {
        (0..alphabet_size)
            .map(|code| Symbol {
                code,
                alphabet_size,
            })
            .collect()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_reserved() {
            write!(f, "<padding>")
        } else {
            write!(f, "{}", self.code)
        }
    }
}

/// Uniform mid-tread quantizer with clamping:
/// `code = clamp(round((v − origin)/bucket_width), 0, alphabet_size − 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quantizer {
    pub origin: f64,
    pub bucket_width: f64,
    pub alphabet_size: u64,
}

impl Quantizer {
    pub fn new(origin: f64, bucket_width: f64, alphabet_size: u64) -> Result<Self> {
        if !(bucket_width > 0.0 && bucket_width.is_finite()) {
            return Err(arg("bucket width must be positive and finite"));
        }
        if !origin.is_finite() {
            return Err(arg("quantizer origin must be finite"));
        }
        if alphabet_size == 0 {
            return Err(arg("alphabet must be non-empty"));
        }
        Ok(Self {
            origin,
            bucket_width,
            alphabet_size,
        })
    }

    pub fn quantize(&self, value: f64) -> Option<u64> {
        if !value.is_finite() {
            return None;
        }
        let k = ((value - self.origin) / self.bucket_width).round();
        Some(k.clamp(0.0, (self.alphabet_size - 1) as f64) as u64)
    }
}

/// A grid point handed to a model: its index and parameter values.
#[derive(Clone, Copy, Debug)]
pub struct GridPoint<'a> {
    pub index: usize,
    pub params: &'a [f64],
}

/// Deterministic quantized transfer function `(set_id, grid point) → code`.
pub trait DisturbanceModel: fmt::Debug + Send + Sync {
    fn model_id(&self) -> &str;

    fn alphabet_size(&self) -> u64;

    /// Set ids this model is defined for.
    fn declared_sets(&self) -> Vec<u64>;

    /// Output code for `set_id` at `point`. Must be `< alphabet_size()`.
    fn eval(&self, set_id: u64, point: GridPoint<'_>) -> Result<u64>;
}

fn undeclared(model: &str, set_id: u64) -> Error {
    Error::ModelContract {
        model: model.into(),
        reason: format!("set {set_id} is not declared"),
    }
}

fn source_of(model: &str, sources: &BTreeMap<u64, f64>, set_id: u64) -> Result<f64> {
    sources.get(&set_id).copied().ok_or_else(|| undeclared(model, set_id))
}

fn quantized(model: &str, q: &Quantizer, value: f64) -> Result<u64> {
    q.quantize(value).ok_or_else(|| Error::ModelContract {
        model: model.into(),
        reason: format!("non-finite output {value}"),
    })
}

/// `y = quantize(μ_s + Σ params)`: the source value shifted by the sum of
/// the grid point's offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct AdditiveOffset {
    quantizer: Quantizer,
    sources: BTreeMap<u64, f64>,
}

impl AdditiveOffset {
    pub const ID: &'static str = "additive";

    pub fn new(quantizer: Quantizer) -> Self {
        Self {
            quantizer,
            sources: BTreeMap::new(),
        }
    }

    /// Declares set `set_id` with source value `mu`.
    pub fn with_source(mut self, set_id: u64, mu: f64) -> Self {
        self.sources.insert(set_id, mu);
        self
    }
}

impl DisturbanceModel for AdditiveOffset {
    fn model_id(&self) -> &str {
        Self::ID
    }

    fn alphabet_size(&self) -> u64 {
        self.quantizer.alphabet_size
    }

    fn declared_sets(&self) -> Vec<u64> {
        self.sources.keys().copied().collect()
    }

    fn eval(&self, set_id: u64, point: GridPoint<'_>) -> Result<u64> {
        let mu = source_of(Self::ID, &self.sources, set_id)?;
        let value = mu + point.params.iter().sum::<f64>();
        quantized(Self::ID, &self.quantizer, value)
    }
}

/// Toy delay/velocity channel over a two-axis grid `(delay, velocity)`:
///
/// `y = quantize(μ_s · velocity / reference_velocity + shift_per_decade · (−log10 delay))`
///
/// The source is scaled by the relative velocity and shifted by one
/// `shift_per_decade` step for every decade of delay below one second.
#[derive(Clone, Debug, PartialEq)]
pub struct DelayVelocity {
    quantizer: Quantizer,
    reference_velocity: f64,
    shift_per_decade: f64,
    sources: BTreeMap<u64, f64>,
}

impl DelayVelocity {
    pub const ID: &'static str = "delay_velocity";

    pub fn new(quantizer: Quantizer, reference_velocity: f64, shift_per_decade: f64) -> Result<Self> {
        if !(reference_velocity > 0.0 && reference_velocity.is_finite()) {
            return Err(arg("reference velocity must be positive and finite"));
        }
        if !shift_per_decade.is_finite() {
            return Err(arg("shift per decade must be finite"));
        }
        Ok(Self {
            quantizer,
            reference_velocity,
            shift_per_decade,
            sources: BTreeMap::new(),
        })
    }

    pub fn with_source(mut self, set_id: u64, mu: f64) -> Self {
        self.sources.insert(set_id, mu);
        self
    }
}

impl DisturbanceModel for DelayVelocity {
    fn model_id(&self) -> &str {
        Self::ID
    }

    fn alphabet_size(&self) -> u64 {
        self.quantizer.alphabet_size
    }

    fn declared_sets(&self) -> Vec<u64> {
        self.sources.keys().copied().collect()
    }

    fn eval(&self, set_id: u64, point: GridPoint<'_>) -> Result<u64> {
        let mu = source_of(Self::ID, &self.sources, set_id)?;
        let &[delay, velocity] = point.params else {
            return Err(Error::ModelContract {
                model: Self::ID.into(),
                reason: format!(
                    "expects a (delay, velocity) grid, got {} axes",
                    point.params.len()
                ),
            });
        };
        if delay <= 0.0 {
            return Err(Error::ModelContract {
                model: Self::ID.into(),
                reason: format!("delay {delay} must be positive"),
            });
        }
        let value = mu * velocity / self.reference_velocity - self.shift_per_decade * delay.log10();
        quantized(Self::ID, &self.quantizer, value)
    }
}

/// Explicit lookup: entry `x` of the set's table is the output at grid index `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct TableModel {
    alphabet_size: u64,
    tables: BTreeMap<u64, Vec<u64>>,
}

impl TableModel {
    pub const ID: &'static str = "table";

    pub fn new(alphabet_size: u64) -> Self {
        Self {
            alphabet_size,
            tables: BTreeMap::new(),
        }
    }

    pub fn with_table(mut self, set_id: u64, entries: Vec<u64>) -> Self {
        self.tables.insert(set_id, entries);
        self
    }

    /// Reads a lookup table: one integer symbol per line. Blank lines are
    /// ignored.
    pub fn read_table(path: &Path) -> Result<Vec<u64>> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        parse_table(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}

pub fn parse_table(text: &str) -> Result<Vec<u64>> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            line.trim()
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("line {}: `{}`: {e}", i + 1, line.trim())))
        })
        .collect()
}

impl DisturbanceModel for TableModel {
    fn model_id(&self) -> &str {
        Self::ID
    }

    fn alphabet_size(&self) -> u64 {
        self.alphabet_size
    }

    fn declared_sets(&self) -> Vec<u64> {
        self.tables.keys().copied().collect()
    }

    fn eval(&self, set_id: u64, point: GridPoint<'_>) -> Result<u64> {
        let table = self.tables.get(&set_id).ok_or_else(|| undeclared(Self::ID, set_id))?;
        table.get(point.index).copied().ok_or_else(|| Error::ModelContract {
            model: Self::ID.into(),
            reason: format!(
                "table for set {set_id} has {} entries, index {} requested",
                table.len(),
                point.index
            ),
        })
    }
}

/// Built-in model families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Additive,
    DelayVelocity,
    Table,
}

impl ModelKind {
    pub fn id(&self) -> &'static str {
        match self {
            ModelKind::Additive => AdditiveOffset::ID,
            ModelKind::DelayVelocity => DelayVelocity::ID,
            ModelKind::Table => TableModel::ID,
        }
    }

    pub fn formula(&self) -> &'static str {
        match self {
            ModelKind::Additive => "y = quantize(mu_s + sum(params))",
            ModelKind::DelayVelocity => {
                "y = quantize(mu_s * velocity / reference_velocity - shift_per_decade * log10(delay))"
            }
            ModelKind::Table => "y = table_s[x]",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        builtin_models().iter().copied().find(|k| k.id() == id)
    }
}

pub fn builtin_models() -> &'static [ModelKind] {
    &[ModelKind::Additive, ModelKind::DelayVelocity, ModelKind::Table]
}

/// One set's virtual database `y = g(s, x)`.
#[derive(Clone, Debug)]
pub struct VirtualDb {
    set_id: u64,
    grid: Arc<ParamGrid>,
    model: Arc<dyn DisturbanceModel>,
    n_qubits: u32,
}

impl VirtualDb {
    /// Database over the smallest register covering the grid.
    pub fn new(set_id: u64, grid: Arc<ParamGrid>, model: Arc<dyn DisturbanceModel>) -> Result<Self> {
        let n = grid.required_qubits();
        Self::with_qubits(set_id, grid, model, n)
    }

    pub fn with_qubits(
        set_id: u64,
        grid: Arc<ParamGrid>,
        model: Arc<dyn DisturbanceModel>,
        n_qubits: u32,
    ) -> Result<Self> {
        qsim::check_register_size(n_qubits)?;
        if (1usize << n_qubits) < grid.total_points() {
            return Err(arg(format!(
                "{n_qubits} qubits cannot index {} grid points",
                grid.total_points()
            )));
        }
        if !model.declared_sets().contains(&set_id) {
            return Err(undeclared(model.model_id(), set_id));
        }
        Ok(Self {
            set_id,
            grid,
            model,
            n_qubits,
        })
    }

    pub fn set_id(&self) -> u64 {
        self.set_id
    }

    pub fn grid(&self) -> &ParamGrid {
        &self.grid
    }

    pub fn model(&self) -> &dyn DisturbanceModel {
        self.model.as_ref()
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn total_points(&self) -> usize {
        self.grid.total_points()
    }

    pub fn alphabet_size(&self) -> u64 {
        self.model.alphabet_size()
    }

    /// `g(s, x)`; padding indices give [`Symbol::reserved`].
    pub fn evaluate(&self, x: usize) -> Result<Symbol> {
        if x >= 1usize << self.n_qubits {
            return Err(arg(format!(
                "index {x} outside {}-qubit register",
                self.n_qubits
            )));
        }
        let alphabet = self.alphabet_size();
        if x >= self.grid.total_points() {
            return Ok(Symbol::reserved(alphabet));
        }
        let params = self.grid.index_to_params(x)?;
        let code = self.model.eval(
            self.set_id,
            GridPoint {
                index: x,
                params: &params,
            },
        )?;
        if code >= alphabet {
            return Err(Error::ModelContract {
                model: self.model.model_id().into(),
                reason: format!("code {code} at index {x} outside alphabet of size {alphabet}"),
            });
        }
        Ok(Symbol {
            code,
            alphabet_size: alphabet,
        })
    }

    fn check_observation(&self, r: Symbol) -> Result<()> {
        if r.alphabet_size() != self.alphabet_size() {
            return Err(arg(format!(
                "observation alphabet {} does not match the model alphabet {}",
                r.alphabet_size(),
                self.alphabet_size()
            )));
        }
        if r.is_reserved() {
            return Err(arg("the padding symbol is not a valid observation"));
        }
        Ok(())
    }

    /// Phase oracle marking every `x` with `g(s, x) = r`.
    pub fn match_oracle(&self, r: Symbol) -> Result<OracleSpec> {
        self.check_observation(r)?;
        let marks = (0..1usize << self.n_qubits)
            .map(|x| self.evaluate(x).map(|y| y == r))
            .collect::<Result<Vec<_>>>()?;
        OracleSpec::from_marks(self.n_qubits, marks)
    }

    /// Number of real (non-padding) records per symbol code.
    pub fn histogram(&self) -> Result<Vec<u64>> {
        let mut counts = vec![0u64; self.alphabet_size() as usize];
        for x in 0..self.grid.total_points() {
            counts[self.evaluate(x)?.code() as usize] += 1;
        }
        Ok(counts)
    }
}
