//! Quantum set separation by maximum-likelihood decisions over quantum counts.
//!
//! An observation `r` is classified into one of several sets. Each set `s`
//! owns a *virtual database* `y = g(s, x)`: every index `x` of an `n`-qubit
//! register selects a quantized parameter configuration of a disturbance
//! model, and `g` maps it to an output symbol. The likelihood `f(r|s)` is the
//! fraction of records equal to `r`, counted either classically or by quantum
//! counting (phase estimation over the Grover operator) on an exact
//! state-vector simulator. The decision is the argmax of `f(r|s)` (ML) or of
//! the Bayes posterior (MAP), with an explicit "badly prepared" verdict when
//! no set contains `r`.
//!
//! Module map:
//! - [`qsim`]: dense state vectors, gates, QFT, measurement
//! - [`grover`]: oracles, Grover iteration, iteration planning, search
//! - [`qcount`]: exact and quantum counting
//! - [`vdb`]: parameter grids, disturbance models, match oracles
//! - [`separator`]: likelihoods, ML/MAP decisions, the separation pipeline
//! - [`scenario`]: scenario documents, runner and result files

pub mod error;
pub mod grover;
pub mod qcount;
pub mod qsim;
pub mod scenario;
pub mod separator;
pub mod vdb;

pub use error::{Error, Finding, Result};
pub use grover::{GroverPlan, OracleSpec};
pub use qcount::{CountEstimate, CountMode, CountingDistribution};
pub use qsim::{MeasurementOutcome, StateVector};
pub use separator::{
    Decision, EstimationConfig, EstimationMode, LikelihoodEstimate, Priors, Rule,
    SeparationConfig, TiePolicy, Verdict,
};
pub use vdb::{ParamGrid, Symbol, VirtualDb};
