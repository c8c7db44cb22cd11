//! Likelihood estimation and the set-separation decision rules.
//!
//! The likelihood of observation `r` under set `s` is the fraction of the
//! set's database records equal to `r`:
//!
//! `f(r|s) = #{x : g(s, x) = r} / #{x}`
//!
//! where `#{x}` counts real grid points only (padding excluded). The count is
//! obtained either by enumeration or by quantum counting.
//!
//! Decision table for two sets, extended to `K` sets by argmax:
//!
//! | f(r\|s0) | f(r\|s1) | verdict            |
//! |----------|----------|--------------------|
//! | 0        | 0        | badly prepared     |
//! | 0        | ≠ 0      | set 1              |
//! | ≠ 0      | 0        | set 0              |
//! | >        |          | set 0              |
//! | <        |          | set 1              |
//! | = ≠ 0    |          | tie (reported)     |

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::qcount::{self, count_error_bound, CountingDistribution};
use crate::vdb::{Symbol, VirtualDb};

/// Counting-register precision used when no `t_qubits` is given.
pub const DEFAULT_RELATIVE_ERROR: f64 = 0.125;

/// Median-of-`repeats` default for quantum estimates.
pub const DEFAULT_REPEATS: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimationMode {
    Exact,
    Quantum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Ml,
    Map,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// Keep [`Verdict::Tie`].
    #[default]
    Report,
    /// Resolve ties to the smallest tied set id.
    LowestSetId,
}

/// How a likelihood is estimated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimationConfig {
    pub mode: EstimationMode,
    /// Counting-register size; `None` uses
    /// `counting_register_size(n, DEFAULT_RELATIVE_ERROR)`.
    pub t_qubits: Option<u32>,
    pub repeats: u32,
    pub seed: u64,
}

impl EstimationConfig {
    pub fn exact() -> Self {
        Self {
            mode: EstimationMode::Exact,
            t_qubits: None,
            repeats: 1,
            seed: 0,
        }
    }

    pub fn quantum(seed: u64) -> Self {
        Self {
            mode: EstimationMode::Quantum,
            t_qubits: None,
            repeats: DEFAULT_REPEATS,
            seed,
        }
    }

    pub fn with_t_qubits(mut self, t: u32) -> Self {
        self.t_qubits = Some(t);
        self
    }

    pub fn with_repeats(mut self, repeats: u32) -> Self {
        self.repeats = repeats;
        self
    }

    pub(crate) fn reseeded(mut self, parts: &[u64]) -> Self {
        self.seed = derive_seed(self.seed, parts);
        self
    }
}

/// Mixes `parts` into `base` (SplitMix64 finalizer), giving independent
/// per-set, per-shot and per-observation seeds from one user seed.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    parts.iter().fold(mix(base), |h, &p| mix(h ^ mix(p)))
}

/// `f(r|s)` for one set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LikelihoodEstimate {
    pub set_id: u64,
    /// `m_hat / denominator`.
    pub value: f64,
    pub m_hat: f64,
    /// Number of real database records.
    pub denominator: u64,
    pub mode: EstimationMode,
    /// Bound on `|value − f(r|s)|`; zero in exact mode.
    pub error_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_qubits: Option<u32>,
}

impl LikelihoodEstimate {
    pub fn exact(set_id: u64, count: u64, denominator: u64) -> Result<Self> {
        if denominator == 0 || count > denominator {
            return Err(arg(format!("invalid count {count}/{denominator}")));
        }
        Ok(Self {
            set_id,
            value: count as f64 / denominator as f64,
            m_hat: count as f64,
            denominator,
            mode: EstimationMode::Exact,
            error_bound: 0.0,
            t_qubits: None,
        })
    }

    /// Quantum-mode estimate; `count_error_bound` is on the count, not the ratio.
    pub fn quantum(set_id: u64, m_hat: f64, denominator: u64, count_error_bound: f64, t_qubits: u32) -> Result<Self> {
        if denominator == 0 || !(m_hat >= 0.0 && m_hat <= denominator as f64) {
            return Err(arg(format!("invalid count {m_hat}/{denominator}")));
        }
        Ok(Self {
            set_id,
            value: m_hat / denominator as f64,
            m_hat,
            denominator,
            mode: EstimationMode::Quantum,
            error_bound: count_error_bound / denominator as f64,
            t_qubits: Some(t_qubits),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.m_hat == 0.0
    }
}

/// Orders two likelihoods. Two exact estimates are compared as exact
/// rationals; anything involving a quantum estimate compares point values.
fn cmp_likelihood(a: &LikelihoodEstimate, b: &LikelihoodEstimate) -> Ordering {
    if a.mode == EstimationMode::Exact && b.mode == EstimationMode::Exact {
        let lhs = a.m_hat as u128 * b.denominator as u128;
        let rhs = b.m_hat as u128 * a.denominator as u128;
        lhs.cmp(&rhs)
    } else {
        a.value.total_cmp(&b.value)
    }
}

/// Estimates `f(r|s)` for `db`'s set.
///
/// Quantum mode takes the median `m_hat` of `repeats` shots, each sampled with
/// a seed derived from `config.seed`, the set id and the shot number. The
/// median is clipped to the number of real records, since padding indices can
/// never match.
pub fn estimate_likelihood(db: &VirtualDb, r: Symbol, config: &EstimationConfig) -> Result<LikelihoodEstimate> {
    let oracle = db.match_oracle(r)?;
    let denominator = db.total_points() as u64;
    match config.mode {
        EstimationMode::Exact => {
            let count = qcount::exact_count(&oracle);
            LikelihoodEstimate::exact(db.set_id(), count.m_hat as u64, denominator)
        }
        EstimationMode::Quantum => {
            if config.repeats == 0 {
                return Err(arg("repeats must be at least 1"));
            }
            let t = match config.t_qubits {
                Some(t) => t,
                None => qcount::counting_register_size(db.n_qubits(), DEFAULT_RELATIVE_ERROR)?,
            };
            let dist = CountingDistribution::prepare(&oracle, t)?;
            let shots: Vec<f64> = (0..config.repeats as u64)
                .map(|i| dist.sample(derive_seed(config.seed, &[db.set_id(), i])).m_hat)
                .collect();
            let m_hat = median(shots).min(denominator as f64);
            let bound = count_error_bound(m_hat, 1u64 << db.n_qubits(), t);
            LikelihoodEstimate::quantum(db.set_id(), m_hat, denominator, bound, t)
        }
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Prior probabilities per set id.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Priors(BTreeMap<u64, f64>);

impl Priors {
    pub fn new(p: BTreeMap<u64, f64>) -> Result<Self> {
        if p.values().any(|&v| !(v.is_finite() && v >= 0.0)) {
            return Err(arg("priors must be finite and nonnegative"));
        }
        let total: f64 = p.values().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(arg(format!("priors sum to {total}, not 1")));
        }
        Ok(Self(p))
    }

    pub fn uniform(set_ids: &[u64]) -> Result<Self> {
        if set_ids.is_empty() {
            return Err(arg("no sets to assign priors to"));
        }
        let p = 1.0 / set_ids.len() as f64;
        let map: BTreeMap<u64, f64> = set_ids.iter().map(|&s| (s, p)).collect();
        Self::new(map)
    }

    pub fn get(&self, set_id: u64) -> Option<f64> {
        self.0.get(&set_id).copied()
    }

    pub fn as_map(&self) -> &BTreeMap<u64, f64> {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Assigned { set_id: u64 },
    Tie { set_ids: Vec<u64> },
    BadlyPrepared,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Assigned { set_id } => write!(f, "set {set_id}"),
            Verdict::Tie { set_ids } => {
                let ids: Vec<String> = set_ids.iter().map(|s| s.to_string()).collect();
                write!(f, "tie {}", ids.join("/"))
            }
            Verdict::BadlyPrepared => f.write_str("badly prepared"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub rule: Rule,
    pub likelihoods: Vec<LikelihoodEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub posteriors: Option<BTreeMap<u64, f64>>,
    /// Set when a winning quantum estimate is within the combined error
    /// bounds of another set's estimate.
    pub within_error_bound: bool,
    /// Set when a tie was resolved by [`TiePolicy::LowestSetId`].
    pub tie_broken: bool,
}

impl Decision {
    pub fn assigned_set(&self) -> Option<u64> {
        match self.verdict {
            Verdict::Assigned { set_id } => Some(set_id),
            _ => None,
        }
    }

    pub fn apply_tie_policy(mut self, policy: TiePolicy) -> Self {
        if let (TiePolicy::LowestSetId, Verdict::Tie { set_ids }) = (policy, &self.verdict) {
            let set_id = *set_ids.iter().min().expect("a tie names at least two sets");
            self.verdict = Verdict::Assigned { set_id };
            self.tie_broken = true;
        }
        self
    }
}

fn check_estimates(estimates: &[LikelihoodEstimate]) -> Result<()> {
    if estimates.len() < 2 {
        return Err(arg("a decision needs likelihoods for at least two sets"));
    }
    for (i, e) in estimates.iter().enumerate() {
        if estimates[..i].iter().any(|o| o.set_id == e.set_id) {
            return Err(arg(format!("duplicate set id {}", e.set_id)));
        }
    }
    Ok(())
}

/// Indices of the maxima of `estimates` under `cmp`.
fn argmax_by<F>(n: usize, cmp: F) -> Vec<usize>
where
    F: Fn(usize, usize) -> Ordering,
{
    let mut best = 0;
    for i in 1..n {
        if cmp(i, best) == Ordering::Greater {
            best = i;
        }
    }
    (0..n).filter(|&i| cmp(i, best) == Ordering::Equal).collect()
}

fn verdict_from(estimates: &[LikelihoodEstimate], winners: &[usize]) -> Verdict {
    if let [only] = winners {
        Verdict::Assigned {
            set_id: estimates[*only].set_id,
        }
    } else {
        let mut set_ids: Vec<u64> = winners.iter().map(|&i| estimates[i].set_id).collect();
        set_ids.sort_unstable();
        Verdict::Tie { set_ids }
    }
}

fn overlaps(estimates: &[LikelihoodEstimate], winners: &[usize]) -> bool {
    winners.iter().any(|&w| {
        let a = &estimates[w];
        estimates.iter().enumerate().any(|(i, b)| {
            !winners.contains(&i)
                && (a.mode == EstimationMode::Quantum || b.mode == EstimationMode::Quantum)
                && (a.value - b.value).abs() <= a.error_bound + b.error_bound
        })
    })
}

/// Maximum-likelihood decision.
pub fn ml_decide(estimates: &[LikelihoodEstimate]) -> Result<Decision> {
    check_estimates(estimates)?;
    if estimates.iter().all(LikelihoodEstimate::is_zero) {
        return Ok(Decision {
            verdict: Verdict::BadlyPrepared,
            rule: Rule::Ml,
            likelihoods: estimates.to_vec(),
            posteriors: None,
            within_error_bound: false,
            tie_broken: false,
        });
    }
    let winners = argmax_by(estimates.len(), |i, j| cmp_likelihood(&estimates[i], &estimates[j]));
    Ok(Decision {
        verdict: verdict_from(estimates, &winners),
        rule: Rule::Ml,
        likelihoods: estimates.to_vec(),
        posteriors: None,
        within_error_bound: overlaps(estimates, &winners),
        tie_broken: false,
    })
}

/// Maximum a-posteriori decision with posteriors from Bayes' rule:
/// `P(s|r) = f(r|s)·P(s) / Σ_i f(r|i)·P(i)`.
pub fn map_decide(estimates: &[LikelihoodEstimate], priors: &Priors) -> Result<Decision> {
    check_estimates(estimates)?;
    if priors.as_map().len() != estimates.len()
        || estimates.iter().any(|e| priors.get(e.set_id).is_none())
    {
        return Err(arg("priors must cover exactly the estimated sets"));
    }
    if estimates.iter().all(LikelihoodEstimate::is_zero) {
        return Ok(Decision {
            verdict: Verdict::BadlyPrepared,
            rule: Rule::Map,
            likelihoods: estimates.to_vec(),
            posteriors: None,
            within_error_bound: false,
            tie_broken: false,
        });
    }
    let prior: Vec<f64> = estimates
        .iter()
        .map(|e| priors.get(e.set_id).unwrap_or(0.0))
        .collect();
    let joint: Vec<f64> = estimates.iter().zip(&prior).map(|(e, p)| e.value * p).collect();
    let evidence: f64 = joint.iter().sum();
    if evidence == 0.0 {
        return Err(arg("every set with nonzero likelihood has zero prior"));
    }
    let posteriors = estimates
        .iter()
        .zip(&joint)
        .map(|(e, j)| (e.set_id, j / evidence))
        .collect();
    // equal priors cancel, so those pairs are ordered by likelihood alone
    let winners = argmax_by(estimates.len(), |i, j| {
        if prior[i] == prior[j] {
            if prior[i] == 0.0 {
                Ordering::Equal
            } else {
                cmp_likelihood(&estimates[i], &estimates[j])
            }
        } else {
            joint[i].total_cmp(&joint[j])
        }
    });
    Ok(Decision {
        verdict: verdict_from(estimates, &winners),
        rule: Rule::Map,
        likelihoods: estimates.to_vec(),
        posteriors: Some(posteriors),
        within_error_bound: overlaps(estimates, &winners),
        tie_broken: false,
    })
}

/// Everything [`separate`] needs besides the databases and the observation.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationConfig {
    pub estimation: EstimationConfig,
    pub rule: Rule,
    /// Used by [`Rule::Map`]; uniform when absent.
    pub priors: Option<Priors>,
    pub tie_policy: TiePolicy,
}

impl SeparationConfig {
    pub fn exact_ml() -> Self {
        Self {
            estimation: EstimationConfig::exact(),
            rule: Rule::Ml,
            priors: None,
            tie_policy: TiePolicy::Report,
        }
    }
}

/// Estimates `f(r|s)` for every database and applies the configured rule.
pub fn separate(dbs: &[VirtualDb], r: Symbol, config: &SeparationConfig) -> Result<Decision> {
    if dbs.is_empty() {
        return Err(arg("no databases to separate against"));
    }
    let estimates = dbs
        .iter()
        .map(|db| estimate_likelihood(db, r, &config.estimation))
        .collect::<Result<Vec<_>>>()?;
    let decision = match config.rule {
        Rule::Ml => ml_decide(&estimates)?,
        Rule::Map => {
            let uniform;
            let priors = match &config.priors {
                Some(p) => p,
                None => {
                    let ids: Vec<u64> = dbs.iter().map(VirtualDb::set_id).collect();
                    uniform = Priors::uniform(&ids)?;
                    &uniform
                }
            };
            map_decide(&estimates, priors)?
        }
    };
    Ok(decision.apply_tie_policy(config.tie_policy))
}

/// `f(r|s)` for each of `symbols`; the data behind a per-set density plot.
pub fn pdf_curve(db: &VirtualDb, symbols: &[Symbol], config: &EstimationConfig) -> Result<Vec<(Symbol, LikelihoodEstimate)>> {
    if symbols.is_empty() {
        return Err(arg("no symbols to evaluate"));
    }
    symbols
        .iter()
        .map(|&r| {
            let cfg = config.reseeded(&[r.code()]);
            estimate_likelihood(db, r, &cfg).map(|e| (r, e))
        })
        .collect()
}
