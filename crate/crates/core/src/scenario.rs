//! Scenario documents and the experiment runner behind the `qsep` binary.
//!
//! A scenario is a TOML document describing the shared parameter grid, one
//! disturbance model per set, the observations to classify and the
//! estimation settings. Field names are listed in `docs/format.md`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Finding, Result};
use crate::qcount::counting_register_size;
use crate::qsim::MAX_QUBITS;
use crate::separator::{
    pdf_curve, separate, Decision, EstimationConfig, EstimationMode, Priors, Rule,
    SeparationConfig, TiePolicy, DEFAULT_RELATIVE_ERROR, DEFAULT_REPEATS,
};
use crate::vdb::{
    AdditiveOffset, Axis, DelayVelocity, DisturbanceModel, ModelKind, ParamGrid, Quantizer,
    Symbol, TableModel, VirtualDb,
};

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub name: String,
    pub alphabet_size: u64,
    #[serde(default = "default_mode")]
    pub mode: EstimationMode,
    #[serde(default = "default_rule")]
    pub rule: Rule,
    /// Set id (as a string key) to prior probability.
    #[serde(default)]
    pub priors: Option<BTreeMap<String, f64>>,
    #[serde(default)]
    pub t_qubits: Option<u32>,
    #[serde(default)]
    pub repeats: Option<u32>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tie_policy: TiePolicy,
    #[serde(default)]
    pub observations: Vec<u64>,
    /// Emit per-set likelihood curves alongside the decisions.
    #[serde(default)]
    pub curves: bool,
    /// Symbols swept by the curves; the whole alphabet when absent.
    #[serde(default)]
    pub curve_symbols: Option<Vec<u64>>,
    pub grid: GridDoc,
    pub sets: Vec<SetDoc>,
}

fn default_mode() -> EstimationMode {
    EstimationMode::Exact
}

fn default_rule() -> Rule {
    Rule::Ml
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub axes: Vec<AxisDoc>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisDoc {
    pub name: String,
    #[serde(default)]
    pub unit: String,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub linspace: Option<RangeDoc>,
    #[serde(default)]
    pub logspace: Option<RangeDoc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeDoc {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetDoc {
    pub id: u64,
    #[serde(default)]
    pub mu: Option<f64>,
    pub model: String,
    #[serde(default)]
    pub params: ModelParamsDoc,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParamsDoc {
    #[serde(default)]
    pub origin: Option<f64>,
    #[serde(default)]
    pub bucket_width: Option<f64>,
    #[serde(default)]
    pub reference_velocity: Option<f64>,
    #[serde(default)]
    pub shift_per_decade: Option<f64>,
    #[serde(default)]
    pub entries: Option<Vec<u64>>,
    /// Lookup file, relative to the scenario document.
    #[serde(default)]
    pub file: Option<String>,
}

/// Command-line overrides applied on top of a scenario document.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub mode: Option<EstimationMode>,
    pub rule: Option<Rule>,
    pub repeats: Option<u32>,
    pub t_qubits: Option<u32>,
    pub seed: Option<u64>,
    pub tie_policy: Option<TiePolicy>,
}

impl Overrides {
    pub fn apply(&self, doc: &mut ScenarioDoc) {
        if let Some(m) = self.mode {
            doc.mode = m;
        }
        if let Some(r) = self.rule {
            doc.rule = r;
        }
        if let Some(r) = self.repeats {
            doc.repeats = Some(r);
        }
        if let Some(t) = self.t_qubits {
            doc.t_qubits = Some(t);
        }
        if let Some(s) = self.seed {
            doc.seed = Some(s);
        }
        if let Some(p) = self.tie_policy {
            doc.tie_policy = p;
        }
    }
}

impl ScenarioDoc {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Reads a document; returns it with the directory used to resolve
    /// relative table files.
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let doc = Self::parse(&text)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((doc, base))
    }
}

/// A validated, ready-to-run scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub alphabet_size: u64,
    pub dbs: Vec<VirtualDb>,
    pub observations: Vec<Symbol>,
    pub config: SeparationConfig,
    pub curves: bool,
    pub curve_symbols: Vec<Symbol>,
}

fn build_axis(doc: &AxisDoc, path: &str, findings: &mut Vec<Finding>) -> Option<Axis> {
    let given = [doc.values.is_some(), doc.linspace.is_some(), doc.logspace.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        findings.push(Finding::new(path, "give exactly one of `values`, `linspace`, `logspace`"));
        return None;
    }
    let built = if let Some(v) = &doc.values {
        Axis::new(&doc.name, &doc.unit, v.clone())
    } else if let Some(r) = doc.linspace {
        Axis::linspace(&doc.name, &doc.unit, r.start, r.stop, r.count)
    } else {
        let r = doc.logspace.expect("checked above");
        Axis::logspace(&doc.name, &doc.unit, r.start, r.stop, r.count)
    };
    built.map_err(|e| findings.push(Finding::new(path, e.to_string()))).ok()
}

fn quantizer_for(doc: &SetDoc, alphabet: u64, path: &str, findings: &mut Vec<Finding>) -> Option<Quantizer> {
    let origin = doc.params.origin.unwrap_or(0.0);
    let width = doc.params.bucket_width.unwrap_or(1.0);
    if !(width > 0.0 && width.is_finite()) {
        findings.push(Finding::new(format!("{path}.params.bucket_width"), "must be positive and finite"));
        return None;
    }
    if !origin.is_finite() {
        findings.push(Finding::new(format!("{path}.params.origin"), "must be finite"));
        return None;
    }
    Quantizer::new(origin, width, alphabet).ok()
}

fn require_mu(doc: &SetDoc, path: &str, findings: &mut Vec<Finding>) -> Option<f64> {
    match doc.mu {
        Some(mu) if mu.is_finite() => Some(mu),
        Some(_) => {
            findings.push(Finding::new(format!("{path}.mu"), "must be finite"));
            None
        }
        None => {
            findings.push(Finding::new(format!("{path}.mu"), "required by this model"));
            None
        }
    }
}

fn build_model(
    doc: &SetDoc,
    grid: Option<&ParamGrid>,
    alphabet: u64,
    base_dir: &Path,
    path: &str,
    findings: &mut Vec<Finding>,
) -> Option<Arc<dyn DisturbanceModel>> {
    let Some(kind) = ModelKind::from_id(&doc.model) else {
        let known: Vec<_> = crate::vdb::builtin_models().iter().map(|k| k.id()).collect();
        findings.push(Finding::new(
            format!("{path}.model"),
            format!("unknown model `{}` (known: {})", doc.model, known.join(", ")),
        ));
        return None;
    };
    match kind {
        ModelKind::Additive => {
            let q = quantizer_for(doc, alphabet, path, findings);
            let mu = require_mu(doc, path, findings);
            Some(Arc::new(AdditiveOffset::new(q?).with_source(doc.id, mu?)))
        }
        ModelKind::DelayVelocity => {
            let q = quantizer_for(doc, alphabet, path, findings);
            let mu = require_mu(doc, path, findings);
            if let Some(g) = grid {
                if g.axes().len() != 2 {
                    findings.push(Finding::new(
                        format!("{path}.model"),
                        "delay_velocity needs a grid with exactly two axes (delay, velocity)",
                    ));
                } else if g.axes()[0].values[0] <= 0.0 {
                    findings.push(Finding::new("grid.axes[0]", "delays must be positive"));
                }
            }
            let model = DelayVelocity::new(
                q?,
                doc.params.reference_velocity.unwrap_or(1.0),
                doc.params.shift_per_decade.unwrap_or(1.0),
            )
            .map_err(|e| findings.push(Finding::new(format!("{path}.params"), e.to_string())))
            .ok()?;
            Some(Arc::new(model.with_source(doc.id, mu?)))
        }
        ModelKind::Table => {
            let entries = match (&doc.params.entries, &doc.params.file) {
                (Some(e), None) => e.clone(),
                (None, Some(f)) => match TableModel::read_table(&base_dir.join(f)) {
                    Ok(e) => e,
                    Err(e) => {
                        findings.push(Finding::new(format!("{path}.params.file"), e.to_string()));
                        return None;
                    }
                },
                _ => {
                    findings.push(Finding::new(
                        format!("{path}.params"),
                        "table model needs exactly one of `entries`, `file`",
                    ));
                    return None;
                }
            };
            let mut ok = true;
            if let Some(g) = grid {
                if entries.len() != g.total_points() {
                    findings.push(Finding::new(
                        format!("{path}.params"),
                        format!(
                            "table has {} entries but the grid has {} points",
                            entries.len(),
                            g.total_points()
                        ),
                    ));
                    ok = false;
                }
            }
            if let Some((k, v)) = entries.iter().enumerate().find(|(_, &v)| v >= alphabet) {
                findings.push(Finding::new(
                    format!("{path}.params.entries[{k}]"),
                    format!("symbol {v} outside alphabet of size {alphabet}"),
                ));
                ok = false;
            }
            ok.then(|| Arc::new(TableModel::new(alphabet).with_table(doc.id, entries)) as Arc<dyn DisturbanceModel>)
        }
    }
}

fn symbols(codes: &[u64], alphabet: u64, path: &str, findings: &mut Vec<Finding>) -> Vec<Symbol> {
    codes
        .iter()
        .enumerate()
        .filter_map(|(k, &c)| {
            Symbol::new(c, alphabet)
                .map_err(|e| findings.push(Finding::new(format!("{path}[{k}]"), e.to_string())))
                .ok()
        })
        .collect()
}

/// Checks every constraint of a document and builds the scenario. All
/// violations are collected into one [`Error::Validation`].
pub fn build(doc: &ScenarioDoc, base_dir: &Path) -> Result<Scenario> {
    let mut findings = Vec::new();
    let f = &mut findings;

    if doc.name.trim().is_empty() {
        f.push(Finding::new("name", "must not be empty"));
    }
    if doc.alphabet_size == 0 {
        f.push(Finding::new("alphabet_size", "must be at least 1"));
    }
    let alphabet = doc.alphabet_size.max(1);

    if doc.grid.axes.is_empty() {
        f.push(Finding::new("grid.axes", "at least one axis is required"));
    }
    let axes: Vec<Option<Axis>> = doc
        .grid
        .axes
        .iter()
        .enumerate()
        .map(|(i, a)| build_axis(a, &format!("grid.axes[{i}]"), f))
        .collect();
    let grid = if !axes.is_empty() && axes.iter().all(Option::is_some) {
        match ParamGrid::new(axes.into_iter().flatten().collect()) {
            Ok(g) => Some(g),
            Err(e) => {
                f.push(Finding::new("grid", e.to_string()));
                None
            }
        }
    } else {
        None
    };

    if doc.sets.len() < 2 {
        f.push(Finding::new("sets", "at least two sets are required"));
    }
    let mut seen = BTreeSet::new();
    for (i, s) in doc.sets.iter().enumerate() {
        if !seen.insert(s.id) {
            f.push(Finding::new(format!("sets[{i}].id"), format!("duplicate set id {}", s.id)));
        }
    }
    let models: Vec<_> = doc
        .sets
        .iter()
        .enumerate()
        .map(|(i, s)| build_model(s, grid.as_ref(), alphabet, base_dir, &format!("sets[{i}]"), f))
        .collect();

    let observations = symbols(&doc.observations, alphabet, "observations", f);
    let curve_symbols = match &doc.curve_symbols {
        Some(c) if c.is_empty() => {
            f.push(Finding::new("curve_symbols", "must not be empty"));
            Vec::new()
        }
        Some(c) => symbols(c, alphabet, "curve_symbols", f),
        None => Symbol::alphabet(alphabet),
    };

    let priors = match &doc.priors {
        None => None,
        Some(raw) => {
            let mut map = BTreeMap::new();
            let mut keys_ok = true;
            for (k, &v) in raw {
                match k.parse::<u64>() {
                    Ok(id) => {
                        map.insert(id, v);
                    }
                    Err(_) => {
                        f.push(Finding::new(format!("priors.{k}"), "keys must be set ids"));
                        keys_ok = false;
                    }
                }
            }
            if keys_ok && map.keys().copied().collect::<BTreeSet<_>>() != seen {
                f.push(Finding::new("priors", "must name exactly the declared set ids"));
            }
            match Priors::new(map) {
                Ok(p) => Some(p),
                Err(e) => {
                    f.push(Finding::new("priors", e.to_string()));
                    None
                }
            }
        }
    };

    if doc.mode == EstimationMode::Quantum && doc.seed.is_none() {
        f.push(Finding::new("seed", "required in quantum mode"));
    }
    if doc.repeats == Some(0) {
        f.push(Finding::new("repeats", "must be at least 1"));
    }
    if doc.t_qubits == Some(0) {
        f.push(Finding::new("t_qubits", "must be at least 1"));
    }

    if !findings.is_empty() {
        return Err(Error::Validation(findings));
    }

    let grid = Arc::new(grid.expect("grid validated"));
    let n_qubits = grid.required_qubits();
    if n_qubits > MAX_QUBITS {
        return Err(Error::Resource {
            requested: n_qubits,
            limit: MAX_QUBITS,
        });
    }
    let dbs = doc
        .sets
        .iter()
        .zip(models)
        .map(|(s, m)| VirtualDb::new(s.id, grid.clone(), m.expect("model validated")))
        .collect::<Result<Vec<_>>>()?;

    let estimation = EstimationConfig {
        mode: doc.mode,
        t_qubits: doc.t_qubits,
        repeats: match doc.mode {
            EstimationMode::Exact => 1,
            EstimationMode::Quantum => doc.repeats.unwrap_or(DEFAULT_REPEATS),
        },
        seed: doc.seed.unwrap_or(0),
    };
    Ok(Scenario {
        name: doc.name.clone(),
        alphabet_size: alphabet,
        dbs,
        observations,
        config: SeparationConfig {
            estimation,
            rule: doc.rule,
            priors,
            tie_policy: doc.tie_policy,
        },
        curves: doc.curves,
        curve_symbols,
    })
}

/// Constraint findings for a document without running it (empty when valid).
pub fn validate(doc: &ScenarioDoc, base_dir: &Path) -> Vec<Finding> {
    match build(doc, base_dir) {
        Ok(_) => Vec::new(),
        Err(Error::Validation(findings)) => findings,
        Err(e) => vec![Finding::new("", e.to_string())],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetInfo {
    pub set_id: u64,
    pub model: String,
    pub total_points: u64,
    pub n_qubits: u32,
    /// Counting-register size used in quantum mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_qubits: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservationRecord {
    pub observation: u64,
    pub decision: Decision,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub symbol: u64,
    pub m_hat: f64,
    pub value: f64,
    pub error_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetCurve {
    pub set_id: u64,
    pub points: Vec<CurvePoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub mode: EstimationMode,
    pub rule: Rule,
    pub tie_policy: TiePolicy,
    pub repeats: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub alphabet_size: u64,
    pub sets: Vec<SetInfo>,
    pub decisions: Vec<ObservationRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curves: Option<Vec<SetCurve>>,
    /// Wall-clock time; kept out of the written files so reruns are
    /// byte-identical.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Scenario {
    fn t_qubits_for(&self, db: &VirtualDb) -> Result<Option<u32>> {
        match self.config.estimation.mode {
            EstimationMode::Exact => Ok(None),
            EstimationMode::Quantum => {
                let t = match self.config.estimation.t_qubits {
                    Some(t) => t,
                    None => counting_register_size(db.n_qubits(), DEFAULT_RELATIVE_ERROR)?,
                };
                if db.n_qubits() + t > MAX_QUBITS {
                    return Err(Error::Resource {
                        requested: db.n_qubits() + t,
                        limit: MAX_QUBITS,
                    });
                }
                Ok(Some(t))
            }
        }
    }

    fn set_infos(&self) -> Result<Vec<SetInfo>> {
        self.dbs
            .iter()
            .map(|db| {
                Ok(SetInfo {
                    set_id: db.set_id(),
                    model: db.model().model_id().to_string(),
                    total_points: db.total_points() as u64,
                    n_qubits: db.n_qubits(),
                    t_qubits: self.t_qubits_for(db)?,
                })
            })
            .collect()
    }

    fn empty_report(&self) -> Result<RunReport> {
        let quantum = self.config.estimation.mode == EstimationMode::Quantum;
        Ok(RunReport {
            scenario: self.name.clone(),
            mode: self.config.estimation.mode,
            rule: self.config.rule,
            tie_policy: self.config.tie_policy,
            repeats: self.config.estimation.repeats,
            seed: quantum.then_some(self.config.estimation.seed),
            alphabet_size: self.alphabet_size,
            sets: self.set_infos()?,
            decisions: Vec::new(),
            curves: None,
            elapsed: Duration::ZERO,
        })
    }

    /// Decision for observation number `k`; its shots use seeds derived from
    /// the scenario seed and `k`.
    pub fn decide(&self, k: usize) -> Result<Decision> {
        let mut config = self.config.clone();
        config.estimation = config.estimation.reseeded(&[k as u64]);
        separate(&self.dbs, self.observations[k], &config)
    }

    pub fn compute_curves(&self) -> Result<Vec<SetCurve>> {
        self.dbs
            .iter()
            .map(|db| {
                let points = pdf_curve(db, &self.curve_symbols, &self.config.estimation)?
                    .into_iter()
                    .map(|(s, e)| CurvePoint {
                        symbol: s.code(),
                        m_hat: e.m_hat,
                        value: e.value,
                        error_bound: e.error_bound,
                    })
                    .collect();
                Ok(SetCurve {
                    set_id: db.set_id(),
                    points,
                })
            })
            .collect()
    }

    /// Classifies every observation in order; adds curves when requested.
    pub fn run(&self) -> Result<RunReport> {
        let start = Instant::now();
        let mut report = self.empty_report()?;
        report.decisions = (0..self.observations.len())
            .map(|k| {
                Ok(ObservationRecord {
                    observation: self.observations[k].code(),
                    decision: self.decide(k)?,
                })
            })
            .collect::<Result<_>>()?;
        if self.curves {
            report.curves = Some(self.compute_curves()?);
        }
        report.elapsed = start.elapsed();
        Ok(report)
    }

    /// Curves only, no decisions.
    pub fn run_curves(&self) -> Result<RunReport> {
        let start = Instant::now();
        let mut report = self.empty_report()?;
        report.curves = Some(self.compute_curves()?);
        report.elapsed = start.elapsed();
        Ok(report)
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Io {
        path: path.display().to_string(),
        source: std::io::Error::other(e.to_string()),
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Writes `results.json`, `decisions.csv` (when there are decisions) and
    /// `curve_set<id>.csv` per set (when curves were computed) into `dir`.
    /// Returns the written paths.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let mut written = Vec::new();

        let json = dir.join("results.json");
        fs::write(&json, self.to_json()).map_err(io_err(&json))?;
        written.push(json);

        if !self.decisions.is_empty() {
            let path = dir.join("decisions.csv");
            let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
            let mut header: Vec<String> = [
                "observation",
                "verdict",
                "assigned_set",
                "tie_sets",
                "within_error_bound",
                "tie_broken",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let map = self.rule == Rule::Map;
            for s in &self.sets {
                header.push(format!("f_{}", s.set_id));
                header.push(format!("m_hat_{}", s.set_id));
                header.push(format!("error_bound_{}", s.set_id));
                if map {
                    header.push(format!("posterior_{}", s.set_id));
                }
            }
            w.write_record(&header).map_err(csv_err(&path))?;
            for rec in &self.decisions {
                let d = &rec.decision;
                let (verdict, assigned, ties) = match &d.verdict {
                    crate::separator::Verdict::Assigned { set_id } => ("assigned", set_id.to_string(), String::new()),
                    crate::separator::Verdict::Tie { set_ids } => (
                        "tie",
                        String::new(),
                        set_ids.iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
                    ),
                    crate::separator::Verdict::BadlyPrepared => ("badly_prepared", String::new(), String::new()),
                };
                let mut row = vec![
                    rec.observation.to_string(),
                    verdict.to_string(),
                    assigned,
                    ties,
                    d.within_error_bound.to_string(),
                    d.tie_broken.to_string(),
                ];
                for s in &self.sets {
                    let e = d.likelihoods.iter().find(|e| e.set_id == s.set_id);
                    row.push(e.map(|e| fmt_f64(e.value)).unwrap_or_default());
                    row.push(e.map(|e| fmt_f64(e.m_hat)).unwrap_or_default());
                    row.push(e.map(|e| fmt_f64(e.error_bound)).unwrap_or_default());
                    if map {
                        let p = d.posteriors.as_ref().and_then(|p| p.get(&s.set_id));
                        row.push(p.map(|&p| fmt_f64(p)).unwrap_or_default());
                    }
                }
                w.write_record(&row).map_err(csv_err(&path))?;
            }
            w.flush().map_err(io_err(&path))?;
            written.push(path);
        }

        for curve in self.curves.iter().flatten() {
            let path = dir.join(format!("curve_set{}.csv", curve.set_id));
            let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
            w.write_record(["symbol", "m_hat", "value", "error_bound"])
                .map_err(csv_err(&path))?;
            for p in &curve.points {
                w.write_record([
                    p.symbol.to_string(),
                    fmt_f64(p.m_hat),
                    fmt_f64(p.value),
                    fmt_f64(p.error_bound),
                ])
                .map_err(csv_err(&path))?;
            }
            w.flush().map_err(io_err(&path))?;
            written.push(path);
        }
        Ok(written)
    }
}
