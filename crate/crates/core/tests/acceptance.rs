//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p qsep --test acceptance -- --nocapture --test-threads 1`
//! to see them in order.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsep::grover::{grover_iteration, marked_probability, OracleSpec};
use qsep::qcount::{counting_register_size, exact_count, CountingDistribution};
use qsep::qsim::{Gate, StateVector};
use qsep::scenario::{self, ScenarioDoc};
use qsep::separator::{
    map_decide, ml_decide, pdf_curve, separate, EstimationConfig, LikelihoodEstimate, Priors,
    SeparationConfig, Verdict,
};
use qsep::vdb::{Axis, DelayVelocity, ParamGrid, Quantizer, Symbol, VirtualDb};

use common::{classical_verdict, random_db_set, scenarios_dir};

fn report(id: u32, title: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {title} :: {detail}");
}

/// Closed form written out independently of the library.
fn closed_form(n: u32, m: u64, k: u64) -> f64 {
    let theta = ((m as f64) / (1u64 << n) as f64).sqrt().asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

#[test]
fn criterion_1_grover_closed_form() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut cases = 0u64;
    for n in 2..=10u32 {
        let dim = 1usize << n;
        let k_max = (PI / 4.0 * (dim as f64).sqrt()).ceil() as u64;
        let mut order: Vec<usize> = (0..dim).collect();
        for m in 1..=dim {
            order.shuffle(&mut rng);
            let oracle = OracleSpec::from_indices(n, &order[..m]).unwrap();
            let mut state = StateVector::init_uniform(n).unwrap();
            for k in 0..=k_max {
                let sim = marked_probability(&state, &oracle).unwrap();
                worst = worst.max((sim - closed_form(n, m as u64, k)).abs());
                cases += 1;
                grover_iteration(&mut state, &oracle).unwrap();
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-10 && elapsed < Duration::from_secs(120);
    report(
        1,
        "Grover marked probability = sin²((2k+1)θ) within 1e-10",
        pass,
        format!("{cases} (n,M,k) cases, max deviation {worst:.2e}, {:.2}s", elapsed.as_secs_f64()),
    );
    assert!(pass);
}

#[test]
fn criterion_2_counting_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let runs = 500;
    let (mut single_ok, mut median_ok, mut exact_ok) = (0, 0, 0);
    for i in 0..runs {
        let n = 5 + (i % 4) as u32;
        let density: f64 = match i % 25 {
            0 => 0.0,
            1 => 1.0,
            _ => rng.gen(),
        };
        let flags: Vec<bool> = (0..1usize << n).map(|_| rng.gen_bool(density)).collect();
        let true_m = flags.iter().filter(|&&f| f).count() as f64;
        let oracle = OracleSpec::from_predicate(n, |x| flags[x]).unwrap();

        if exact_count(&oracle).m_hat == true_m {
            exact_ok += 1;
        }

        let t = counting_register_size(n, 0.125).unwrap();
        let dist = CountingDistribution::prepare(&oracle, t).unwrap();
        let base: u64 = rng.gen();
        let single = dist.sample(base);
        if (single.m_hat - true_m).abs() <= single.error_bound {
            single_ok += 1;
        }
        let mut shots: Vec<f64> = (1..=5).map(|j| dist.sample(base.wrapping_add(j)).m_hat).collect();
        shots.sort_by(f64::total_cmp);
        let median = shots[2];
        let bound = qsep::qcount::count_error_bound(median, 1 << n, t);
        if (median - true_m).abs() <= bound {
            median_ok += 1;
        }
    }
    let single_rate = single_ok as f64 / runs as f64;
    let median_rate = median_ok as f64 / runs as f64;
    let pass = single_rate >= 0.81 && median_rate >= 0.95 && exact_ok == runs;
    report(
        2,
        "quantum counting within error bound (single >= 81%, median-of-5 >= 95%), exact = enumeration",
        pass,
        format!("single {single_rate:.3}, median {median_rate:.3}, exact {exact_ok}/{runs}"),
    );
    assert!(pass);
}

#[test]
fn criterion_3_decision_table() {
    let e = |s, c| LikelihoodEstimate::exact(s, c, 16).unwrap();
    let rows = [
        ("f0=0, f1=0 -> badly prepared", 0, 0, Verdict::BadlyPrepared),
        ("f0=0, f1!=0 -> set 1", 0, 4, Verdict::Assigned { set_id: 1 }),
        ("f0!=0, f1=0 -> set 0", 4, 0, Verdict::Assigned { set_id: 0 }),
        ("f0>f1 -> set 0", 6, 2, Verdict::Assigned { set_id: 0 }),
        ("f0<f1 -> set 1", 2, 6, Verdict::Assigned { set_id: 1 }),
        ("f0=f1!=0 -> tie (extension)", 3, 3, Verdict::Tie { set_ids: vec![0, 1] }),
    ];
    let mut all = true;
    for (label, f0, f1, expected) in rows {
        let got = ml_decide(&[e(0, f0), e(1, f1)]).unwrap().verdict;
        let ok = got == expected;
        all &= ok;
        report(3, label, ok, format!("{got:?}"));
    }
    assert!(all);
}

#[test]
fn criterion_4_end_to_end_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let scenarios = 60;
    let mut checked = 0;
    let mut mismatches = 0;
    for _ in 0..scenarios {
        let (dbs, alphabet) = random_db_set(&mut rng, 10);
        assert!(dbs.iter().all(|db| db.n_qubits() <= 10));
        for _ in 0..8 {
            let r = Symbol::new(rng.gen_range(0..alphabet), alphabet).unwrap();
            let got = separate(&dbs, r, &SeparationConfig::exact_ml()).unwrap().verdict;
            if got != classical_verdict(&dbs, r) {
                mismatches += 1;
            }
            checked += 1;
        }
    }
    let pass = mismatches == 0;
    report(
        4,
        "exact-mode separate = classical enumerate-and-compare on random scenarios",
        pass,
        format!("{scenarios} scenarios, {checked} observations, {mismatches} mismatches"),
    );
    assert!(pass);
}

#[test]
fn criterion_5_normalization() {
    let mut worst: f64 = 0.0;
    let mut curves = 0;
    for name in ["disjoint", "intersection", "intersection_quantum", "delay_velocity"] {
        let path = scenarios_dir().join(format!("{name}.toml"));
        let (doc, base) = ScenarioDoc::load(&path).unwrap();
        let s = scenario::build(&doc, &base).unwrap();
        for db in &s.dbs {
            let curve = pdf_curve(db, &Symbol::alphabet(s.alphabet_size), &EstimationConfig::exact()).unwrap();
            let total: f64 = curve.iter().map(|(_, e)| e.value).sum();
            worst = worst.max((total - 1.0).abs());
            curves += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut models = 0;
    while models < 100 {
        let (dbs, alphabet) = random_db_set(&mut rng, 8);
        for db in dbs.iter().take(100 - models) {
            let curve = pdf_curve(db, &Symbol::alphabet(alphabet), &EstimationConfig::exact()).unwrap();
            let total: f64 = curve.iter().map(|(_, e)| e.value).sum();
            worst = worst.max((total - 1.0).abs());
            models += 1;
        }
    }
    let pass = worst <= 1e-12;
    report(
        5,
        "exact pdf curve over the full alphabet sums to 1 within 1e-12",
        pass,
        format!("{curves} bundled curves + {models} random models, max deviation {worst:.2e}"),
    );
    assert!(pass);
}

fn random_estimates(rng: &mut ChaCha8Rng) -> Vec<LikelihoodEstimate> {
    let k = rng.gen_range(2..=5u64);
    let quantum = rng.gen_bool(0.4);
    let denom = rng.gen_range(1..=64u64);
    let pool: Vec<u64> = (0..3).map(|_| rng.gen_range(0..=denom)).collect();
    (0..k)
        .map(|s| {
            // draw from a small pool so zeros and ties are frequent
            let c = if rng.gen_bool(0.2) { 0 } else { pool[rng.gen_range(0..3)] };
            if quantum {
                let m = c as f64 * rng.gen_range(0.9..1.0);
                LikelihoodEstimate::quantum(s, m, denom, 0.5, 8).unwrap()
            } else {
                LikelihoodEstimate::exact(s, c, denom).unwrap()
            }
        })
        .collect()
}

#[test]
fn criterion_6_map_ml_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let trials = 10_000;
    let mut disagreements = 0;
    let mut worst_sum: f64 = 0.0;
    for _ in 0..trials {
        let est = random_estimates(&mut rng);
        let ids: Vec<u64> = est.iter().map(|e| e.set_id).collect();
        let uniform = Priors::uniform(&ids).unwrap();
        let ml = ml_decide(&est).unwrap();
        let map = map_decide(&est, &uniform).unwrap();
        if ml.verdict != map.verdict {
            disagreements += 1;
        }
        // also check posteriors under random priors
        let raw: Vec<f64> = ids.iter().map(|_| rng.gen_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let mut p: BTreeMap<u64, f64> = ids.iter().zip(&raw).map(|(&s, &w)| (s, w / total)).collect();
        let drift = 1.0 - p.values().sum::<f64>();
        *p.get_mut(&ids[0]).unwrap() += drift;
        let priors = Priors::new(p).unwrap();
        for d in [map, map_decide(&est, &priors).unwrap()] {
            if est.iter().any(|e| !e.is_zero()) {
                let s: f64 = d.posteriors.as_ref().unwrap().values().sum();
                worst_sum = worst_sum.max((s - 1.0).abs());
            }
        }
    }
    let pass = disagreements == 0 && worst_sum <= 1e-12;
    report(
        6,
        "uniform-prior MAP = ML; posteriors sum to 1 within 1e-12",
        pass,
        format!("{trials} vectors, {disagreements} disagreements, max |Σ posterior − 1| {worst_sum:.2e}"),
    );
    assert!(pass);
}

fn random_gate(rng: &mut ChaCha8Rng, n: u32) -> Gate {
    let q = rng.gen_range(0..n);
    match rng.gen_range(0..10) {
        0 => Gate::H(q),
        1 => Gate::X(q),
        2 => Gate::Z(q),
        3 => Gate::Phase(q, rng.gen_range(-PI..PI)),
        4 if n > 1 => {
            let mut t = rng.gen_range(0..n);
            while t == q {
                t = rng.gen_range(0..n);
            }
            Gate::ControlledPhase { control: q, target: t, angle: rng.gen_range(-PI..PI) }
        }
        5 => Gate::Swap(q, rng.gen_range(0..n)),
        6 => {
            let dim = 1usize << n;
            Gate::PhaseOracle((0..rng.gen_range(0..=dim)).map(|_| rng.gen_range(0..dim)).collect())
        }
        7 => Gate::Diffusion,
        8 => {
            let mut t: Vec<u32> = (0..n).collect();
            t.shuffle(rng);
            t.truncate(rng.gen_range(1..=n as usize));
            Gate::Qft(t)
        }
        _ => {
            let mut t: Vec<u32> = (0..n).collect();
            t.shuffle(rng);
            t.truncate(rng.gen_range(1..=n as usize));
            Gate::InverseQft(t)
        }
    }
}

fn random_state(rng: &mut ChaCha8Rng, n: u32) -> StateVector {
    let mut amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    StateVector::from_amplitudes(amps).unwrap()
}

#[test]
fn criterion_7_simulator_hygiene() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_norm: f64 = 0.0;
    let sequences = 10_000;
    for _ in 0..sequences {
        let n = rng.gen_range(1..=6);
        let mut state = if rng.gen_bool(0.5) {
            random_state(&mut rng, n)
        } else {
            StateVector::init_uniform(n).unwrap()
        };
        for _ in 0..rng.gen_range(1..=20) {
            state.apply(&random_gate(&mut rng, n)).unwrap();
            worst_norm = worst_norm.max((state.norm_sqr() - 1.0).abs());
        }
    }

    let mut worst_qft: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let base = random_state(&mut rng, n);
        let mut targets: Vec<u32> = (0..n).collect();
        targets.shuffle(&mut rng);
        targets.truncate(rng.gen_range(1..=n as usize));
        let mut s = base.clone();
        s.qft(&targets).unwrap();
        s.inverse_qft(&targets).unwrap();
        for (a, b) in s.amplitudes().iter().zip(base.amplitudes()) {
            worst_qft = worst_qft.max((a - b).norm());
        }
    }

    let s = random_state(&mut rng, 6);
    let oracle = OracleSpec::from_indices(6, &[1, 4, 9, 33]).unwrap();
    let dist_a = CountingDistribution::prepare(&oracle, 7).unwrap();
    let dist_b = CountingDistribution::prepare(&oracle, 7).unwrap();
    let mut reproducible = dist_a == dist_b;
    for seed in 0..100 {
        reproducible &= s.measure_all(seed) == s.measure_all(seed);
        let (x, y) = (dist_a.sample(seed), dist_b.sample(seed));
        reproducible &= x.m_hat.to_bits() == y.m_hat.to_bits() && x == y;
    }

    let pass = worst_norm <= 1e-12 && worst_qft <= 1e-10 && reproducible;
    report(
        7,
        "norm within 1e-12, QFT round trip within 1e-10, seeded outputs bit-identical",
        pass,
        format!(
            "{sequences} sequences max norm drift {worst_norm:.2e}; QFT round trip {worst_qft:.2e}; reproducible {reproducible}"
        ),
    );
    assert!(pass);
}

fn delay_velocity_dbs() -> Vec<VirtualDb> {
    let grid = Arc::new(
        ParamGrid::new(vec![
            Axis::logspace("delay", "s", 1e-10, 1e-1, 32).unwrap(),
            Axis::linspace("velocity", "m/s", 1.0, 100.0, 991).unwrap(),
        ])
        .unwrap(),
    );
    let q = Quantizer::new(0.0, 1.0, 64).unwrap();
    [(0, 0.5, 1.0), (1, 0.4, 2.0)]
        .iter()
        .map(|&(id, mu, shift)| {
            let model = DelayVelocity::new(q, 1.0, shift).unwrap().with_source(id, mu);
            VirtualDb::new(id, grid.clone(), Arc::new(model)).unwrap()
        })
        .collect()
}

#[test]
fn criterion_8_scale_check() {
    let dbs = delay_velocity_dbs();
    assert_eq!(dbs[0].n_qubits(), 15);
    let start = Instant::now();
    let mut verdicts = Vec::new();
    for code in [8, 16, 24, 30, 36, 44, 52, 60] {
        let r = Symbol::new(code, 64).unwrap();
        verdicts.push(separate(&dbs, r, &SeparationConfig::exact_ml()).unwrap().verdict);
    }
    let exact_time = start.elapsed();

    // quantum-mode resource curve; n + t stays within 20 qubits
    let mut curve = Vec::new();
    for n in [4u32, 6, 8, 10, 12] {
        let t = counting_register_size(n, 0.125).unwrap().min(20 - n);
        let oracle = OracleSpec::from_predicate(n, |x| x % 7 == 3).unwrap();
        let start = Instant::now();
        let dist = CountingDistribution::prepare(&oracle, t).unwrap();
        let e = dist.sample(11);
        let elapsed = start.elapsed();
        let m = exact_count(&oracle).m_hat;
        curve.push(format!(
            "n={n} t={t} amps=2^{} {:.3}s |m̂−M|={:.2}≤{:.2}",
            n + t,
            elapsed.as_secs_f64(),
            (e.m_hat - m).abs(),
            e.error_bound
        ));
    }

    let pass = exact_time < Duration::from_secs(10) && verdicts.len() == 8;
    report(
        8,
        "15-qubit exact separation under 10 s; quantum resource curve",
        pass,
        format!("exact {:.3}s for 8 observations; {}", exact_time.as_secs_f64(), curve.join("; ")),
    );
    assert!(pass);
}

#[test]
fn bundled_scenarios_validate() {
    for entry in std::fs::read_dir(scenarios_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) == Some("toml") {
            let (doc, base) = ScenarioDoc::load(&path).unwrap();
            assert!(scenario::validate(&doc, Path::new(&base)).is_empty(), "{}", path.display());
        }
    }
}
