#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use qsep::separator::Verdict;
use qsep::vdb::{
    AdditiveOffset, Axis, DisturbanceModel, GridPoint, ParamGrid, Quantizer, Symbol, TableModel,
    VirtualDb,
};

pub fn scenarios_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

/// Two to four databases over one random grid of at most `2^max_qubits`
/// points, each with a random table or additive model.
pub fn random_db_set(rng: &mut ChaCha8Rng, max_qubits: u32) -> (Vec<VirtualDb>, u64) {
    let alphabet = rng.gen_range(2..=24u64);
    let limit = 1usize << max_qubits;
    let a = rng.gen_range(1..=32usize.min(limit));
    let b = rng.gen_range(1..=(limit / a).min(32));
    let mut axes = vec![Axis::linspace("a", "", -4.0, 4.0, a).unwrap()];
    if b > 1 || rng.gen_bool(0.5) {
        axes.push(Axis::linspace("b", "", 0.0, 2.0, b).unwrap());
    }
    let grid = Arc::new(ParamGrid::new(axes).unwrap());
    let total = grid.total_points();

    let k = rng.gen_range(2..=4u64);
    let dbs = (0..k)
        .map(|set_id| {
            let model: Arc<dyn DisturbanceModel> = if rng.gen_bool(0.5) {
                let lo = rng.gen_range(0..alphabet);
                let hi = rng.gen_range(lo..alphabet);
                let entries = (0..total).map(|_| rng.gen_range(lo..=hi)).collect();
                Arc::new(TableModel::new(alphabet).with_table(set_id, entries))
            } else {
                let q = Quantizer::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.5..2.0), alphabet).unwrap();
                let mu = rng.gen_range(0.0..alphabet as f64);
                Arc::new(AdditiveOffset::new(q).with_source(set_id, mu))
            };
            VirtualDb::new(set_id, grid.clone(), model).unwrap()
        })
        .collect();
    (dbs, alphabet)
}

/// Direct classifier: count matching records by calling each model on every
/// grid point, then take the argmax of count/total (all zero: badly prepared;
/// equal maxima: tie).
pub fn classical_verdict(dbs: &[VirtualDb], r: Symbol) -> Verdict {
    let counts: Vec<(u64, u64, u64)> = dbs
        .iter()
        .map(|db| {
            let grid = db.grid();
            let mut c = 0;
            for x in 0..grid.total_points() {
                let params = grid.index_to_params(x).unwrap();
                let y = db
                    .model()
                    .eval(db.set_id(), GridPoint { index: x, params: &params })
                    .unwrap();
                if y == r.code() {
                    c += 1;
                }
            }
            (db.set_id(), c, grid.total_points() as u64)
        })
        .collect();
    if counts.iter().all(|&(_, c, _)| c == 0) {
        return Verdict::BadlyPrepared;
    }
    let better = |a: &(u64, u64, u64), b: &(u64, u64, u64)| (a.1 * b.2).cmp(&(b.1 * a.2));
    let best = counts.iter().max_by(|a, b| better(a, b)).unwrap();
    let mut winners: Vec<u64> = counts
        .iter()
        .filter(|c| better(c, best).is_eq())
        .map(|c| c.0)
        .collect();
    winners.sort_unstable();
    if winners.len() == 1 {
        Verdict::Assigned { set_id: winners[0] }
    } else {
        Verdict::Tie { set_ids: winners }
    }
}
