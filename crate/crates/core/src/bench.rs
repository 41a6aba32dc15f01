//! Operation-count benchmark over full random deactivation sequences.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{build_engine, EngineKind};
use crate::gen::{gen_random_graph, random_order, SplitMix64};

/// Edge density of the benchmark graphs.
pub const BENCH_DENSITY: f64 = 0.5;

/// One engine run over one `n x m` instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpsReport {
    pub engine: String,
    pub n: usize,
    pub m: usize,
    /// Sum of `per_deactivation_ops`; preprocessing is not included.
    pub total_ops: u64,
    pub per_deactivation_ops: Vec<u64>,
    /// Deactivations whose component broke into two or more pieces.
    pub splits_observed: usize,
    /// Zero unless wall-clock timing was requested.
    pub wall_ns: u64,
    #[serde(skip)]
    pub preprocess_ops: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub engines: Vec<EngineKind>,
    pub trials: usize,
    pub seed: u64,
    pub wall_clock: bool,
}

/// Seed of the instance for one `(size, trial)`; shared by all engines so
/// that they see the same graph and order.
pub fn trial_seed(seed: u64, size: usize, trial: usize) -> u64 {
    let mut r = SplitMix64::new(seed ^ ((size as u64) << 32) ^ trial as u64);
    r.next_u64()
}

/// Runs `kind` over the square random graph of side `size` for one trial.
pub fn run_trial(kind: EngineKind, size: usize, seed: u64, wall_clock: bool) -> OpsReport {
    let graph = gen_random_graph(size, size, BENCH_DENSITY, seed);
    let order = random_order(size, seed.rotate_left(17));
    let start = wall_clock.then(Instant::now);
    let mut engine = build_engine(kind, &graph);
    let preprocess_ops = engine.ops();
    let mut per = Vec::with_capacity(size);
    let mut splits = 0;
    for &c in &order {
        let before = engine.ops();
        let report = engine.deactivate(c).expect("each character is deactivated once");
        per.push(engine.ops() - before);
        if report.is_split() {
            splits += 1;
        }
    }
    OpsReport {
        engine: kind.name().to_string(),
        n: size,
        m: size,
        total_ops: per.iter().sum(),
        per_deactivation_ops: per,
        splits_observed: splits,
        wall_ns: start.map_or(0, |t| t.elapsed().as_nanos() as u64),
        preprocess_ops,
    }
}

/// One report per `(size, engine, trial)`, in that order. Trials run in
/// parallel.
pub fn bench_engines(cfg: &BenchConfig) -> Vec<OpsReport> {
    let mut jobs = Vec::new();
    for &size in &cfg.sizes {
        for &kind in &cfg.engines {
            for trial in 0..cfg.trials {
                jobs.push((size, kind, trial));
            }
        }
    }
    jobs.par_iter()
        .map(|&(size, kind, trial)| run_trial(kind, size, trial_seed(cfg.seed, size, trial), cfg.wall_clock))
        .collect()
}

/// JSON lines, one report per line.
pub fn to_json_lines(reports: &[OpsReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("reports serialize"));
        out.push('\n');
    }
    out
}
