use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Chain, ChainConfig, NetsimError, TrialRecord};

/// Version of the record and summary layouts.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub schema_version: u32,
    pub config: ChainConfig,
    pub seed: u64,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub oracle_checked: usize,
    pub oracle_passed: usize,
    /// Among claimed successes; absent when there were none.
    pub oracle_pass_rate: Option<f64>,
    pub propagation_mismatches: usize,
    pub bsm_attempts: usize,
    pub bsm_successes: usize,
    pub survival: f64,
    pub photons_per_trial: usize,
    pub mean_photons_lost: f64,
    /// Trials keyed by how many photons they lost.
    pub loss_histogram: BTreeMap<usize, usize>,
    /// Success rate of each analyzer on its own.
    pub absa_success_rate: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchResult {
    pub records: Vec<TrialRecord>,
    pub summary: BatchSummary,
}

pub fn summarize(cfg: &ChainConfig, seed: u64, records: &[TrialRecord]) -> BatchSummary {
    let n = records.len();
    let frac = |k: usize, d: usize| if d == 0 { 0.0 } else { k as f64 / d as f64 };
    let successes = records.iter().filter(|r| r.success).count();
    let checked: Vec<bool> = records.iter().filter_map(|r| r.oracle).collect();
    let passed = checked.iter().filter(|&&v| v).count();
    let mut hist = BTreeMap::new();
    for r in records {
        *hist.entry(r.photons_lost).or_insert(0) += 1;
    }
    let lost: usize = records.iter().map(|r| r.photons_lost).sum();
    let absa_success_rate = (0..cfg.num_analyzers())
        .map(|h| frac(records.iter().filter(|r| r.absa[h].report.success).count(), n))
        .collect();
    BatchSummary {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        seed,
        trials: n,
        successes,
        success_rate: frac(successes, n),
        oracle_checked: checked.len(),
        oracle_passed: passed,
        oracle_pass_rate: (!checked.is_empty()).then(|| frac(passed, checked.len())),
        propagation_mismatches: records.iter().filter(|r| r.propagation_agrees == Some(false)).count(),
        bsm_attempts: n * cfg.num_analyzers() * cfg.arms,
        bsm_successes: records.iter().flat_map(|r| r.absa.iter()).map(|a| a.bsm_successes).sum(),
        survival: cfg.survival_probability(),
        photons_per_trial: records.first().map_or(0, |r| r.photons_created),
        mean_photons_lost: frac(lost, n),
        loss_histogram: hist,
        absa_success_rate,
    }
}

/// Run trials `0..n` on `workers` threads. Records come back in trial order
/// and depend only on `(cfg, seed)`.
pub fn run_batch(cfg: &ChainConfig, n: u64, seed: u64, workers: usize) -> Result<BatchResult, NetsimError> {
    let chain = Chain::new(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| NetsimError::Pool(e.to_string()))?;
    let records = pool.install(|| (0..n).into_par_iter().map(|i| chain.run_trial(seed, i)).collect::<Result<Vec<_>, _>>())?;
    let summary = summarize(cfg, seed, &records);
    Ok(BatchResult { records, summary })
}
