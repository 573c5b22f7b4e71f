use rayon::prelude::*;

use super::SuiteReport;
use crate::build::BranchingVector;
use crate::netsim::{run_batch, BatchResult, Chain, ChainConfig, TrialRecord};

pub const GRID_HOPS: [usize; 3] = [0, 1, 2];
pub const GRID_ARMS: [usize; 3] = [1, 2, 3];
pub const GRID_BRANCHINGS: [&str; 4] = ["1", "2", "2,2", "2,3"];

pub fn grid_configs(survival: f64) -> Vec<ChainConfig> {
    let mut out = Vec::new();
    for k in GRID_HOPS {
        for m in GRID_ARMS {
            for b in GRID_BRANCHINGS {
                let b: BranchingVector = b.parse().expect("valid branching");
                out.push(ChainConfig::new(k, m, b).with_survival(survival));
            }
        }
    }
    out
}

/// Consistency of one record with its configuration. Returns whether the
/// record claimed success.
pub fn check_record(chain: &Chain, r: &TrialRecord) -> Result<bool, String> {
    let cfg = &chain.config;
    let err = |msg: String| Err(format!("trial {}: {msg}", r.trial));
    if r.absa.len() != cfg.num_analyzers() {
        return err(format!("{} analyzer traces for {} analyzers", r.absa.len(), cfg.num_analyzers()));
    }
    if r.photons_created != r.photons_measured + r.photons_lost {
        return err(format!("{} created, {} measured, {} lost", r.photons_created, r.photons_measured, r.photons_lost));
    }
    let per_half = chain.halves[0].0.photons().len();
    for (h, a) in r.absa.iter().enumerate() {
        if a.classical_bits_in != 2 * per_half {
            return err(format!("analyzer {h} took {} results, halves hold {}", a.classical_bits_in, 2 * per_half));
        }
        let expect = a.bsm_successes > 0 && a.chosen.is_some() && a.decode_failure.is_none();
        if a.report.success != expect {
            return err(format!("analyzer {h} success flag {} disagrees with its trace", a.report.success));
        }
        if !a.report.success && (a.report.parity_left || a.report.parity_right) {
            return err(format!("analyzer {h} failed but sent parity bits"));
        }
        if cfg.survival_probability() == 1.0 && a.chosen.is_some() && a.decode_failure.is_some() {
            return err(format!("analyzer {h} failed to decode without loss: {:?}", a.decode_failure));
        }
    }
    if r.success != r.absa.iter().all(|a| a.report.success) {
        return err("success claimed without every analyzer succeeding".into());
    }
    if r.success != r.oracle.is_some() {
        return err("oracle verdict must be present iff success is claimed".into());
    }
    if r.success {
        if r.oracle != Some(true) {
            return err(format!("corrected pair fails the stabilizer check, corrections {:?}", r.corrections));
        }
        if r.propagation_agrees != Some(true) {
            return err("hop-by-hop and one-shot frames differ".into());
        }
    }
    Ok(r.success)
}

/// Every configuration of the hops × arms × branching grid at one survival
/// probability: each claimed success must pass the oracle.
pub fn protocol_grid(name: &str, survivals: &[f64], trials: u64, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new(name);
    let (mut claimed, mut total) = (0usize, 0usize);
    for &p in survivals {
        let (mut lo, mut hi) = (f64::INFINITY, 0f64);
        for cfg in grid_configs(p) {
            let chain = match Chain::new(&cfg) {
                Ok(c) => c,
                Err(e) => {
                    report.record(Err(e.to_string()));
                    continue;
                }
            };
            let workers = rayon::current_num_threads();
            let batch = match run_batch(&cfg, trials, seed, workers) {
                Ok(b) => b,
                Err(e) => {
                    report.record(Err(e.to_string()));
                    continue;
                }
            };
            let tag = format!("p={p} k={} m={} b={}", cfg.hops, cfg.arms, cfg.branching);
            let mut ok = 0;
            for r in &batch.records {
                let res = check_record(&chain, r);
                if let Ok(true) = res {
                    ok += 1;
                }
                report.record(res.map(|_| ()).map_err(|e| format!("{tag}: {e}")));
            }
            claimed += ok;
            total += batch.records.len();
            lo = lo.min(batch.summary.success_rate);
            hi = hi.max(batch.summary.success_rate);
        }
        report.notes.push(format!("p={p}: success rate {lo:.3}..{hi:.3}"));
    }
    if claimed == 0 {
        report.record(Err("no trial claimed success".into()));
    }
    report.notes.push(format!("{claimed}/{total} trials claimed success, all oracle-checked"));
    report
}

/// Hop-by-hop propagation equals one-shot aggregation on `successes`
/// successful trials of a 3-hop chain.
pub fn propagation_equivalence(successes: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("propagation-equivalence");
    let cfg = ChainConfig::new(3, 3, "2,2".parse().expect("valid branching")).with_survival(0.95);
    let chain = Chain::new(&cfg).expect("valid config");
    let mut next = 0u64;
    let mut seen = 0;
    while seen < successes {
        let ids = next..next + 256;
        next += 256;
        let recs: Vec<_> = ids.into_par_iter().map(|i| chain.run_trial(seed, i)).collect();
        for r in recs {
            let r = match r {
                Ok(r) => r,
                Err(e) => {
                    report.record(Err(e.to_string()));
                    continue;
                }
            };
            if !r.success || seen >= successes {
                continue;
            }
            seen += 1;
            report.record(match r.propagation_agrees {
                Some(true) => Ok(()),
                _ => Err(format!("trial {}: frames differ", r.trial)),
            });
        }
    }
    report.notes.push(format!("{successes} successful trials out of {next} run"));
    report
}

/// Line-delimited records followed by the summary document.
pub fn batch_bytes(b: &BatchResult) -> String {
    let mut s = String::new();
    for r in &b.records {
        s.push_str(&serde_json::to_string(r).expect("records serialize"));
        s.push('\n');
    }
    s.push_str(&serde_json::to_string_pretty(&b.summary).expect("summary serializes"));
    s
}

/// Same configuration and seed at 1 and 4 workers give byte-identical output,
/// and records survive a parse/serialize round trip.
pub fn determinism(trials: u64, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("determinism");
    let mut cfg = ChainConfig::new(1, 2, "2,2".parse().expect("valid branching")).with_survival(0.9);
    cfg.measurement_error = 0.01;
    let out: Vec<String> = [1, 4, 1]
        .into_iter()
        .map(|w| run_batch(&cfg, trials, seed, w).map(|b| batch_bytes(&b)).unwrap_or_else(|e| e.to_string()))
        .collect();
    report.record(if out[0] == out[1] { Ok(()) } else { Err("1 and 4 workers differ".into()) });
    report.record(if out[0] == out[2] { Ok(()) } else { Err("repeated run differs".into()) });
    for line in out[0].lines().take(trials as usize) {
        let back = serde_json::from_str::<TrialRecord>(line).map(|r| serde_json::to_string(&r).expect("records serialize"));
        report.record(match back {
            Ok(s) if s == line => Ok(()),
            Ok(_) => Err("record changed in a round trip".into()),
            Err(e) => Err(format!("record does not parse: {e}")),
        });
    }
    report.notes.push(format!("{} bytes of output per run", out[0].len()));
    report
}
