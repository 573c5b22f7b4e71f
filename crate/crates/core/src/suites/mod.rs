//! Invariant suites shared by the `verify` command and the test targets.
//!
//! Each suite is a deterministic function of its seed and returns a
//! [`SuiteReport`] counting checked cases and failures.

pub mod backend;
pub mod decoder;
pub mod protocol;
pub mod stats;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use backend::{backend_equivalence, FuseRule};
pub use decoder::indirect_soundness;
pub use protocol::{batch_bytes, check_record, determinism, grid_configs, propagation_equivalence, protocol_grid};
pub use stats::{resources, statistics};

use crate::graph::GraphState;

/// RNG for case `case` of a suite: one ChaCha stream per case.
pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// First few failure descriptions.
    pub examples: Vec<String>,
    /// Free-form measured quantities, e.g. observed frequencies.
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn new(name: &str) -> Self {
        Self { name: name.to_string(), cases: 0, failures: 0, examples: Vec::new(), notes: Vec::new() }
    }

    pub fn record(&mut self, result: Result<(), String>) {
        self.cases += 1;
        if let Err(e) = result {
            self.failures += 1;
            if self.examples.len() < 5 {
                self.examples.push(e);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {} cases, {} failures", self.name, self.cases, self.failures)?;
        for n in &self.notes {
            write!(f, "; {n}")?;
        }
        for e in &self.examples {
            write!(f, "\n    {e}")?;
        }
        Ok(())
    }
}

/// Per-suite workload.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteSizes {
    pub backend_cases: usize,
    pub trees_per_b: usize,
    pub grid_trials: u64,
    pub stat_samples: usize,
    pub propagation_successes: usize,
    pub determinism_trials: u64,
}

impl SuiteSizes {
    /// The sizes the acceptance criteria call for.
    pub const FULL: Self = Self {
        backend_cases: 500,
        trees_per_b: 500,
        grid_trials: 1000,
        stat_samples: 2000,
        propagation_successes: 1000,
        determinism_trials: 200,
    };

    pub const QUICK: Self = Self {
        backend_cases: 50,
        trees_per_b: 50,
        grid_trials: 20,
        stat_samples: 2000,
        propagation_successes: 50,
        determinism_trials: 20,
    };
}

/// Suite names in the order `verify` runs them.
pub const MANIFEST: [&str; 8] = [
    "oracle-equivalence",
    "indirect-soundness",
    "acceptance-grid",
    "loss-grid",
    "statistics",
    "resources",
    "propagation-equivalence",
    "determinism",
];

pub const LOSS_SURVIVALS: [f64; 2] = [0.95, 0.90];

pub fn run_suite(name: &str, sizes: SuiteSizes, seed: u64) -> Option<SuiteReport> {
    Some(match name {
        "oracle-equivalence" => backend_equivalence(sizes.backend_cases, seed, GraphState::fuse_xx),
        "indirect-soundness" => indirect_soundness(sizes.trees_per_b, seed),
        "acceptance-grid" => protocol_grid(name, &[1.0], sizes.grid_trials, seed),
        "loss-grid" => protocol_grid(name, &LOSS_SURVIVALS, sizes.grid_trials, seed),
        "statistics" => statistics(sizes.stat_samples, seed),
        "resources" => resources(),
        "propagation-equivalence" => propagation_equivalence(sizes.propagation_successes, seed),
        "determinism" => determinism(sizes.determinism_trials, seed),
        _ => return None,
    })
}

/// Run the whole manifest, handing each report to `each` as it completes.
pub fn run_all(sizes: SuiteSizes, seed: u64, mut each: impl FnMut(&SuiteReport)) -> Vec<SuiteReport> {
    MANIFEST
        .iter()
        .map(|name| {
            let r = run_suite(name, sizes, seed).expect("manifest names are known");
            each(&r);
            r
        })
        .collect()
}
