//! The `rgs` command: topology inspection, batch runs and the invariant
//! suites. Every command is a thin wrapper over `rgs_core`.

mod config;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rgs_core::build::{compile_half_rgs, resource_report, BranchingVector, ResourceReport};
use rgs_core::netsim::{run_batch, BatchResult, BatchSummary};
use rgs_core::suites::{self, SuiteReport, SuiteSizes};
use serde::Serialize;
use thiserror::Error;

pub use config::{OutputFormat, RunConfig, RunSection};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Oracle(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io { .. } => EXIT_IO,
            CliError::Oracle(_) => EXIT_ORACLE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rgs", version, about = "Repeater-graph-state chain simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the half-RGS layout and resource counts.
    Topology {
        #[arg(long)]
        m: usize,
        /// Branching vector, e.g. `2,3`.
        #[arg(long)]
        b: String,
        /// Memory slots per link demanded by the classical round trip.
        #[arg(long, default_value_t = 10)]
        r: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run a batch of chain trials from a TOML run file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Run the invariant suites and print one line per suite.
    Verify {
        /// Small workloads for a fast smoke check.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ArmSummary {
    pub outer: usize,
    /// Photon ids per tree level, level 1 first.
    pub levels: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Topology {
    pub anchor: usize,
    pub emitters: Vec<usize>,
    pub arms: Vec<ArmSummary>,
    pub transmission_order: Vec<usize>,
    pub resources: ResourceReport,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.resources;
        writeln!(f, "half-RGS m={} b={}", r.m, r.b)?;
        writeln!(f, "emitters {:?}, anchor {}", self.emitters, self.anchor)?;
        writeln!(f, "photons: {} per arm, {} per half, {} per RGS", r.photons_per_arm, r.photons_per_half, r.photons_per_rgs)?;
        for (i, a) in self.arms.iter().enumerate() {
            write!(f, "arm {i}: outer {}", a.outer)?;
            for (l, ids) in a.levels.iter().enumerate() {
                write!(f, "; level {} {:?}", l + 1, ids)?;
            }
            writeln!(f)?;
        }
        writeln!(f, "transmission order {:?}", self.transmission_order)?;
        write!(f, "{r}")
    }
}

pub fn cmd_topology(m: usize, b: &str, r: usize) -> Result<Topology, CliError> {
    let bv: BranchingVector = b.parse().map_err(|e: rgs_core::build::BuildError| CliError::Config(e.to_string()))?;
    let (layout, _) = compile_half_rgs(m, &bv, 0).map_err(|e| CliError::Config(e.to_string()))?;
    let arms = layout
        .arms
        .iter()
        .map(|a| {
            let mut levels = vec![Vec::new(); bv.depth()];
            for n in &a.nodes {
                levels[n.level - 1].push(n.photon);
            }
            for l in &mut levels {
                l.sort_unstable();
            }
            ArmSummary { outer: a.outer, levels }
        })
        .collect();
    Ok(Topology {
        anchor: layout.anchor(),
        emitters: layout.emitters.clone(),
        arms,
        transmission_order: layout.transmission_order.clone(),
        resources: resource_report(m, &bv, r),
    })
}

/// Files written by a run.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub records: PathBuf,
    pub summary_path: PathBuf,
    pub summary: BatchSummary,
}

pub fn records_text(batch: &BatchResult, format: OutputFormat) -> String {
    let mut s = String::new();
    match format {
        OutputFormat::LineRecords => {
            for r in &batch.records {
                s.push_str(&serde_json::to_string(r).expect("records serialize"));
                s.push('\n');
            }
        }
        OutputFormat::Table => {
            s.push_str("trial\tsuccess\tphotons_lost\tbsm_successes\tchosen\tcorrections\toracle\n");
            for r in &batch.records {
                let join = |v: Vec<String>| v.join("/");
                let bsm = join(r.absa.iter().map(|a| a.bsm_successes.to_string()).collect());
                let chosen = join(r.absa.iter().map(|a| a.chosen.map_or("-".into(), |c| c.to_string())).collect());
                let corr = r.corrections.as_ref().map_or("-".into(), |c| format!("{}{}", c.left, c.right));
                let oracle = r.oracle.map_or("-", |o| if o { "pass" } else { "fail" });
                s.push_str(&format!("{}\t{}\t{}\t{bsm}\t{chosen}\t{corr}\t{oracle}\n", r.trial, r.success as u8, r.photons_lost));
            }
        }
    }
    s
}

/// Run the batch described by `cfg` and write records plus summary under
/// `cfg.run.out`. Fails with [`CliError::Oracle`] after writing if any claimed
/// success did not pass the stabilizer check.
pub fn cmd_run(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    cfg.validate()?;
    let batch =
        run_batch(&cfg.chain, cfg.run.trials, cfg.chain.seed, cfg.run.workers).map_err(|e| CliError::Config(e.to_string()))?;
    let dir = &cfg.run.out;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let records = dir.join(match cfg.run.format {
        OutputFormat::LineRecords => "records.jsonl",
        OutputFormat::Table => "records.tsv",
    });
    std::fs::write(&records, records_text(&batch, cfg.run.format)).map_err(|e| CliError::io(&records, e))?;
    let summary_path = dir.join("summary.json");
    let mut text = serde_json::to_string_pretty(&batch.summary).expect("summary serializes");
    text.push('\n');
    std::fs::write(&summary_path, text).map_err(|e| CliError::io(&summary_path, e))?;
    let s = &batch.summary;
    if s.oracle_passed != s.oracle_checked {
        return Err(CliError::Oracle(format!(
            "{} of {} claimed successes failed the stabilizer check",
            s.oracle_checked - s.oracle_passed,
            s.oracle_checked
        )));
    }
    Ok(RunOutput { records, summary_path, summary: batch.summary })
}

pub fn cmd_verify(sizes: SuiteSizes, seed: u64, out: &mut impl Write) -> Result<Vec<SuiteReport>, CliError> {
    let reports = suites::run_all(sizes, seed, |r| {
        let _ = writeln!(out, "{r}");
    });
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect();
    if failed.is_empty() {
        Ok(reports)
    } else {
        Err(CliError::Oracle(format!("failing suites: {}", failed.join(", "))))
    }
}

pub fn execute(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    let stdout_err = |e| CliError::io(Path::new("<stdout>"), e);
    match cli.command {
        Command::Topology { m, b, r, json } => {
            let t = cmd_topology(m, &b, r)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&t).expect("topology serializes")).map_err(stdout_err)?;
            } else {
                write!(out, "{t}").map_err(stdout_err)?;
            }
        }
        Command::Run { config, trials, seed, workers, out: dir, format } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(t) = trials {
                cfg.run.trials = t;
            }
            if let Some(s) = seed {
                cfg.chain.seed = s;
            }
            if let Some(w) = workers {
                cfg.run.workers = w;
            }
            if let Some(d) = dir {
                cfg.run.out = d;
            }
            if let Some(f) = format {
                cfg.run.format = f;
            }
            let res = cmd_run(&cfg)?;
            let s = &res.summary;
            writeln!(
                out,
                "{} trials, success rate {:.4}, oracle {}/{}; wrote {} and {}",
                s.trials,
                s.success_rate,
                s.oracle_passed,
                s.oracle_checked,
                res.records.display(),
                res.summary_path.display()
            )
            .map_err(stdout_err)?;
        }
        Command::Verify { quick, seed } => {
            let sizes = if quick { SuiteSizes::QUICK } else { SuiteSizes::FULL };
            cmd_verify(sizes, seed, out)?;
        }
    }
    Ok(())
}
