use std::path::Path;
use std::process::Command;

use rgs_cli::{cmd_run, cmd_topology, cmd_verify, CliError, OutputFormat, RunConfig, EXIT_CONFIG, EXIT_IO, EXIT_ORACLE};
use rgs_core::suites::{SuiteSizes, MANIFEST};

const RUN_FILE: &str = r#"
[chain]
hops = 1
arms = 2
branching = [2, 2]
survival = 0.95
seed = 7

[run]
trials = 50
workers = 2
"#;

fn rgs(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rgs")).args(args).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn topology_counts() {
    let t = cmd_topology(15, "2,3", 10).unwrap();
    assert_eq!(t.resources.prior_art_reserve, 150);
    assert_eq!(t.resources.proposed_total, 13);
    assert_eq!(t.transmission_order.len(), 135);
    // Leaves leave before their parent: outer 4, leaves 5..7, parent 8, leaves 9..11, parent 12.
    assert_eq!(t.arms[0].levels, vec![vec![8, 12], vec![5, 6, 7, 9, 10, 11]]);
    let t = cmd_topology(1, "1", 10).unwrap();
    assert_eq!(t.resources.photons_per_arm, 2);
    assert!(matches!(cmd_topology(1, "2,0", 10), Err(CliError::Config(_))));
    assert!(matches!(cmd_topology(0, "2", 10), Err(CliError::Config(_))));
}

#[test]
fn topology_binary_output() {
    let o = rgs(&["topology", "--m", "15", "--b", "2,3", "--r", "10"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("prior_art_reserve=150\n"));
    assert!(text.contains("proposed_total=13\n"));
    let o = rgs(&["topology", "--m", "2", "--b", "(2,3)", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["resources"]["emitter_line"], 4);
    assert_eq!(rgs(&["topology", "--m", "1", "--b", "0"]).status.code(), Some(EXIT_CONFIG));
}

#[test]
fn run_writes_identical_files_for_identical_input() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = write_config(dir.path(), RUN_FILE);
    let mut outs = Vec::new();
    for (i, workers) in ["1", "4"].iter().enumerate() {
        let out = dir.path().join(format!("out{i}"));
        let o = rgs(&["run", "--config", &cfg_path, "--workers", workers, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let rec = std::fs::read(out.join("records.jsonl")).unwrap();
        let sum = std::fs::read(out.join("summary.json")).unwrap();
        outs.push((rec, sum));
    }
    assert_eq!(outs[0], outs[1]);
    let lines = String::from_utf8(outs[0].0.clone()).unwrap();
    assert_eq!(lines.lines().count(), 50);
    let summary: serde_json::Value = serde_json::from_slice(&outs[0].1).unwrap();
    assert_eq!(summary["schema_version"], 1);
    assert_eq!(summary["trials"], 50);
}

#[test]
fn flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = write_config(dir.path(), RUN_FILE);
    let out = dir.path().join("t");
    let o = rgs(&["run", "--config", &cfg_path, "--trials", "5", "--seed", "3", "--format", "table", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let table = std::fs::read_to_string(out.join("records.tsv")).unwrap();
    assert!(table.starts_with("trial\tsuccess"));
    assert_eq!(table.lines().count(), 6);
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 3);
}

#[test]
fn malformed_configs_exit_with_config_code_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let bad = [
        RUN_FILE.replace("seed = 7", "seed = 7\ncolour = \"red\""),
        RUN_FILE.replace("survival = 0.95", "survival = 1.95"),
        RUN_FILE.replace("branching = [2, 2]", "branching = [2, 0]"),
        RUN_FILE.replace("trials = 50", "trials = 0"),
        "not toml at all [".to_string(),
    ];
    for (i, text) in bad.iter().enumerate() {
        let cfg_path = write_config(dir.path(), text);
        let out = dir.path().join(format!("bad{i}"));
        let o = rgs(&["run", "--config", &cfg_path, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(EXIT_CONFIG), "case {i}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!out.exists());
    }
    let o = rgs(&["run", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_IO));
}

#[test]
fn oracle_failures_exit_with_oracle_code() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::parse(RUN_FILE).unwrap();
    cfg.chain.measurement_error = 0.1;
    cfg.chain.survival = Some(1.0);
    cfg.run.trials = 200;
    cfg.run.out = dir.path().join("noisy");
    let err = cmd_run(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), EXIT_ORACLE);
    assert!(cfg.run.out.join("summary.json").exists());
}

#[test]
fn library_and_binary_agree() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::parse(RUN_FILE).unwrap();
    cfg.run.out = dir.path().join("lib");
    cfg.run.format = OutputFormat::LineRecords;
    cmd_run(&cfg).unwrap();
    let cfg_path = write_config(dir.path(), RUN_FILE);
    let bin_out = dir.path().join("bin");
    assert!(rgs(&["run", "--config", &cfg_path, "--out", bin_out.to_str().unwrap()]).status.success());
    for f in ["records.jsonl", "summary.json"] {
        assert_eq!(std::fs::read(cfg.run.out.join(f)).unwrap(), std::fs::read(bin_out.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn quick_verify_covers_manifest() {
    let mut buf = Vec::new();
    let reports = cmd_verify(SuiteSizes::QUICK, 5, &mut buf).unwrap();
    let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(names, MANIFEST);
    assert!(names.contains(&"oracle-equivalence") && names.contains(&"acceptance-grid"));
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS ")).count(), MANIFEST.len());
}

#[test]
fn shipped_config_is_valid() {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/chain.toml");
    let cfg = RunConfig::load(&p).unwrap();
    assert_eq!(cfg.chain.hops, 2);
    assert_eq!(cfg.run.format, OutputFormat::LineRecords);
}
