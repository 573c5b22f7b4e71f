use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{case_rng, SuiteReport};
use crate::build::{compile_half_rgs, execute_schedule, ArmLayout, BranchingVector, EmissionSchedule, HalfRgsLayout, Outcomes, SideEffectRecord};
use crate::decoder::{basis_for, build_tree, DecodeOptions, LogicalBasis, MeasurementTree, RawOutcome};
use crate::stab::{Basis, Tableau};
use crate::Sign;

pub const SOUNDNESS_BRANCHINGS: [&str; 3] = ["2", "2,2", "2,3"];

#[derive(Debug, Default)]
struct Tally {
    lost_resolved: usize,
    lost_unresolved: usize,
    logical_checked: usize,
    uniform_sets: usize,
}

/// Oracle outcome of measuring `photon` in `basis` on a copy of the state,
/// with the photon's side effect folded in like the decoder does.
fn fork_value(t: &mut Tableau, photon: usize, basis: Basis, rec: &SideEffectRecord, rng: &mut ChaCha8Rng) -> (Sign, bool) {
    let m = t.measure(basis, photon, rng).expect("photon in range");
    let s = if basis == Basis::X { m.outcome.flipped_if(rec.photon(photon)) } else { m.outcome };
    (s, m.deterministic)
}

fn check_tree(
    arm: &ArmLayout,
    tree: &MeasurementTree,
    t: &Tableau,
    rec: &SideEffectRecord,
    lossless: bool,
    rng: &mut ChaCha8Rng,
    tally: &mut Tally,
) -> Result<(), String> {
    for opts in [DecodeOptions { majority_indirect: false }, DecodeOptions { majority_indirect: true }] {
        for (i, n) in tree.nodes.iter().enumerate() {
            if n.basis != Basis::Z || n.raw != RawOutcome::Lost {
                continue;
            }
            match tree.indirect_z(i, opts).map_err(|e| e.to_string())? {
                Some(v) => {
                    let (direct, det) = fork_value(&mut t.clone(), n.photon, Basis::Z, rec, rng);
                    if !det || direct != v {
                        return Err(format!("node {i}: indirect {v}, oracle {direct} (deterministic: {det})"));
                    }
                    tally.lost_resolved += 1;
                }
                None => tally.lost_unresolved += 1,
            }
        }
    }

    let opts = DecodeOptions::default();
    if lossless && tree.logical == LogicalBasis::X {
        let c = tree.logical_x_candidates(opts);
        if c.len() != tree.level1.len() || c.iter().any(|&s| s != c[0]) {
            return Err(format!("lossless candidates not uniform: {c:?}"));
        }
        tally.uniform_sets += 1;
    }

    let Ok(value) = tree.decode_logical(opts) else {
        return Ok(());
    };
    let known = |t: &mut Tableau, i: usize, basis: Basis, rng: &mut ChaCha8Rng| -> Sign {
        match tree.nodes[i].resolved {
            Some(s) => s,
            None => fork_value(t, arm.nodes[i].photon, basis, rec, rng).0,
        }
    };
    match tree.logical {
        LogicalBasis::Z => {
            let mut fork = t.clone();
            let mut v = Sign::Plus;
            for &i in &tree.level1 {
                v = v * known(&mut fork, i, Basis::Z, rng);
            }
            if v != value {
                return Err(format!("logical Z decoded {value}, oracle {v}"));
            }
        }
        LogicalBasis::X => {
            for &c in &tree.level1 {
                let mut fork = t.clone();
                let mut v = known(&mut fork, c, Basis::X, rng);
                for &ch in &tree.nodes[c].children {
                    v = v * known(&mut fork, ch, Basis::Z, rng);
                }
                if v != value {
                    return Err(format!("logical X decoded {value}, oracle via node {c} gives {v}"));
                }
            }
        }
    }
    tally.logical_checked += 1;
    Ok(())
}

fn tree_case(layout: &HalfRgsLayout, sched: &EmissionSchedule, lossless: bool, rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<(), String> {
    let mut t = Tableau::new(layout.end()).map_err(|e| e.to_string())?;
    let rec = execute_schedule(layout, sched, &mut t, Outcomes::Random(&mut *rng)).map_err(|e| e.to_string())?;
    let logical = if rng.random_bool(0.5) { LogicalBasis::X } else { LogicalBasis::Z };
    let survival = if lossless { 1.0 } else { rng.random_range(0.4..0.95) };
    let arm = &layout.arms[0];
    let mut raw = BTreeMap::new();
    for n in &arm.nodes {
        let r = if rng.random_bool(survival) {
            RawOutcome::Measured(t.measure(basis_for(logical, n.level), n.photon, rng).map_err(|e| e.to_string())?.outcome)
        } else {
            RawOutcome::Lost
        };
        raw.insert(n.photon, r);
    }
    let tree = build_tree(arm, logical, &raw, None, &rec).map_err(|e| e.to_string())?;
    if tree.nodes.len() != layout.b.tree_size() {
        return Err(format!("tree has {} nodes, expected {}", tree.nodes.len(), layout.b.tree_size()));
    }
    check_tree(arm, &tree, &t, &rec, lossless, rng, tally)
}

/// Lossy trees from freshly generated half-RGSs: every indirect Z that
/// resolves matches a direct measurement on a forked tableau, every decoded
/// logical value matches the oracle, and lossless logical-X candidate sets are
/// uniform. One tree in four is lossless.
pub fn indirect_soundness(trees_per_b: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("indirect-soundness");
    let mut tally = Tally::default();
    for (bi, b) in SOUNDNESS_BRANCHINGS.iter().enumerate() {
        let b: BranchingVector = b.parse().expect("valid branching");
        let (layout, sched) = compile_half_rgs(1, &b, 0).expect("valid layout");
        for case in 0..trees_per_b {
            let mut rng = case_rng(seed, ((bi as u64) << 32) | case as u64);
            let res = tree_case(&layout, &sched, case % 4 == 0, &mut rng, &mut tally);
            report.record(res.map_err(|e| format!("b={b} case {case}: {e}")));
        }
    }
    if tally.lost_resolved == 0 || tally.uniform_sets == 0 {
        report.record(Err("no indirect resolution or lossless X tree was exercised".into()));
    }
    report.notes.push(format!(
        "{} indirect Z resolved, {} unresolvable, {} logical values checked, {} uniform candidate sets",
        tally.lost_resolved, tally.lost_unresolved, tally.logical_checked, tally.uniform_sets
    ));
    report
}
