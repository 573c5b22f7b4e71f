use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{case_rng, SuiteReport};
use crate::graph::{GraphError, GraphState, SideEffect};
use crate::stab::{Basis, Gate, PauliString, Tableau};
use crate::Sign;

/// Signature of the XX-fusion rule, so a faulty variant can be swapped in.
pub type FuseRule = fn(&mut GraphState, usize, usize, Sign, Sign) -> Result<(), GraphError>;

pub const MAX_VERTICES: usize = 8;

/// Random graph on `n` vertices with edge density 1/2 and random `I`/`Z` tags.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> GraphState {
    let mut g = GraphState::with_vertices(n);
    for u in 0..n {
        for w in u + 1..n {
            if rng.random::<bool>() {
                g.add_edge(u, w).unwrap();
            }
        }
        g.set_side_effect(u, SideEffect::z_if(rng.random())).unwrap();
    }
    g
}

fn canonical(t: &Tableau, live: &[usize]) -> Option<Vec<PauliString>> {
    t.canonical_stabilizers(live).ok()
}

/// Whether the graph backend and the tableau describe the same state on the
/// live vertices.
pub fn same_state(g: &GraphState, t: &Tableau) -> bool {
    let live: Vec<usize> = g.vertices().collect();
    if live.is_empty() {
        return true;
    }
    let Ok(reference) = g.to_tableau(t.num_qubits()) else { return false };
    match (canonical(t, &live), canonical(&reference, &live)) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    }
}

#[derive(Clone, Copy, Debug)]
enum Step {
    Complement(usize),
    MeasureZ(usize),
    Fuse(usize, usize),
    Bsm(usize, usize),
}

fn pick_step(rng: &mut ChaCha8Rng, g: &GraphState) -> Option<Step> {
    let live: Vec<usize> = g.vertices().collect();
    let tag = |v: usize| g.side_effect(v).unwrap();
    let mut options = Vec::new();
    options.extend(live.iter().map(|&v| Step::Complement(v)));
    options.extend(live.iter().filter(|&&v| tag(v).z_sign().is_some()).map(|&v| Step::MeasureZ(v)));
    for (i, &a) in live.iter().enumerate() {
        for &b in &live[i + 1..] {
            let xa = tag(a).x_sign().is_some() && tag(b).x_sign().is_some();
            if g.has_edge(a, b) && xa {
                options.push(Step::Fuse(a, b));
            }
            if !g.has_edge(a, b) && tag(a).is_z_type() && tag(b).is_z_type() {
                options.push(Step::Bsm(a, b));
            }
        }
    }
    options.choose(rng).copied()
}

/// Run one random rewrite sequence; returns a description of the first
/// disagreement, if any.
pub fn run_case(rng: &mut ChaCha8Rng, fuse: FuseRule) -> Result<(), String> {
    let n = rng.random_range(2..=MAX_VERTICES);
    let mut g = random_graph(rng, n);
    let mut t = g.to_tableau(n).map_err(|e| e.to_string())?;
    let steps = rng.random_range(1..=6);
    let mut log = Vec::new();
    for _ in 0..steps {
        let Some(step) = pick_step(rng, &g) else { break };
        log.push(step);
        let res = match step {
            Step::Complement(v) => g.local_complement(v),
            Step::MeasureZ(v) => {
                let m = t.measure(Basis::Z, v, rng).unwrap();
                g.measure_z(v, m.outcome)
            }
            Step::Fuse(a, b) => {
                let ma = t.measure(Basis::X, a, rng).unwrap().outcome;
                let mb = t.measure(Basis::X, b, rng).unwrap().outcome;
                let (oa, ob) = (g.fold_x(a, ma).unwrap(), g.fold_x(b, mb).unwrap());
                fuse(&mut g, a, b, oa, ob)
            }
            Step::Bsm(a, b) => {
                t.apply(Gate::Cz(a, b)).unwrap();
                let ma = t.measure(Basis::X, a, rng).unwrap().outcome;
                let mb = t.measure(Basis::X, b, rng).unwrap().outcome;
                let (oa, ob) = (g.fold_x(a, ma).unwrap(), g.fold_x(b, mb).unwrap());
                g.toggle_edge(a, b).and_then(|_| fuse(&mut g, a, b, oa, ob))
            }
        };
        if let Err(e) = res {
            return Err(format!("{log:?}: {e}"));
        }
        if !same_state(&g, &t) {
            return Err(format!("n={n}, steps {log:?}: graph and tableau disagree"));
        }
    }
    Ok(())
}

/// Random graphs of at most eight vertices under random sequences of local
/// complementation, Z measurement, XX fusion and Bell measurement.
pub fn backend_equivalence(cases: usize, seed: u64, fuse: FuseRule) -> SuiteReport {
    let mut report = SuiteReport::new("oracle-equivalence");
    for case in 0..cases {
        let mut rng = case_rng(seed, case as u64);
        report.record(run_case(&mut rng, fuse));
    }
    report
}
