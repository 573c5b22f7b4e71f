use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ChainConfig, NetsimError};
use crate::build::{compile_half_rgs, execute_schedule, fold_join, join_halves, Anchor, EmissionSchedule, HalfRgsLayout, Outcomes, SideEffectRecord};
use crate::decoder::{
    absa_process, basis_for, build_tree, one_shot_frames, run_bsm, select_arm, sequential_frames, AbsaReport, Arrival, BsmOutcome, BsmStatus,
    DecodeFailure, DecodeOptions, LogicalBasis, MeasurementTree, RawOutcome,
};
use crate::stab::{Basis, Gate, Pauli, PauliString, StabError, Tableau};
use crate::Sign;

/// Lose each photon independently with probability `1 - p_survive`. A lost
/// photon gets a uniformly random X, Y or Z and is flagged.
pub fn transmit<R: Rng + ?Sized>(photons: &[usize], p_survive: f64, t: &mut Tableau, rng: &mut R) -> Result<Vec<bool>, StabError> {
    let mut lost = Vec::with_capacity(photons.len());
    for &p in photons {
        let l = !rng.random_bool(p_survive.clamp(0.0, 1.0));
        if l {
            let g = match rng.random_range(0..3) {
                0 => Gate::X(p),
                1 => Gate::Y(p),
                _ => Gate::Z(p),
            };
            t.apply(g)?;
        }
        lost.push(l);
    }
    Ok(lost)
}

/// True iff both `+X_a Z_b` and `+Z_a X_b` stabilize the state.
pub fn verify_final(t: &Tableau, a: usize, b: usize) -> Result<bool, StabError> {
    let n = t.num_qubits();
    let g1 = PauliString::from_terms(n, Sign::Plus, &[(a, Pauli::X), (b, Pauli::Z)]);
    let g2 = PauliString::from_terms(n, Sign::Plus, &[(a, Pauli::Z), (b, Pauli::X)]);
    Ok(t.is_stabilized_by(&g1)? && t.is_stabilized_by(&g2)?)
}

/// RNG for one trial: the master seed picks the key, the trial id the stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// What one analyzer saw and sent in a trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsaTrace {
    pub report: AbsaReport,
    pub chosen: Option<usize>,
    pub bsm_successes: usize,
    pub photons_lost: usize,
    /// Photons that arrived and were read out.
    pub photons_measured: usize,
    /// One result (outcome or loss flag) per photon of the two incident halves.
    pub classical_bits_in: usize,
    pub decode_failure: Option<DecodeFailure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corrections {
    pub left: char,
    pub right: char,
}

/// One line of batch output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub success: bool,
    pub absa: Vec<AbsaTrace>,
    pub photons_created: usize,
    pub photons_measured: usize,
    pub photons_lost: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrections: Option<Corrections>,
    /// Hop-by-hop and one-shot frames agree; present with `corrections`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub propagation_agrees: Option<bool>,
    /// Stabilizer check of the corrected end pair; present iff `success`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<bool>,
}

impl TrialRecord {
    /// Report lines `trial,absa,success,parity_left,parity_right`.
    pub fn wire_lines(&self) -> Vec<String> {
        self.absa.iter().enumerate().map(|(h, a)| a.report.wire(self.trial, h)).collect()
    }
}

/// Compiled qubit layout of a whole chain.
///
/// Half `0` belongs to the left end node and half `2k+1` to the right one.
/// Source `s` in `1..=k` owns halves `2s-1` and `2s`. Analyzer `h` sees half
/// `2h` on its left and `2h+1` on its right.
#[derive(Clone, Debug)]
pub struct Chain {
    pub config: ChainConfig,
    pub halves: Vec<(HalfRgsLayout, EmissionSchedule)>,
    pub width: usize,
}

impl Chain {
    pub fn new(config: &ChainConfig) -> Result<Self, NetsimError> {
        config.validate()?;
        let mut halves = Vec::with_capacity(config.num_halves());
        let mut base = 0;
        for _ in 0..config.num_halves() {
            let h = compile_half_rgs(config.arms, &config.branching, base)?;
            base = h.0.end();
            halves.push(h);
        }
        Ok(Self { config: config.clone(), halves, width: base })
    }

    pub fn end_qubits(&self) -> (usize, usize) {
        (self.halves[0].0.anchor(), self.halves[self.halves.len() - 1].0.anchor())
    }

    pub fn photons_per_trial(&self) -> usize {
        self.halves.iter().map(|h| h.0.photons().len()).sum()
    }

    pub fn run_trial(&self, seed: u64, trial: u64) -> Result<TrialRecord, NetsimError> {
        self.run_trial_with(&mut trial_rng(seed, trial), trial)
    }

    pub fn run_trial_with<R: Rng + ?Sized>(&self, rng: &mut R, trial: u64) -> Result<TrialRecord, NetsimError> {
        let cfg = &self.config;
        let mut t = Tableau::new(self.width)?;

        let mut records = Vec::with_capacity(self.halves.len());
        for (layout, sched) in &self.halves {
            records.push(execute_schedule(layout, sched, &mut t, Outcomes::Random(&mut *rng))?);
        }
        for s in 1..=cfg.hops {
            let (l, r) = (2 * s - 1, 2 * s);
            let mut a = Anchor::of(&self.halves[l].0, &records[l]);
            let mut b = Anchor::of(&self.halves[r].0, &records[r]);
            let raw = join_halves(&mut t, &mut a, &mut b, rng)?;
            let (left, right) = records.split_at_mut(r);
            fold_join((&self.halves[l].0, &mut left[l]), (&self.halves[r].0, &mut right[0]), raw);
        }

        let p = cfg.survival_probability();
        let mut lost: BTreeMap<usize, bool> = BTreeMap::new();
        for (layout, _) in &self.halves {
            let flags = transmit(layout.photons(), p, &mut t, rng)?;
            lost.extend(layout.photons().iter().copied().zip(flags));
        }

        let opts = DecodeOptions { majority_indirect: cfg.majority() };
        let mut traces = Vec::with_capacity(cfg.num_analyzers());
        let mut details = Vec::with_capacity(cfg.num_analyzers());
        for h in 0..cfg.num_analyzers() {
            let sides = [(&self.halves[2 * h].0, &records[2 * h]), (&self.halves[2 * h + 1].0, &records[2 * h + 1])];
            let (trace, detail) = self.run_absa(sides, &lost, &mut t, rng, opts)?;
            traces.push(trace);
            details.push(detail);
        }

        let photons_created = self.photons_per_trial();
        let photons_lost = lost.values().filter(|&&l| l).count();
        let success = traces.iter().all(|a| a.report.success);
        let mut rec = TrialRecord {
            trial,
            success,
            photons_created,
            photons_measured: traces.iter().map(|a| a.photons_measured).sum(),
            photons_lost,
            corrections: None,
            propagation_agrees: None,
            oracle: None,
            absa: traces,
        };
        if success {
            let reports: Vec<AbsaReport> = rec.absa.iter().map(|a| a.report).collect();
            let (za, zb) = (records[0].anchor_z, records[records.len() - 1].anchor_z);
            let (fa, fb) = one_shot_frames(&reports, za, zb)?;
            let order: Vec<usize> = (0..cfg.num_analyzers()).collect();
            let seq = sequential_frames(&details, za, zb, &order)?;
            let (a, b) = self.end_qubits();
            t.apply_all(fa.gates(a).into_iter().chain(fb.gates(b)))?;
            rec.corrections = Some(Corrections { left: fa.letter(), right: fb.letter() });
            rec.propagation_agrees = Some(seq == (fa, fb));
            rec.oracle = Some(verify_final(&t, a, b)?);
        }
        Ok(rec)
    }

    fn run_absa<R: Rng + ?Sized>(
        &self,
        sides: [(&HalfRgsLayout, &SideEffectRecord); 2],
        lost: &BTreeMap<usize, bool>,
        t: &mut Tableau,
        rng: &mut R,
        opts: DecodeOptions,
    ) -> Result<(AbsaTrace, crate::decoder::AbsaDetail), NetsimError> {
        let cfg = &self.config;
        let e_m = cfg.measurement_error;
        let flip = |s: Sign, rng: &mut R| s.flipped_if(e_m > 0.0 && rng.random_bool(e_m));

        let mut measured = 0;
        let mut outcomes: Vec<BsmOutcome> = Vec::with_capacity(cfg.arms);
        for i in 0..cfg.arms {
            let [a, b] = sides.map(|(l, _)| Arrival { qubit: l.arms[i].outer, lost: lost[&l.arms[i].outer] });
            let o = if a.lost || b.lost {
                t.measure(Basis::Z, a.qubit, rng)?;
                t.measure(Basis::Z, b.qubit, rng)?;
                BsmOutcome { pair: i, status: BsmStatus::Fail }
            } else {
                run_bsm(i, a, b, t, rng, cfg.bsm_success)?
            };
            measured += [a, b].iter().filter(|x| !x.lost).count();
            let status = match o.status {
                BsmStatus::Success(x, y) => BsmStatus::Success(flip(x, rng), flip(y, rng)),
                BsmStatus::Fail => BsmStatus::Fail,
            };
            outcomes.push(BsmOutcome { status, ..o });
        }
        let chosen = select_arm(&outcomes);

        let mut trees: [Vec<MeasurementTree>; 2] = [Vec::new(), Vec::new()];
        for (side, (layout, record)) in sides.iter().enumerate() {
            for (i, arm) in layout.arms.iter().enumerate() {
                let logical = if chosen == Some(i) { LogicalBasis::X } else { LogicalBasis::Z };
                let mut raw = BTreeMap::new();
                for n in &arm.nodes {
                    let out = t.measure(basis_for(logical, n.level), n.photon, rng)?.outcome;
                    let r = if lost[&n.photon] {
                        RawOutcome::Lost
                    } else {
                        measured += 1;
                        RawOutcome::Measured(flip(out, rng))
                    };
                    raw.insert(n.photon, r);
                }
                let bsm = outcomes[i].signs().map(|(a, b)| if side == 0 { a } else { b });
                trees[side].push(build_tree(arm, logical, &raw, bsm, record)?);
            }
        }
        let [left, right] = &mut trees;
        let (report, detail) = absa_process(chosen, left, right, opts);

        let photons: Vec<usize> = sides.iter().flat_map(|(l, _)| l.photons().iter().copied()).collect();
        let trace = AbsaTrace {
            report,
            chosen,
            bsm_successes: outcomes.iter().filter(|o| o.is_success()).count(),
            photons_lost: photons.iter().filter(|p| lost[p]).count(),
            photons_measured: measured,
            classical_bits_in: photons.len(),
            decode_failure: detail.failure,
        };
        Ok((trace, detail))
    }
}

/// Single trial from a config, seed and trial id.
pub fn run_trial(cfg: &ChainConfig, seed: u64, trial: u64) -> Result<TrialRecord, NetsimError> {
    Chain::new(cfg)?.run_trial(seed, trial)
}
