use rand::Rng;
use serde::{Deserialize, Serialize};

use super::tree::{DecodeFailure, DecodeOptions, MeasurementTree};
use super::DecodeError;
use crate::stab::{Basis, Gate, Tableau};
use crate::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BsmStatus {
    /// Raw X outcomes of the left and right outer photons after the CZ.
    Success(Sign, Sign),
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsmOutcome {
    pub pair: usize,
    pub status: BsmStatus,
}

impl BsmOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self.status, BsmStatus::Success(..))
    }

    pub fn signs(&self) -> Option<(Sign, Sign)> {
        match self.status {
            BsmStatus::Success(a, b) => Some((a, b)),
            BsmStatus::Fail => None,
        }
    }
}

/// A photon as it reaches the analyzer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arrival {
    pub qubit: usize,
    pub lost: bool,
}

/// Linear-optics Bell measurement on two outer photons. Succeeds with
/// probability `p_success`, acting as CZ followed by X on both; otherwise both
/// photons are measured out in Z and the result is discarded.
pub fn run_bsm<R: Rng + ?Sized>(
    pair: usize,
    a: Arrival,
    b: Arrival,
    t: &mut Tableau,
    rng: &mut R,
    p_success: f64,
) -> Result<BsmOutcome, DecodeError> {
    for x in [a, b] {
        if x.lost {
            return Err(DecodeError::LostPhoton(x.qubit));
        }
    }
    let status = if rng.random_bool(p_success.clamp(0.0, 1.0)) {
        t.apply(Gate::Cz(a.qubit, b.qubit))?;
        let sa = t.measure(Basis::X, a.qubit, rng)?.outcome;
        let sb = t.measure(Basis::X, b.qubit, rng)?.outcome;
        BsmStatus::Success(sa, sb)
    } else {
        t.measure(Basis::Z, a.qubit, rng)?;
        t.measure(Basis::Z, b.qubit, rng)?;
        BsmStatus::Fail
    };
    Ok(BsmOutcome { pair, status })
}

/// Lowest-index successful pair.
pub fn select_arm(outcomes: &[BsmOutcome]) -> Option<usize> {
    outcomes.iter().position(|o| o.is_success())
}

/// Classical output of one analyzer: a success flag plus one parity bit for
/// each end node. `parity_left` goes to the left end, `parity_right` to the right.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsaReport {
    pub success: bool,
    pub parity_left: bool,
    pub parity_right: bool,
}

impl AbsaReport {
    pub const FAILED: Self = Self { success: false, parity_left: false, parity_right: false };

    /// `trial_id,absa_id,success,parity_left,parity_right` with 0/1 fields.
    pub fn wire(&self, trial: u64, absa: usize) -> String {
        format!("{trial},{absa},{},{},{}", self.success as u8, self.parity_left as u8, self.parity_right as u8)
    }

    pub fn parse_wire(line: &str) -> Option<(u64, usize, Self)> {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 5 {
            return None;
        }
        let bit = |s: &str| match s {
            "0" => Some(false),
            "1" => Some(true),
            _ => None,
        };
        let r = Self { success: bit(f[2])?, parity_left: bit(f[3])?, parity_right: bit(f[4])? };
        Some((f[0].parse().ok()?, f[1].parse().ok()?, r))
    }
}

/// The pieces an analyzer combines into its report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsaDetail {
    pub chosen: Option<usize>,
    /// Logical X of the chosen left and right trees, `true` for −1.
    pub x_left: Option<bool>,
    pub x_right: Option<bool>,
    /// Parity of logical Z over the non-chosen trees on each side.
    pub zpar_left: Option<bool>,
    pub zpar_right: Option<bool>,
    pub failure: Option<DecodeFailure>,
}

/// Decode all trees at one analyzer and form the report.
///
/// The chosen pair is read out in logical X after each tree's first level
/// absorbs the opposite outer sign; all other trees are read out in logical Z.
/// `parity_left = x(right chosen) ⊕ zpar(left others)` and symmetrically.
pub fn absa_process(
    chosen: Option<usize>,
    left: &mut [MeasurementTree],
    right: &mut [MeasurementTree],
    opts: DecodeOptions,
) -> (AbsaReport, AbsaDetail) {
    let mut detail = AbsaDetail { chosen, ..Default::default() };
    let Some(c) = chosen else {
        return (AbsaReport::FAILED, detail);
    };
    let (Some(sl), Some(sr)) = (left[c].outer.resolved(), right[c].outer.resolved()) else {
        return (AbsaReport::FAILED, detail);
    };
    left[c].propagate_bsm(sr);
    right[c].propagate_bsm(sl);

    let zpar = |trees: &[MeasurementTree]| -> Result<bool, DecodeFailure> {
        let mut p = false;
        for (i, t) in trees.iter().enumerate() {
            if i != c {
                p ^= t.decode_logical(opts)?.is_minus();
            }
        }
        Ok(p)
    };
    let parts = (|| {
        let xl = left[c].decode_logical(opts)?.is_minus();
        let xr = right[c].decode_logical(opts)?.is_minus();
        Ok::<_, DecodeFailure>((xl, xr, zpar(left)?, zpar(right)?))
    })();
    match parts {
        Ok((xl, xr, zl, zr)) => {
            detail.x_left = Some(xl);
            detail.x_right = Some(xr);
            detail.zpar_left = Some(zl);
            detail.zpar_right = Some(zr);
            (AbsaReport { success: true, parity_left: xr ^ zl, parity_right: xl ^ zr }, detail)
        }
        Err(f) => {
            detail.failure = Some(f);
            (AbsaReport::FAILED, detail)
        }
    }
}
