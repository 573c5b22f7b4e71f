use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::DecodeError;
use crate::build::{ArmLayout, SideEffectRecord};
use crate::stab::Basis;
use crate::Sign;

/// Basis of a logical (tree-encoded) measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogicalBasis {
    X,
    Z,
}

/// Physical basis for a tree photon at `level` (1-based). Odd levels use the
/// logical basis, even levels the other one.
pub fn basis_for(logical: LogicalBasis, level: usize) -> Basis {
    match (logical, level % 2 == 1) {
        (LogicalBasis::X, true) | (LogicalBasis::Z, false) => Basis::X,
        _ => Basis::Z,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RawOutcome {
    Measured(Sign),
    Lost,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasNode {
    pub photon: usize,
    pub level: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub basis: Basis,
    pub raw: RawOutcome,
    pub z_bit: bool,
    /// Raw outcome with side effects and BSM propagation applied; `None` if lost.
    pub resolved: Option<Sign>,
}

/// The outer photon of an arm and its Bell-measurement sign, if it had one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OuterRecord {
    pub photon: usize,
    pub z_bit: bool,
    pub bsm: Option<Sign>,
}

impl OuterRecord {
    /// BSM sign with the outer photon's own side effect folded in.
    pub fn resolved(&self) -> Option<Sign> {
        self.bsm.map(|s| s.flipped_if(self.z_bit))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementTree {
    pub logical: LogicalBasis,
    pub outer: OuterRecord,
    pub nodes: Vec<MeasNode>,
    pub level1: Vec<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeOptions {
    /// Majority over all resolvable children for indirect Z instead of the
    /// lowest-index one.
    pub majority_indirect: bool,
}

/// Why a logical value could not be decoded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecodeFailure {
    /// A first-level Z value is unavailable.
    Unresolved { node: usize },
    /// No first-level node yields a logical-X candidate.
    NoCandidate,
    /// Logical-X candidates split evenly.
    Tie,
}

/// Assign bases and resolve raw results for one arm.
pub fn build_tree(
    arm: &ArmLayout,
    logical: LogicalBasis,
    raw: &BTreeMap<usize, RawOutcome>,
    bsm: Option<Sign>,
    side_effects: &SideEffectRecord,
) -> Result<MeasurementTree, DecodeError> {
    let mut nodes = Vec::with_capacity(arm.nodes.len());
    for n in &arm.nodes {
        let r = *raw.get(&n.photon).ok_or(DecodeError::MissingResult(n.photon))?;
        let basis = basis_for(logical, n.level);
        let z_bit = side_effects.photon(n.photon);
        let resolved = match r {
            RawOutcome::Lost => None,
            RawOutcome::Measured(s) if basis == Basis::X => Some(s.flipped_if(z_bit)),
            RawOutcome::Measured(s) => Some(s),
        };
        nodes.push(MeasNode {
            photon: n.photon,
            level: n.level,
            parent: n.parent,
            children: n.children.clone(),
            basis,
            raw: r,
            z_bit,
            resolved,
        });
    }
    let outer = OuterRecord { photon: arm.outer, z_bit: side_effects.photon(arm.outer), bsm };
    Ok(MeasurementTree { logical, outer, nodes, level1: arm.level1.clone() })
}

impl MeasurementTree {
    /// Flip the first level when the opposite outer photon's sign is −1.
    pub fn propagate_bsm(&mut self, opposite: Sign) {
        if opposite.is_minus() {
            for &i in &self.level1 {
                if let Some(s) = self.nodes[i].resolved.as_mut() {
                    *s = -*s;
                }
            }
        }
    }

    /// Z value of a Z-basis node, measured directly or inferred from a child
    /// measured in X together with that child's own children.
    pub fn indirect_z(&self, node: usize, opts: DecodeOptions) -> Result<Option<Sign>, DecodeError> {
        let n = self.nodes.get(node).ok_or(DecodeError::NoSuchNode(node))?;
        if n.basis != Basis::Z {
            return Err(DecodeError::NotZBasis(node));
        }
        Ok(self.z_value(node, opts))
    }

    fn z_value(&self, node: usize, opts: DecodeOptions) -> Option<Sign> {
        let n = &self.nodes[node];
        if let Some(s) = n.resolved {
            return Some(s);
        }
        let mut votes = Vec::new();
        for &b in &n.children {
            if let Some(v) = self.x_parity(b, opts) {
                if !opts.majority_indirect {
                    return Some(v);
                }
                votes.push(v);
            }
        }
        majority(&votes).ok()
    }

    /// `x_b · Π z_c` over the children `c` of an X-basis node `b`, if all known.
    fn x_parity(&self, b: usize, opts: DecodeOptions) -> Option<Sign> {
        let mut v = self.nodes[b].resolved?;
        for &c in &self.nodes[b].children {
            v = v * self.z_value(c, opts)?;
        }
        Some(v)
    }

    /// Candidate logical-X values, one per first-level node that allows it.
    pub fn logical_x_candidates(&self, opts: DecodeOptions) -> Vec<Sign> {
        if self.logical != LogicalBasis::X {
            return Vec::new();
        }
        self.level1.iter().filter_map(|&c| self.x_parity(c, opts)).collect()
    }

    pub fn decode_logical(&self, opts: DecodeOptions) -> Result<Sign, DecodeFailure> {
        match self.logical {
            LogicalBasis::Z => {
                let mut v = Sign::Plus;
                for &i in &self.level1 {
                    v = v * self.z_value(i, opts).ok_or(DecodeFailure::Unresolved { node: i })?;
                }
                Ok(v)
            }
            LogicalBasis::X => majority(&self.logical_x_candidates(opts)),
        }
    }
}

fn majority(votes: &[Sign]) -> Result<Sign, DecodeFailure> {
    if votes.is_empty() {
        return Err(DecodeFailure::NoCandidate);
    }
    let minus = votes.iter().filter(|s| s.is_minus()).count();
    let plus = votes.len() - minus;
    match plus.cmp(&minus) {
        std::cmp::Ordering::Greater => Ok(Sign::Plus),
        std::cmp::Ordering::Less => Ok(Sign::Minus),
        std::cmp::Ordering::Equal => Err(DecodeFailure::Tie),
    }
}
