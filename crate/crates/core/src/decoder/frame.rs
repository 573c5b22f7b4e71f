use serde::{Deserialize, Serialize};

use super::absa::{AbsaDetail, AbsaReport};
use super::DecodeError;
use crate::graph::{GraphState, SideEffect};
use crate::stab::Gate;
use crate::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EndSide {
    /// The end node left of analyzer 0.
    Left,
    /// The end node right of the last analyzer.
    Right,
}

/// Pending Pauli correction `X^x Z^z` on an end-node memory.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliFrame {
    pub x: bool,
    pub z: bool,
}

impl PauliFrame {
    pub const IDENTITY: Self = Self { x: false, z: false };

    pub fn compose(self, other: PauliFrame) -> PauliFrame {
        PauliFrame { x: self.x ^ other.x, z: self.z ^ other.z }
    }

    pub fn letter(self) -> char {
        match (self.x, self.z) {
            (false, false) => 'I',
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        }
    }

    pub fn gates(self, qubit: usize) -> Vec<Gate> {
        let mut g = Vec::new();
        if self.z {
            g.push(Gate::Z(qubit));
        }
        if self.x {
            g.push(Gate::X(qubit));
        }
        g
    }
}

/// Correction for one end node: `Z^p` with `p` the XOR of its parity bits
/// from every analyzer and its own anchor side effect.
pub fn end_node_frame(reports: &[AbsaReport], side: EndSide, local_z: bool) -> Result<PauliFrame, DecodeError> {
    let mut z = local_z;
    for (i, r) in reports.iter().enumerate() {
        if !r.success {
            return Err(DecodeError::FailedReport(i));
        }
        z ^= match side {
            EndSide::Left => r.parity_left,
            EndSide::Right => r.parity_right,
        };
    }
    Ok(PauliFrame { x: false, z })
}

/// Replays the chain on the logical path `α – ℓ0 – r0 – … – ℓk – rk – β`
/// with graph rewrites, fusing the chosen pairs one analyzer at a time in
/// `order`. Z tags from the logical Z readouts are placed first, each on the
/// chosen tree it is adjacent to. Returns the Z frames of both ends.
pub fn sequential_frames(
    details: &[AbsaDetail],
    anchor_left: bool,
    anchor_right: bool,
    order: &[usize],
) -> Result<(PauliFrame, PauliFrame), DecodeError> {
    let k = details.len();
    let get = |h: usize| -> Result<(bool, bool, bool, bool), DecodeError> {
        let d = &details[h];
        match (d.x_left, d.x_right, d.zpar_left, d.zpar_right) {
            (Some(a), Some(b), Some(c), Some(e)) => Ok((a, b, c, e)),
            _ => Err(DecodeError::FailedReport(h)),
        }
    };
    let alpha = 0;
    let l = |h: usize| 1 + 2 * h;
    let r = |h: usize| 2 + 2 * h;
    let beta = 2 * k + 1;
    let mut path = vec![alpha];
    for h in 0..k {
        path.push(l(h));
        path.push(r(h));
    }
    path.push(beta);
    let edges: Vec<(usize, usize)> = path.windows(2).map(|w| (w[0], w[1])).collect();
    let mut g = GraphState::from_edges(path.iter().copied(), &edges).expect("path graph");

    let tag = |g: &mut GraphState, v: usize, bit: bool| {
        if bit {
            g.toggle_z(v).unwrap();
        }
    };
    tag(&mut g, alpha, anchor_left);
    tag(&mut g, beta, anchor_right);
    for h in 0..k {
        let (_, _, zl, zr) = get(h)?;
        tag(&mut g, if h == 0 { alpha } else { r(h - 1) }, zl);
        tag(&mut g, if h + 1 == k { beta } else { l(h + 1) }, zr);
    }
    for &h in order {
        let (xl, xr, _, _) = get(h)?;
        let fold = |g: &GraphState, v: usize, x: bool| -> Sign {
            Sign::from_bit(x).flipped_if(g.side_effect(v).unwrap() == SideEffect::Z)
        };
        let (ol, or) = (fold(&g, l(h), xl), fold(&g, r(h), xr));
        g.fuse_xx(l(h), r(h), ol, or).expect("chosen pair adjacent on the path");
    }
    debug_assert!(g.has_edge(alpha, beta));
    let frame = |v: usize| PauliFrame { x: false, z: g.side_effect(v).unwrap() == SideEffect::Z };
    Ok((frame(alpha), frame(beta)))
}

/// One-shot aggregation: each end XORs every parity bit sent its way.
pub fn one_shot_frames(reports: &[AbsaReport], anchor_left: bool, anchor_right: bool) -> Result<(PauliFrame, PauliFrame), DecodeError> {
    Ok((end_node_frame(reports, EndSide::Left, anchor_left)?, end_node_frame(reports, EndSide::Right, anchor_right)?))
}
