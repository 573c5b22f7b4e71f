use std::collections::BTreeMap;

use proptest::prelude::*;
use rgs_core::build::{compile_half_rgs, BranchingVector, SideEffectRecord};
use rgs_core::decoder::{
    build_tree, one_shot_frames, sequential_frames, AbsaDetail, AbsaReport, DecodeFailure, DecodeOptions, LogicalBasis, RawOutcome,
};
use rgs_core::suites::indirect_soundness;
use rgs_core::Sign;

#[test]
fn indirect_z_matches_forked_oracle() {
    let r = indirect_soundness(500, 17);
    assert!(r.passed(), "{r}");
}

fn detail(bits: [bool; 4]) -> AbsaDetail {
    AbsaDetail {
        chosen: Some(0),
        x_left: Some(bits[0]),
        x_right: Some(bits[1]),
        zpar_left: Some(bits[2]),
        zpar_right: Some(bits[3]),
        failure: None,
    }
}

fn report(d: &AbsaDetail) -> AbsaReport {
    AbsaReport {
        success: true,
        parity_left: d.x_right.unwrap() ^ d.zpar_left.unwrap(),
        parity_right: d.x_left.unwrap() ^ d.zpar_right.unwrap(),
    }
}

#[test]
fn single_analyzer_parity_gives_z() {
    let d = detail([false, true, false, false]);
    let (l, r) = one_shot_frames(&[report(&d)], false, false).unwrap();
    assert_eq!((l.letter(), r.letter()), ('Z', 'I'));
    assert_eq!(sequential_frames(&[d], false, false, &[0]).unwrap(), (l, r));
}

proptest! {
    #[test]
    fn hop_by_hop_matches_one_shot(
        bits in prop::collection::vec(any::<[bool; 4]>(), 1..6),
        anchors in any::<(bool, bool)>(),
        shuffle in any::<u64>(),
    ) {
        let details: Vec<AbsaDetail> = bits.iter().map(|&b| detail(b)).collect();
        let reports: Vec<AbsaReport> = details.iter().map(report).collect();
        let mut order: Vec<usize> = (0..details.len()).collect();
        // Any fusion order gives the same frames.
        let n = order.len();
        for i in (1..n).rev() {
            order.swap(i, (shuffle as usize >> (i % 16)) % (i + 1));
        }
        let seq = sequential_frames(&details, anchors.0, anchors.1, &order).unwrap();
        prop_assert_eq!(seq, one_shot_frames(&reports, anchors.0, anchors.1).unwrap());
    }

    #[test]
    fn decoding_is_total(
        bi in 0usize..4,
        pattern in prop::collection::vec(0u8..3, 20),
        tags in prop::collection::vec(any::<bool>(), 20),
        x_basis in any::<bool>(),
        majority in any::<bool>(),
    ) {
        let b: BranchingVector = ["1", "2", "2,2", "2,3"][bi].parse().unwrap();
        let (layout, _) = compile_half_rgs(1, &b, 0).unwrap();
        let arm = &layout.arms[0];
        let mut raw = BTreeMap::new();
        let mut rec = SideEffectRecord::default();
        for (i, n) in arm.nodes.iter().enumerate() {
            let r = match pattern[i] {
                0 => RawOutcome::Lost,
                1 => RawOutcome::Measured(Sign::Plus),
                _ => RawOutcome::Measured(Sign::Minus),
            };
            raw.insert(n.photon, r);
            if tags[i] {
                rec.toggle(n.photon);
            }
        }
        let logical = if x_basis { LogicalBasis::X } else { LogicalBasis::Z };
        let tree = build_tree(arm, logical, &raw, Some(Sign::Minus), &rec).unwrap();
        prop_assert_eq!(tree.nodes.len(), b.tree_size());
        for n in &tree.nodes {
            prop_assert_eq!(n.raw == RawOutcome::Lost, n.resolved.is_none());
        }
        let opts = DecodeOptions { majority_indirect: majority };
        match tree.decode_logical(opts) {
            Ok(_) => {}
            Err(DecodeFailure::Unresolved { node }) => prop_assert!(!x_basis && tree.level1.contains(&node)),
            Err(DecodeFailure::NoCandidate | DecodeFailure::Tie) => prop_assert!(x_basis),
        }
    }
}
