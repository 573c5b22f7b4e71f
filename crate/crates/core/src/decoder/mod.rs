//! Analyzer-side classical processing and end-node Pauli frames.

mod absa;
mod frame;
mod tree;

use thiserror::Error;

pub use absa::{absa_process, run_bsm, select_arm, AbsaDetail, AbsaReport, Arrival, BsmOutcome, BsmStatus};
pub use frame::{end_node_frame, one_shot_frames, sequential_frames, EndSide, PauliFrame};
pub use tree::{
    basis_for, build_tree, DecodeFailure, DecodeOptions, LogicalBasis, MeasNode, MeasurementTree, OuterRecord, RawOutcome,
};

use crate::stab::StabError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("no raw result for photon {0}")]
    MissingResult(usize),
    #[error("tree has no node {0}")]
    NoSuchNode(usize),
    #[error("node {0} is not measured in Z")]
    NotZBasis(usize),
    #[error("photon {0} was lost and cannot enter a Bell measurement")]
    LostPhoton(usize),
    #[error("analyzer {0} reported failure")]
    FailedReport(usize),
    #[error(transparent)]
    Stab(#[from] StabError),
}
