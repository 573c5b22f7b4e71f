//! Whole-chain trials on one global tableau, and parallel batches of them.
//!
//! A trial generates every half-RGS from its emitter schedule, joins the
//! halves at each source, sends photons through lossy channels, runs the
//! analyzers, applies the end-node frames and checks the final pair.

mod batch;
mod config;
mod trial;

use thiserror::Error;

pub use batch::{run_batch, summarize, BatchResult, BatchSummary, SCHEMA_VERSION};
pub use config::ChainConfig;
pub use trial::{run_trial, transmit, trial_rng, verify_final, AbsaTrace, Chain, Corrections, TrialRecord};

use crate::build::BuildError;
use crate::decoder::DecodeError;
use crate::stab::StabError;

#[derive(Debug, Error)]
pub enum NetsimError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Stab(#[from] StabError),
    #[error("worker pool: {0}")]
    Pool(String),
}
