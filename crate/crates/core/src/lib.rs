//! Simulation and protocol library for photonic repeater chains built from
//! half repeater-graph-state (half-RGS) blocks.
//!
//! * [`stab`]: exact stabilizer tableau, the ground-truth oracle.
//! * [`graph`]: graph state plus local-Clifford side effects, with the
//!   local-complementation, Z-measurement and XX-fusion rewrite rules.
//! * [`build`]: compiles and runs the emitter sequence that produces a
//!   half-RGS, and joins halves into biclique RGSs.
//! * [`decoder`]: the analyzer-side classical processing (measurement trees,
//!   loss-tolerant logical decoding, reports) and end-node Pauli frames.
//! * [`netsim`]: whole-chain trials, batches, and structured records.
//! * [`suites`]: invariant suites shared by the CLI and the test targets.

pub mod build;
pub mod decoder;
pub mod graph;
pub mod netsim;
pub mod sign;
pub mod stab;
pub mod suites;

pub use sign::Sign;
