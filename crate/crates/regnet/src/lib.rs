//! regnet: a round-based simulator and analysis toolkit for ad-hoc
//! multi-agent networks that self-organize into random (approximately)
//! k-regular graphs.
//!
//! The crate provides:
//! - a mutable simple-graph core with stable node ids ([`graph`]);
//! - two distributed rewiring protocols, one coordinated between neighbor
//!   pairs and one fully uncoordinated with per-edge ownership
//!   ([`protocol`]);
//! - spectral analysis of the results: algebraic connectivity, Fiedler
//!   vectors, and eigenvalue-distribution histograms with their limiting
//!   densities ([`spectral`]);
//! - a Fiedler-sign targeted node-removal adversary ([`attack`]);
//! - a seeded Monte-Carlo experiment harness with CSV/JSON export
//!   ([`harness`]).
//!
//! Trials are deterministic per seed and independent across seeds; with the
//! default `parallel` feature seed ensembles run on a rayon pool, without it
//! they run inline with identical output.

pub mod attack;
pub mod graph;
pub mod harness;
pub mod protocol;
pub mod rng;
pub mod spectral;

pub use graph::{DegreeStats, Graph, GraphError, NodeId};
pub use protocol::{ActionDelta, ActionLedger, Engine, ProtocolKind, ProtocolParams};
