//! Random walks on graphs, their isomorphism-invariant records, and the
//! quantities used to judge them: cover times, reconstruction, and mixing of
//! averaged readouts.

pub mod conductance;
pub mod cover;
pub mod enumerate;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod invariance;
pub mod mixing;
pub mod reconstruct;
pub mod record;
pub mod rng;
pub mod walk;

pub use conductance::Conductance;
pub use cover::{CoverMode, CoverStats, StartPolicy};
pub use error::{Error, Result};
pub use graph::{Graph, Permutation};
pub use record::{Record, Scheme};
pub use walk::{Restart, SecondOrder, Walk, WalkConfig, WalkEngine};
