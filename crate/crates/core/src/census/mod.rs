//! Exhaustive enumeration of small posets and graphs, classification of
//! their polytopes by class group, and the verification registry.

pub mod classify;
pub mod enumerate;
mod properties;
mod suites;
mod theorems;
pub mod verify;

pub use classify::{census, classify_graph, classify_level, classify_poset, CensusKind, CensusQuery, CensusRecord, Source};
pub use enumerate::{all_graphs, all_posets, enumerate_graphs, enumerate_posets, GraphFilter};
pub use verify::{verify, Bounds, VerifyReport, VERIFY_IDS};
