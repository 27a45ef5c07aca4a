//! Class groups of toric rings attached to posets and graphs, computed
//! exactly, together with unimodular equivalence and small censuses.

pub mod canon;
pub mod census;
pub mod classgroup;
pub mod equivalence;
pub mod error;
pub mod graph;
pub mod lattice;
pub mod polytope;
pub mod poset;

pub use error::{Error, Result};
