//! Finite structures carrying a partial order and several linear orders that
//! extend it, and the combinatorics behind Ramsey witnesses for them:
//! ordered spaces of linear extensions, anchored rigid surjections, the
//! twisted product of tuples, grid structures `n^m`, and exhaustive
//! coloring searches that either certify a witness or return a bad coloring.

pub mod combinat;
pub mod config;
pub mod engines;
pub mod error;
pub mod grid;
pub mod interp;
pub mod linext;
pub mod rigsurj;
pub mod structures;

#[cfg(feature = "oracles")]
pub mod acceptance;
#[cfg(feature = "oracles")]
pub mod oracle;

pub use config::{OutputFormat, RunConfig};
pub use error::{Error, Result};
pub use linext::{LinearOrder, OrderedExtensionSpace};
pub use rigsurj::{AnchoredRigidSurjection, Anchors, Tuple};
pub use structures::{Embedding, PartialOrder, RawStructure, Structure};
