//! Pattern-avoiding two-stack sorting machines.
//!
//! A `(σ, τ)`-machine passes a permutation through a stack that may never
//! contain an occurrence of `σ` or `τ` (read top to bottom), operated
//! greedily, and then through a classical stack. This crate simulates those
//! machines, decides sortability both by simulation and by pattern-avoidance
//! characterizations, implements the associated bijections, and provides an
//! exhaustive enumeration harness that checks counts against reference
//! sequences.

pub mod bijection;
pub mod characterize;
pub mod error;
pub mod harness;
pub mod machine;
pub mod pattern;
pub mod perm;
pub mod sequences;

pub use error::{Error, Result};
pub use machine::{is_sortable, out_t, run_stack, sort_series, MachineConfig, SortingTrace};
pub use pattern::{avoids_all, PatternSpec};
pub use perm::{
    partial_permutations, permutations, Decomposition, DecompositionKind, PartialPermutation,
    Permutation,
};
pub use sequences::{sequence_value, SequenceName};
