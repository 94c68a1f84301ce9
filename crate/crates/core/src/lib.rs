//! Knot-theoretic ternary quasigroups and the invariants built from them.
//!
//! The crate covers axiom checking and enumeration of finite ternary
//! quasigroups, their chain complexes and integer homology, region colorings
//! of knot diagrams, and cocycle state-sum invariants.

pub mod algebra;
pub mod chain;
pub mod cli;
pub mod diagram;
pub mod error;
pub mod homology;
pub mod invariants;
pub mod linalg;

pub use error::Error;
