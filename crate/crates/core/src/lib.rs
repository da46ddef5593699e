//! Effective-spin structure of multimode squeezing graphs.
//!
//! A graph with integer edge weights defines a two-mode-squeezing generator.
//! This crate maps that continuous-variable description onto collective
//! spins: exact symbolic derivation of the spin operators that annihilate
//! the squeezed state (or commute with the generator), truncated-Fock
//! simulation of the state itself, post-selection onto fixed spin sectors,
//! and entanglement characterization of what remains.

pub mod accept;
pub mod entangle;
pub mod focksim;
pub mod heisenberg;
pub mod hgraph;
pub mod linalg;
pub mod nullifiers;
pub mod qops;
pub mod report;
pub mod scalar;

pub use hgraph::{builtin, Builtin, HGraph, HGraphError, SpinPairing};
pub use qops::{QuadOp, QuadOpF, SpinComponent};
pub use scalar::GRat;
