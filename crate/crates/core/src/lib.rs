//! Convex-gauge engine for quantifying quantum resources.
//!
//! The crate computes resource monotones (robustness measures, nuclear
//! gauges, convex-roof bounds, geometric measures, witnesses) for four
//! resource theories: multi-level coherence, entanglement of Schmidt
//! number `k`, genuine multipartite entanglement, and magic states.
//! Everything is built on a small dense complex linear-algebra kernel
//! and a handful of desk-scale optimization routines (two-phase simplex,
//! ADMM for affine-constrained l1 problems, an eigenvector cutting-plane
//! loop for semidefinite constraints, Frank-Wolfe over polytopes, and an
//! ensemble-descent convex-roof optimizer).
//!
//! The crate is `no_std`-compatible (with `alloc`); the companion CLI
//! crate carries all IO and file formats.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod checks;
pub mod error;
pub mod gauges;
pub mod linalg;
pub mod measures;
pub mod solvers;
pub mod states;
pub mod theories;

pub use error::{Error, Result};
