//! Optimization kernels: dense two-phase simplex, ADMM for complex l1
//! minimization under affine constraints, an eigenvector cutting-plane loop
//! for PSD-constrained LPs, Frank-Wolfe over polytopes, and the
//! ensemble-descent convex-roof optimizer.

pub mod admm;
pub mod cutting_plane;
pub mod ensemble;
pub mod frank_wolfe;
pub mod simplex;
