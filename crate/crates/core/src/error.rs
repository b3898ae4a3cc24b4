//! Crate-wide error type.

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Input matrix deviates from Hermiticity beyond tolerance.
    NotHermitian { deviation: f64 },
    /// Matrix fails the density-matrix invariants (unit trace, PSD).
    NotDensity { trace_error: f64, min_eigenvalue: f64 },
    /// State vector is not normalized within tolerance.
    NotNormalized { norm: f64 },
    /// Matrix is expected positive semidefinite but has a negative eigenvalue.
    NotPsd { min_eigenvalue: f64 },
    /// Operand dimensions do not match.
    DimensionMismatch { expected: usize, got: usize },
    /// Subsystem index out of range.
    InvalidSubsystem { index: usize, count: usize },
    /// Partial trace asked to keep an empty set of factors.
    EmptyKeepSet,
    /// Requested rank is zero or exceeds the dimension.
    InvalidRank { rank: usize, dim: usize },
    /// Sparsity/Schmidt level `k` outside `1..=d`.
    KOutOfRange { k: usize, d: usize },
    /// Party count outside the supported enumeration range.
    PartyCountOutOfRange { n: usize, max: usize },
    /// The free set of the theory is a continuum, not a polytope.
    ContinuumFreeSet,
    /// Operation not defined for the given theory/input combination.
    Unsupported(&'static str),
    /// Constraint system has no solution.
    Infeasible,
    /// Objective unbounded on the feasible set.
    Unbounded,
    /// Iterative solver failed to converge within its budget.
    SolverStalled { iterations: usize, residual: f64 },
    /// Malformed theory specification string.
    TheoryParse(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (deviation {deviation:.3e})")
            }
            Error::NotDensity { trace_error, min_eigenvalue } => write!(
                f,
                "not a density matrix (trace error {trace_error:.3e}, min eigenvalue {min_eigenvalue:.3e})"
            ),
            Error::NotNormalized { norm } => {
                write!(f, "state vector not normalized (norm {norm:.12})")
            }
            Error::NotPsd { min_eigenvalue } => {
                write!(f, "matrix not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidSubsystem { index, count } => {
                write!(f, "subsystem index {index} out of range for {count} factors")
            }
            Error::EmptyKeepSet => write!(f, "partial trace must keep at least one factor"),
            Error::InvalidRank { rank, dim } => {
                write!(f, "rank {rank} invalid for dimension {dim}")
            }
            Error::KOutOfRange { k, d } => write!(f, "k = {k} outside 1..={d}"),
            Error::PartyCountOutOfRange { n, max } => {
                write!(f, "party count {n} outside supported range 1..={max}")
            }
            Error::ContinuumFreeSet => {
                write!(f, "free set of this theory is a continuum, not a polytope")
            }
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
            Error::Infeasible => write!(f, "constraint system is infeasible"),
            Error::Unbounded => write!(f, "objective is unbounded"),
            Error::SolverStalled { iterations, residual } => {
                write!(f, "solver stalled after {iterations} iterations (residual {residual:.3e})")
            }
            Error::TheoryParse(msg) => write!(f, "theory spec parse error: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
