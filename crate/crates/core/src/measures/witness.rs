//! Validation of robustness witnesses against their dual feasible sets.

use super::State;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator, hermitian_eig};
use crate::theories::Theory;

#[allow(unused_imports)]
use num_traits::Float;

/// Which dual program the witness claims feasibility for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// `W` in the dual cone of the free set with `W <= I`.
    Generalized,
    /// `W` in the dual cone with `<sigma_i, W> <= 1` for all free states.
    Standard,
}

/// Feasibility residuals and certified bound of a witness candidate.
#[derive(Clone, Copy, Debug)]
pub struct WitnessCheck {
    /// `min_i <W, sigma_i>`; feasibility needs this above `-tol`.
    pub min_vertex_inner: f64,
    /// `max_i <W, sigma_i>`; the standard kind needs this below `1 + tol`.
    pub max_vertex_inner: f64,
    /// Smallest eigenvalue of `I - W`; the generalized kind needs this
    /// above `-tol`.
    pub identity_defect: f64,
    /// `-<rho, W>`: a certified lower bound on the robustness when feasible.
    pub bound: f64,
    pub feasible: bool,
}

pub const WITNESS_TOL: f64 = 1e-7;

/// Checks a witness against the vertex set of the theory and reports the
/// certified robustness bound `-<rho, W>`.
pub fn witness_validate(
    witness: &HermitianOperator,
    state: &State,
    theory: &Theory,
    kind: WitnessKind,
) -> Result<WitnessCheck> {
    let polytope = theory.require_polytope("witness validation needs a polytope free set")?;
    if polytope.dim() != witness.dim() {
        return Err(Error::DimensionMismatch { expected: polytope.dim(), got: witness.dim() });
    }
    let rho = state.density();
    let mut min_inner = f64::INFINITY;
    let mut max_inner = f64::NEG_INFINITY;
    for i in 0..polytope.len() {
        let v = witness.inner(&polytope.vertex_projector(i));
        min_inner = min_inner.min(v);
        max_inner = max_inner.max(v);
    }
    let id_minus_w = HermitianOperator::new(
        ComplexMatrix::identity(witness.dim()).sub(witness.matrix()),
    )?;
    let identity_defect = *hermitian_eig(&id_minus_w).eigenvalues.last().unwrap();
    let bound = -witness.inner(rho.op());
    let feasible = match kind {
        WitnessKind::Generalized => {
            min_inner >= -WITNESS_TOL && identity_defect >= -WITNESS_TOL
        }
        WitnessKind::Standard => min_inner >= -WITNESS_TOL && max_inner <= 1.0 + WITNESS_TOL,
    };
    Ok(WitnessCheck { min_vertex_inner: min_inner, max_vertex_inner: max_inner, identity_defect, bound, feasible })
}
