//! Convex-roof upper bound through the ensemble-descent optimizer.

use alloc::vec::Vec;

use super::{
    MeasureOptions, MeasureResult, MeasureStatus, SolverStats, State, generalized_robustness,
    nuclear_gauge, pure_gauge, roof_objective,
};
use crate::error::Result;
use crate::linalg::StateVector;
use crate::solvers::ensemble::{EnsembleOptions, ensemble_optimize};
use crate::theories::{Theory, TheoryDescriptor, free_membership};

#[allow(unused_imports)]
use num_traits::Float;

/// Upper bound on the convex roof of the squared vector gauge.
///
/// Pure states are exact (the roof collapses to the squared gauge). Mixed
/// states run the ensemble optimizer; the `lower` field carries the best
/// available lower bound — `max(nuclear gauge, R_g + 1)` on polytope
/// theories, `2N + 1` from the negativity for Schmidt theories with k = 1,
/// and the trivial bound 1 otherwise — and the optimizer stops early when
/// it reaches that bound.
pub fn convex_roof_upper(
    state: &State,
    theory: &Theory,
    opts: &MeasureOptions,
) -> Result<MeasureResult> {
    if let State::Pure(psi) = state {
        let g = pure_gauge(psi, theory, opts)?;
        return Ok(MeasureResult::exact(g * g));
    }
    let rho = state.density();
    if rho.dim() != theory.dim() {
        return Err(crate::error::Error::DimensionMismatch {
            expected: theory.dim(),
            got: rho.dim(),
        });
    }

    // Lower bound and a free-decomposition seed, when the theory affords them.
    let mut lower = 1.0f64;
    let mut seeds: Vec<Vec<(f64, StateVector)>> = Vec::new();
    if theory.polytope().is_some() {
        if let Ok(n) = nuclear_gauge(state, theory, opts) {
            if n.is_finite() {
                lower = lower.max(n.value);
            }
        }
        if let Ok(rg) = generalized_robustness(state, theory, opts) {
            if rg.is_finite() {
                lower = lower.max(rg.value + 1.0);
            }
        }
        if let Ok(cert) = free_membership(&rho, theory) {
            if let Some(weights) = cert.weights {
                let polytope = theory.polytope().expect("polytope checked");
                let seed: Vec<(f64, StateVector)> = weights
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| **w > 1e-12)
                    .map(|(i, w)| (*w, polytope.vertices()[i].clone()))
                    .collect();
                if !seed.is_empty() {
                    seeds.push(seed);
                }
            }
        }
    } else if let TheoryDescriptor::SchmidtK { da, db, k: 1 } = theory.descriptor() {
        let neg = super::negativity(&rho, *da, *db)?;
        lower = lower.max(2.0 * neg + 1.0);
    }

    let mut g = roof_objective(theory, opts)?;
    let ens_opts = EnsembleOptions {
        members: None,
        restarts: opts.restarts,
        seed: opts.seed,
        lower_stop: Some(lower),
        ..Default::default()
    };
    let (value, ens) = ensemble_optimize(&rho, &mut g, &ens_opts, &seeds)?;
    let value = value.max(lower);
    Ok(MeasureResult {
        value,
        status: MeasureStatus::Heuristic,
        lower,
        upper: value,
        witness: None,
        gap: Some(value - lower),
        stats: SolverStats { iterations: ens.members.len(), rounds: opts.restarts, cuts: 0 },
    })
}
