//! Geometric measure: one minus the best squared root fidelity to the free
//! set. Mixed states maximize the concave root fidelity over the free
//! polytope by Frank-Wolfe and square at the end (the monotone transform
//! preserves the argmax).

use alloc::vec::Vec;

use super::{MeasureOptions, MeasureResult, SolverStats, State, certify_status};
use crate::error::{Error, Result};
use crate::gauges::geometric_pure;
use crate::linalg::{C64, ComplexMatrix, HermitianOperator, hermitian_eig};
use crate::solvers::frank_wolfe::{FrankWolfeOptions, frank_wolfe_maximize};
use crate::theories::Theory;

#[allow(unused_imports)]
use num_traits::Float;

/// Eigenvalue floor of the regularized inverse square root in the
/// root-fidelity gradient.
const GRAD_FLOOR: f64 = 1e-12;

pub fn geometric_measure(
    state: &State,
    theory: &Theory,
    opts: &MeasureOptions,
) -> Result<MeasureResult> {
    if let State::Pure(psi) = state {
        return Ok(MeasureResult::exact(geometric_pure(psi, theory)?));
    }
    let polytope = theory
        .require_polytope("geometric measure on mixed states needs a polytope free set")?;
    let rho = state.density();
    if polytope.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: polytope.dim(), got: rho.dim() });
    }
    let d = rho.dim();
    let k = polytope.len();
    let sqrt_rho = rho.op().sqrt_psd()?;
    let projectors: Vec<HermitianOperator> =
        (0..k).map(|i| polytope.vertex_projector(i)).collect();

    let sigma_of = |x: &[f64]| -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(d, d);
        for (p, &w) in projectors.iter().zip(x) {
            if w != 0.0 {
                acc = acc.add(&p.matrix().scale(C64::new(w, 0.0)));
            }
        }
        acc
    };
    // Root fidelity via the trace square root of K = sqrt(rho) sigma sqrt(rho).
    let kernel = |x: &[f64]| -> HermitianOperator {
        HermitianOperator::new(sqrt_rho.mul(&sigma_of(x)).mul(&sqrt_rho))
            .expect("congruence keeps Hermiticity")
    };
    let mut f = |x: &[f64]| -> f64 {
        let dec = hermitian_eig(&kernel(x));
        let cutoff = dec.eigenvalues[0].max(0.0) * 1e-13;
        dec.eigenvalues.iter().filter(|&&l| l > cutoff).map(|l| l.sqrt()).sum()
    };
    // Gradient with respect to the weights:
    // d/dx_j Tr sqrt(K) = <(1/2) R K^{-1/2} R, sigma_j> with floored inverse.
    let mut grad = |x: &[f64]| -> Vec<f64> {
        let dec = hermitian_eig(&kernel(x));
        let inv_sqrt = dec.apply(|l| 0.5 / l.max(GRAD_FLOOR).sqrt());
        let g = sqrt_rho.mul(&inv_sqrt).mul(&sqrt_rho);
        let g = HermitianOperator::new(g).expect("Hermitian gradient");
        projectors.iter().map(|p| g.inner(p)).collect()
    };

    let fw_opts = FrankWolfeOptions {
        tol: opts.tol.max(1e-10),
        max_iter: opts.max_iter.min(5_000),
        line_search_iters: 48,
    };
    let res = frank_wolfe_maximize(&mut f, &mut grad, k, &fw_opts);

    // Root fidelity lies in [value, value + gap]; the measure is one minus
    // its square.
    let rf = res.value.clamp(0.0, 1.0);
    let rf_hi = (res.value + res.gap.max(0.0)).clamp(0.0, 1.0);
    let value = (1.0 - rf * rf).max(0.0);
    let lower = (1.0 - rf_hi * rf_hi).max(0.0);
    Ok(MeasureResult {
        value,
        status: certify_status(value, value - lower),
        lower,
        upper: value,
        witness: None,
        gap: Some(res.gap.max(0.0)),
        stats: SolverStats { iterations: res.iterations, rounds: 1, cuts: 0 },
    })
}
