//! Resource quantifiers: robustness measures, base gauge, best free
//! approximation, modified trace distance, nuclear gauge, convex-roof upper
//! bounds, geometric measure, negativity, polar gauges on PSD inputs, and
//! witness validation.
//!
//! Mixed-state programs run on polytope free sets (magic, coherence with
//! k = 1) through the LP/cutting-plane solvers; pure states take the
//! closed-form vector-gauge fast paths valid for every supported theory.

mod geometric;
mod nuclear;
mod polar;
mod robustness;
mod roof;
mod witness;

pub use geometric::geometric_measure;
pub use nuclear::nuclear_gauge;
pub use polar::{PolarResult, polar_gauge_psd};
pub use robustness::{
    base_gauge, best_free_approximation, generalized_robustness, modified_trace_distance,
    random_robustness, standard_robustness,
};
pub use roof::convex_roof_upper;
pub use witness::{WitnessCheck, WitnessKind, witness_validate};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gauges;
use crate::linalg::{C64, DensityMatrix, HermitianOperator, StateVector, trace_norm};
use crate::solvers::admm::{AdmmOptions, AffineL1Problem, admm_l1_affine};
use crate::theories::{Theory, TheoryDescriptor};

#[allow(unused_imports)]
use num_traits::Float;

/// Input to a measure: a pure state (closed-form fast paths apply) or a
/// density matrix (solver paths, polytope theories only).
#[derive(Clone, Debug)]
pub enum State {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl State {
    pub fn dim(&self) -> usize {
        match self {
            State::Pure(psi) => psi.dim(),
            State::Mixed(rho) => rho.dim(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            State::Pure(psi) => DensityMatrix::from_pure(psi),
            State::Mixed(rho) => rho.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&StateVector> {
        match self {
            State::Pure(psi) => Some(psi),
            State::Mixed(_) => None,
        }
    }
}

/// How the reported value relates to the true quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureStatus {
    /// Closed form or LP with matched witness bound.
    Exact,
    /// Iterative solve with a duality-gap certificate within tolerance.
    Certified,
    /// One-sided value; see the bound fields for the direction.
    Heuristic,
    /// The state lies outside the span of the free set; the measure is
    /// infinite by definition, not by numerical overflow.
    Infinite,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolverStats {
    pub iterations: usize,
    pub rounds: usize,
    pub cuts: usize,
}

/// Value plus certification data for one measure evaluation.
#[derive(Clone, Debug)]
pub struct MeasureResult {
    pub value: f64,
    pub status: MeasureStatus,
    pub lower: f64,
    pub upper: f64,
    /// Feasible dual witness, when the defining program produces one.
    pub witness: Option<HermitianOperator>,
    /// |primal - dual| certificate, when both sides were computed.
    pub gap: Option<f64>,
    pub stats: SolverStats,
}

impl MeasureResult {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            status: MeasureStatus::Exact,
            lower: value,
            upper: value,
            witness: None,
            gap: Some(0.0),
            stats: SolverStats::default(),
        }
    }

    pub fn infinite() -> Self {
        Self {
            value: f64::INFINITY,
            status: MeasureStatus::Infinite,
            lower: f64::INFINITY,
            upper: f64::INFINITY,
            witness: None,
            gap: None,
            stats: SolverStats::default(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.status != MeasureStatus::Infinite
    }
}

/// A result is certified when primal and witness values agree to
/// `1e-5 (1 + value)`.
pub const CERTIFY_REL: f64 = 1e-5;

pub(crate) fn certify_status(value: f64, gap: f64) -> MeasureStatus {
    if gap.abs() <= CERTIFY_REL * (1.0 + value.abs()) {
        MeasureStatus::Certified
    } else {
        MeasureStatus::Heuristic
    }
}

/// Solver knobs shared by the measure evaluations.
#[derive(Clone, Copy, Debug)]
pub struct MeasureOptions {
    /// Convergence tolerance of the iterative solvers.
    pub tol: f64,
    /// Iteration cap for ADMM / Frank-Wolfe.
    pub max_iter: usize,
    /// Round cap for the cutting-plane loop.
    pub max_rounds: usize,
    /// Restart count for the ensemble and ascent heuristics.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 50_000, max_rounds: 500, restarts: 32, seed: 0 }
    }
}

impl MeasureOptions {
    pub(crate) fn admm(&self) -> AdmmOptions {
        AdmmOptions { tol: self.tol, max_iter: self.max_iter }
    }

    /// PSD tolerance scaled by the Frobenius norm of the state.
    pub(crate) fn eps_psd(&self, scale: f64) -> f64 {
        1e-8 * (1.0 + scale)
    }
}

/// The vector atomic gauge of a pure state in the given theory: the
/// k-support norm (coherence), the k-support norm of the Schmidt vector
/// (Schmidt number), the bipartition minimum (genuine multipartite), or the
/// dictionary l1 gauge (magic, via ADMM).
pub fn pure_gauge(psi: &StateVector, theory: &Theory, opts: &MeasureOptions) -> Result<f64> {
    match theory.descriptor() {
        TheoryDescriptor::CoherenceK { d, k } => {
            if psi.dim() != *d {
                return Err(Error::DimensionMismatch { expected: *d, got: psi.dim() });
            }
            gauges::ksupport_norm(psi.amplitudes(), *k)
        }
        TheoryDescriptor::SchmidtK { da, db, k } => {
            let sd = crate::linalg::schmidt_decompose(psi, *da, *db)?;
            gauges::ksupport_norm_mags(&sd.coefficients, *k)
        }
        TheoryDescriptor::GenuineMultipartite { dims } => {
            let psi = psi.with_dims(dims.clone())?;
            gauges::genuine_gauge(&psi)
        }
        TheoryDescriptor::MagicQubits { .. } => {
            let polytope = theory.require_polytope("magic gauge needs the vertex dictionary")?;
            let problem = AffineL1Problem {
                a: polytope.dictionary().clone(),
                b: psi.amplitudes().to_vec(),
            };
            let res = admm_l1_affine(&problem, &opts.admm())?;
            Ok(res.value)
        }
    }
}

/// Negativity `(||rho^{T_B}||_1 - 1) / 2` across the `da x db` bipartition.
pub fn negativity(rho: &DensityMatrix, da: usize, db: usize) -> Result<f64> {
    let rho = rho.with_dims(alloc::vec![da, db])?;
    let pt = crate::linalg::partial_transpose(&rho, 1)?;
    Ok((trace_norm(&pt) - 1.0) / 2.0)
}

/// `log2(1 + R_g)`: the smallest max-relative entropy to the free set.
pub fn log_generalized_robustness(
    state: &State,
    theory: &Theory,
    opts: &MeasureOptions,
) -> Result<MeasureResult> {
    let rg = generalized_robustness(state, theory, opts)?;
    if !rg.is_finite() {
        return Ok(MeasureResult::infinite());
    }
    let log2 = |v: f64| (1.0 + v.max(0.0)).ln() / core::f64::consts::LN_2;
    Ok(MeasureResult {
        value: log2(rg.value),
        status: rg.status,
        lower: log2(rg.lower),
        upper: log2(rg.upper),
        witness: rg.witness,
        gap: rg.gap,
        stats: rg.stats,
    })
}

/// Residual of `target` against the linear span of `columns` (orthonormal
/// basis by modified Gram-Schmidt). Used to detect off-span inputs whose
/// base-norm measures are infinite.
pub(crate) fn span_residual(columns: &[Vec<f64>], target: &[f64]) -> f64 {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for col in columns {
        let mut v = col.clone();
        for b in &basis {
            let dot: f64 = b.iter().zip(&v).map(|(x, y)| x * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= dot * bi;
            }
        }
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-10 {
            for vi in &mut v {
                *vi /= n;
            }
            basis.push(v);
        }
    }
    let mut resid = target.to_vec();
    for b in &basis {
        let dot: f64 = b.iter().zip(&resid).map(|(x, y)| x * y).sum();
        for (ri, bi) in resid.iter_mut().zip(b) {
            *ri -= dot * bi;
        }
    }
    resid.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Squared-gauge objective for the convex roof of the given theory,
/// evaluated on normalized amplitudes.
pub(crate) fn roof_objective<'t>(
    theory: &'t Theory,
    opts: &MeasureOptions,
) -> Result<alloc::boxed::Box<dyn FnMut(&[C64]) -> f64 + 't>> {
    let opts = *opts;
    match theory.descriptor().clone() {
        TheoryDescriptor::CoherenceK { k, .. } => Ok(alloc::boxed::Box::new(move |x: &[C64]| {
            let g = gauges::ksupport_norm(x, k).expect("valid k");
            g * g
        })),
        TheoryDescriptor::SchmidtK { da, db, k } => Ok(alloc::boxed::Box::new(move |x: &[C64]| {
            let psi = StateVector::new(x.to_vec(), alloc::vec![da, db]).expect("unit member");
            let g = gauges::schmidt_gauge(&psi, da, db, k).expect("schmidt gauge");
            g * g
        })),
        TheoryDescriptor::GenuineMultipartite { dims } => {
            Ok(alloc::boxed::Box::new(move |x: &[C64]| {
                let psi = StateVector::new(x.to_vec(), dims.clone()).expect("unit member");
                let g = gauges::genuine_gauge(&psi).expect("genuine gauge");
                g * g
            }))
        }
        TheoryDescriptor::MagicQubits { .. } => {
            let polytope =
                theory.require_polytope("magic roof needs the vertex dictionary")?;
            let dict = polytope.dictionary().clone();
            if dict.rows() == 2 && polytope.len() == 6 {
                // One qubit with the exact vertex set: the closed Bloch form
                // (see `nuclear::magic_qubit_gauge_sq`) is far cheaper than
                // ADMM in the inner loop of the ensemble optimizer.
                Ok(alloc::boxed::Box::new(move |x: &[C64]| nuclear::magic_qubit_gauge_sq(x)))
            } else {
                let admm = AdmmOptions { tol: opts.tol.max(1e-7), max_iter: 5_000 };
                Ok(alloc::boxed::Box::new(move |x: &[C64]| {
                    let problem = AffineL1Problem { a: dict.clone(), b: x.to_vec() };
                    match admm_l1_affine(&problem, &admm) {
                        Ok(res) => res.value * res.value,
                        Err(_) => f64::INFINITY,
                    }
                }))
            }
        }
    }
}
