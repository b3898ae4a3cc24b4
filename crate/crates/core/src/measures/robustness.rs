//! Robustness-family measures over polytope free sets, plus the pure-state
//! fast paths that reduce the generalized robustness to the vector gauge.

use alloc::vec;
use alloc::vec::Vec;

use super::{
    MeasureOptions, MeasureResult, MeasureStatus, SolverStats, State,
    certify_status, pure_gauge, span_residual,
};
use crate::error::{Error, Result};
use crate::linalg::{
    C64, ComplexMatrix, DensityMatrix, HermitianOperator, hermitian_eig, hermitian_to_vec,
    vec_to_hermitian,
};
use crate::solvers::cutting_plane::{
    AffineBlock, CuttingPlaneOptions, cutting_plane_psd, dual_operator,
};
use crate::solvers::simplex::{LinearProgram, LpStatus, simplex_solve};
use crate::theories::{PolytopeFreeSet, Theory};

#[allow(unused_imports)]
use num_traits::Float;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Shared LP data for a polytope theory and a target state.
struct PolytopeLp {
    cols: Vec<Vec<f64>>,
    target: Vec<f64>,
    d: usize,
}

fn polytope_lp(rho: &DensityMatrix, polytope: &PolytopeFreeSet) -> Result<PolytopeLp> {
    if polytope.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: polytope.dim(), got: rho.dim() });
    }
    Ok(PolytopeLp {
        cols: polytope.vertex_vectors(),
        target: hermitian_to_vec(rho.op()),
        d: rho.dim(),
    })
}

/// Detects targets outside `span(S_+)`, where the base-norm measures are
/// infinite by definition.
fn off_span(lp: &PolytopeLp, rho: &DensityMatrix) -> bool {
    span_residual(&lp.cols, &lp.target) > 1e-9 * (1.0 + rho.matrix().frobenius_norm())
}

/// Witness from the equality duals of a base-norm LP, oriented so that
/// `-<rho, W>` reproduces the optimum.
fn witness_from_duals(dual_eq: &[f64], d: usize) -> Result<HermitianOperator> {
    let y = vec_to_hermitian(dual_eq, d)?;
    Ok(HermitianOperator::new(y.matrix().scale(re(-1.0)))?)
}

/// Standard robustness: the least `s` such that mixing with weight
/// `s/(1+s)` of some free state lands back in the free set. Solved as
/// `min sum b` over `a, b >= 0` with `sum_i (a_i - b_i) sigma_i = rho`.
/// Infinite when `rho` is off the span of the free set.
pub fn standard_robustness(
    state: &State,
    theory: &Theory,
    opts: &MeasureOptions,
) -> Result<MeasureResult> {
    base_norm_lp(state, theory, opts, false)
}

/// Base gauge `2 R_s + 1` computed from its own LP (`min sum (a + b)`).
pub fn base_gauge(state: &State, theory: &Theory, opts: &MeasureOptions) -> Result<MeasureResult> {
    base_norm_lp(state, theory, opts, true)
}

fn base_norm_lp(
    state: &State,
    theory: &Theory,
    _opts: &MeasureOptions,
    base_objective: bool,
) -> Result<MeasureResult> {
    let polytope = theory.require_polytope(
        "standard robustness / base gauge needs a polytope free set (continuum sets are out of reach at mixed-state level)",
    )?;
    let rho = state.density();
    let lp_data = polytope_lp(&rho, polytope)?;
    if off_span(&lp_data, &rho) {
        return Ok(MeasureResult::infinite());
    }
    let k = lp_data.cols.len();
    let d2 = lp_data.target.len();
    // Variables: a_1..a_k, b_1..b_k.
    let objective: Vec<f64> = if base_objective {
        vec![1.0; 2 * k]
    } else {
        (0..2 * k).map(|j| if j < k { 0.0 } else { 1.0 }).collect()
    };
    let mut lp = LinearProgram::minimize(objective);
    for row in 0..d2 {
        let mut a: Vec<f64> = Vec::with_capacity(2 * k);
        for j in 0..k {
            a.push(lp_data.cols[j][row]);
        }
        for j in 0..k {
            a.push(-lp_data.cols[j][row]);
        }
        lp.eq_constraint(a, lp_data.target[row]);
    }
    let sol = simplex_solve(&lp);
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Ok(MeasureResult::infinite()),
        _ => {
            return Err(Error::SolverStalled { iterations: sol.iterations, residual: f64::NAN })
        }
    }
    // With W = -Y for the equality duals Y, `-<rho, W>` reproduces the LP
    // optimum for both objectives (R_s and the base norm).
    let witness = witness_from_duals(&sol.dual_eq, lp_data.d)?;
    let bound = -witness.inner(rho.op());
    let value = sol.objective;
    let gap = value - bound;
    Ok(MeasureResult {
        value,
        status: certify_status(value, gap),
        lower: bound.min(value),
        upper: value,
        witness: Some(witness),
        gap: Some(gap.abs()),
        stats: SolverStats { iterations: sol.iterations, rounds: 1, cuts: 0 },
    })
}

/// Uniform dictionary direction `u` with `sum_i u_i sigma_i = I`, when the
/// vertex set tiles the identity (true for the stabilizer sets and the
/// computational basis). Used for feasibility restoration.
fn identity_direction(polytope: &PolytopeFreeSet) -> Option<Vec<f64>> {
    let k = polytope.len();
    let d = polytope.dim();
    let mut acc = ComplexMatrix::zeros(d, d);
    for i in 0..k {
        acc = acc.add(polytope.vertex_projector(i).matrix());
    }
    // acc should equal (k/d) I.
    let scale = k as f64 / d as f64;
    let defect = acc.sub(&ComplexMatrix::identity(d).scale(re(scale))).max_abs();
    if defect < 1e-9 * (1.0 + scale) {
        Some(vec![1.0 / scale; k])
    } else {
        None
    }
}

/// Generalized robustness. Pure states reduce to the squared vector gauge
/// minus one for every supported theory; mixed states on polytope theories
/// solve the primal SDP `min sum x` s.t. `sum_i x_i sigma_i >= rho` by
/// eigenvector cutting planes, with the witness assembled from the cut
/// multipliers.
pub fn generalized_robustness(
    state: &State,
    theory: &Theory,
    opts: &MeasureOptions,
) -> Result<MeasureResult> {
    match state {
        State::Pure(psi) => {
            let gauge = pure_gauge(psi, theory, opts)?;
            Ok(MeasureResult::exact((gauge * gauge - 1.0).max(0.0)))
        }
        State::Mixed(rho) => generalized_robustness_mixed(rho, theory, opts),
    }
}

fn generalized_robustness_mixed(
    rho: &DensityMatrix,
    theory: &Theory,
    opts: &MeasureOptions,
) -> Result<MeasureResult> {
    let polytope = theory.require_polytope(
        "generalized robustness on mixed states needs a polytope free set",
    )?;
    if polytope.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: polytope.dim(), got: rho.dim() });
    }
    let k = polytope.len();
    let d = rho.dim();
    let lp = LinearProgram::minimize(vec![1.0; k]);
    let block = AffineBlock {
        f0: HermitianOperator::new(rho.matrix().scale(re(-1.0)))?,
        fi: (0..k).map(|i| polytope.vertex_projector(i)).collect(),
    };
    let cp_opts = CuttingPlaneOptions {
        eps_psd: opts.eps_psd(rho.matrix().frobenius_norm()),
        max_rounds: opts.max_rounds,
    };
    let id_dir = identity_direction(polytope);
    let restore = |x: &[f64], min_eig: f64| -> Option<Vec<f64>> {
        let dir = id_dir.as_ref()?;
        let t = (-min_eig).max(0.0);
        Some(x.iter().zip(dir).map(|(xi, ui)| xi + t * ui).collect())
    };
    let res = cutting_plane_psd(&lp, &[block], &cp_opts, Some(&restore))?;

    // Dual operator W' = sum y_c w w^dag: PSD with <sigma_i, W'> <= 1 within
    // LP tolerance; polish the scaling and read off the certified bound
    // <rho, W'> - 1.
    let mut wprime = dual_operator(&res.cut_record, &res.cut_multipliers, 0, d);
    let mut worst = 0.0f64;
    for i in 0..k {
        worst = worst.max(wprime.inner(&polytope.vertex_projector(i)));
    }
    if worst > 1.0 {
        wprime = HermitianOperator::new(wprime.matrix().scale(re(1.0 / worst)))?;
    }
    let bound = (wprime.inner(rho.op()) - 1.0).max(0.0);
    // Witness in the `-<rho, W>` normalization: W = I - W'.
    let witness =
        HermitianOperator::new(ComplexMatrix::identity(d).sub(wprime.matrix()))?;

    let upper = res.upper_bound.map(|u| u - 1.0);
    let lower_lp = res.lower_bound - 1.0;
    let value = upper.unwrap_or(lower_lp).max(0.0);
    let gap = value - bound;
    let status = if res.converged { certify_status(value, gap) } else { MeasureStatus::Heuristic };
    Ok(MeasureResult {
        value,
        status,
        lower: bound.max(0.0).min(value),
        upper: upper.unwrap_or(f64::INFINITY).max(value),
        witness: Some(witness),
        gap: Some(gap.abs()),
        stats: SolverStats {
            iterations: res.solution.iterations,
            rounds: res.rounds,
            cuts: res.cut_record.cuts.len(),
        },
    })
}

/// Random robustness: least `s` with `rho + s I/d` in the free cone.
/// Infinite off the span of the free set (shares the standard-robustness
/// domain).
pub fn random_robustness(
    state: &State,
    theory: &Theory,
    _opts: &MeasureOptions,
) -> Result<MeasureResult> {
    let polytope = theory.require_polytope("random robustness needs a polytope free set")?;
    let rho = state.density();
    let lp_data = polytope_lp(&rho, polytope)?;
    let k = lp_data.cols.len();
    let d = lp_data.d;
    let idvec = hermitian_to_vec(
        &HermitianOperator::new(ComplexMatrix::identity(d).scale(re(1.0 / d as f64)))?,
    );
    // Variables: x_1..x_k, s.
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let mut lp = LinearProgram::minimize(objective);
    for row in 0..lp_data.target.len() {
        let mut a: Vec<f64> = (0..k).map(|j| lp_data.cols[j][row]).collect();
        a.push(-idvec[row]);
        lp.eq_constraint(a, lp_data.target[row]);
    }
    let sol = simplex_solve(&lp);
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Ok(MeasureResult::infinite()),
        _ => {
            return Err(Error::SolverStalled { iterations: sol.iterations, residual: f64::NAN })
        }
    }
    let value = sol.objective.max(0.0);
    Ok(MeasureResult {
        value,
        status: MeasureStatus::Exact,
        lower: value,
        upper: value,
        witness: None,
        gap: None,
        stats: SolverStats { iterations: sol.iterations, rounds: 1, cuts: 0 },
    })
}

/// Best free approximation: one minus the largest weight a free state can
/// carry in a convex decomposition of `rho`. Cutting-plane maximization of
/// `sum x` under `rho - sum_i x_i sigma_i >= 0`.
pub fn best_free_approximation(
    state: &State,
    theory: &Theory,
    opts: &MeasureOptions,
) -> Result<MeasureResult> {
    let polytope = theory.require_polytope("best free approximation needs a polytope free set")?;
    let rho = state.density();
    if polytope.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: polytope.dim(), got: rho.dim() });
    }
    let k = polytope.len();
    let lp = LinearProgram::minimize(vec![-1.0; k]);
    let block = AffineBlock {
        f0: rho.op().clone(),
        fi: (0..k)
            .map(|i| {
                HermitianOperator::new(polytope.vertex_projector(i).matrix().scale(re(-1.0)))
                    .expect("scaled projector")
            })
            .collect(),
    };
    let cp_opts = CuttingPlaneOptions {
        eps_psd: opts.eps_psd(rho.matrix().frobenius_norm()),
        max_rounds: opts.max_rounds,
    };
    // Restoration: scale the weights toward zero until rho - s K is PSD.
    let block_for_restore = block.clone();
    let eps = cp_opts.eps_psd;
    let restore = move |x: &[f64], _min_eig: f64| -> Option<Vec<f64>> {
        let feasible = |s: f64| -> bool {
            let scaled: Vec<f64> = x.iter().map(|v| v * s).collect();
            let m = {
                let mut acc = block_for_restore.f0.matrix().clone();
                for (fi, &xi) in block_for_restore.fi.iter().zip(&scaled) {
                    acc = acc.add(&fi.matrix().scale(re(xi)));
                }
                HermitianOperator::new(acc).expect("hermitian")
            };
            hermitian_eig(&m).eigenvalues.last().copied().unwrap_or(0.0) >= -eps
        };
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        if feasible(1.0) {
            return Some(x.to_vec());
        }
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(x.iter().map(|v| v * lo).collect())
    };
    let res = cutting_plane_psd(&lp, &[block], &cp_opts, Some(&restore))?;

    // Objective was -sum x: lambda_relax = -lower_bound is an upper bound on
    // the best free weight, so 1 + lower_bound lower-bounds the BFA.
    let lambda_relax = (-res.lower_bound).clamp(0.0, 1.0);
    let lambda_feas = res
        .upper_bound
        .map(|u| (-u).clamp(0.0, 1.0))
        .unwrap_or(0.0);
    let value = 1.0 - lambda_feas;
    let lower = 1.0 - lambda_relax;
    let gap = value - lower;
    let status = if res.converged { certify_status(value, gap) } else { MeasureStatus::Heuristic };
    Ok(MeasureResult {
        value,
        status,
        lower,
        upper: value,
        witness: None,
        gap: Some(gap.abs()),
        stats: SolverStats {
            iterations: res.solution.iterations,
            rounds: res.rounds,
            cuts: res.cut_record.cuts.len(),
        },
    })
}

/// Modified trace distance: `min || rho - X ||_1` over the free cone,
/// computed through its witness dual
/// `max -<rho, W>` s.t. `-I <= W <= I`, `<W, sigma_i> >= 0`.
pub fn modified_trace_distance(
    state: &State,
    theory: &Theory,
    opts: &MeasureOptions,
) -> Result<MeasureResult> {
    let polytope =
        theory.require_polytope("modified trace distance needs a polytope free set")?;
    let rho = state.density();
    if polytope.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: polytope.dim(), got: rho.dim() });
    }
    let d = rho.dim();
    let d2 = d * d;
    let rho_vec = hermitian_to_vec(rho.op());

    // Variables: the d^2 real coordinates of W (free).
    // Objective: min <rho, W> = -T'.
    let mut lp = LinearProgram::minimize(rho_vec.clone());
    for j in 0..d2 {
        lp.set_free(j);
    }
    for i in 0..polytope.len() {
        let svec = hermitian_to_vec(&polytope.vertex_projector(i));
        // <W, sigma_i> >= 0  as  -svec . w <= 0.
        lp.le_constraint(svec.iter().map(|v| -v).collect(), 0.0);
    }
    // Blocks: I - W >= 0 and I + W >= 0.
    let basis: Vec<HermitianOperator> = (0..d2)
        .map(|idx| {
            let mut e = vec![0.0; d2];
            e[idx] = 1.0;
            vec_to_hermitian(&e, d).expect("basis element")
        })
        .collect();
    let id = HermitianOperator::new(ComplexMatrix::identity(d))?;
    let minus = AffineBlock {
        f0: id.clone(),
        fi: basis
            .iter()
            .map(|b| HermitianOperator::new(b.matrix().scale(re(-1.0))).expect("scaled basis"))
            .collect(),
    };
    let plus = AffineBlock { f0: id, fi: basis.clone() };
    let cp_opts = CuttingPlaneOptions {
        eps_psd: opts.eps_psd(rho.matrix().frobenius_norm()),
        max_rounds: opts.max_rounds,
    };
    // Restoration: shrink W toward zero; the vertex constraints are exact LP
    // rows, the operator bounds scale linearly.
    let restore = move |x: &[f64], _min_eig: f64| -> Option<Vec<f64>> {
        let w = vec_to_hermitian(x, d).ok()?;
        let dec = hermitian_eig(&w);
        let extreme = dec.eigenvalues.iter().fold(0.0f64, |acc, &l| acc.max(l.abs()));
        let t = if extreme > 1.0 { 1.0 / extreme } else { 1.0 };
        Some(x.iter().map(|v| v * t).collect())
    };
    let res = cutting_plane_psd(&lp, &[minus, plus], &cp_opts, Some(&restore))?;

    // min <rho, W>: relaxation lower bound gives the T' upper bound; a
    // feasible W gives the achieved (lower) value.
    let upper = -res.lower_bound;
    let (value, witness) = match (&res.upper_bound, &res.feasible_x) {
        (Some(obj), Some(x)) => ((-obj).max(0.0), Some(vec_to_hermitian(x, d)?)),
        _ => (upper.max(0.0), None),
    };
    let gap = upper - value;
    let status = if res.converged { certify_status(value, gap) } else { MeasureStatus::Heuristic };
    Ok(MeasureResult {
        value,
        status,
        lower: value,
        upper: upper.max(value),
        witness,
        gap: Some(gap.abs()),
        stats: SolverStats {
            iterations: res.solution.iterations,
            rounds: res.rounds,
            cuts: res.cut_record.cuts.len(),
        },
    })
}
