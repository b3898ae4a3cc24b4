//! Cutting-plane solver for LPs with affine positive-semidefinite
//! constraints, using eigenvector cuts.
//!
//! Each PSD block `M_j(x) = F0 + sum_i x_i F_i` is relaxed to the linear
//! cuts `<w w^dag, M_j(x)> >= 0` accumulated from the negative-eigenvalue
//! eigenvectors of the block at successive LP optima. For a minimization the
//! LP value is a lower bound that never decreases as cuts accumulate; an
//! upper bound comes from any PSD-feasible point (the final iterate when it
//! converged, or a caller-supplied feasibility restoration otherwise).

use alloc::vec;
use alloc::vec::Vec;

use super::simplex::{LinearProgram, LpSolution, LpStatus, simplex_solve};
use crate::error::{Error, Result};
use crate::linalg::{C64, ComplexMatrix, HermitianOperator, hermitian_eig, inner};

#[allow(unused_imports)]
use num_traits::Float;

/// One PSD block `F0 + sum_i x_i F_i >= 0`, affine in the LP variables.
#[derive(Clone, Debug)]
pub struct AffineBlock {
    pub f0: HermitianOperator,
    pub fi: Vec<HermitianOperator>,
}

impl AffineBlock {
    pub fn dim(&self) -> usize {
        self.f0.dim()
    }

    fn evaluate(&self, x: &[f64]) -> HermitianOperator {
        let mut m = self.f0.matrix().clone();
        for (fi, &xi) in self.fi.iter().zip(x) {
            if xi != 0.0 {
                m = m.add(&fi.matrix().scale(C64::new(xi, 0.0)));
            }
        }
        HermitianOperator::new(m).expect("affine combination of Hermitian terms")
    }

    /// Coefficient row of the cut `<w w^dag, M(x)> >= 0`.
    fn cut_row(&self, w: &[C64]) -> (Vec<f64>, f64) {
        let coeffs: Vec<f64> = self.fi.iter().map(|f| f.expectation(w)).collect();
        let offset = self.f0.expectation(w);
        (coeffs, offset)
    }
}

/// The accumulated eigenvector cuts: `(block index, unit vector w)` pairs,
/// duplicates-free within inner product `1 - 1e-6` per block.
#[derive(Clone, Debug, Default)]
pub struct CutRecord {
    pub cuts: Vec<(usize, Vec<C64>)>,
    pub final_min_eigenvalue: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct CuttingPlaneOptions {
    /// A block is accepted as PSD when its smallest eigenvalue is above
    /// `-eps_psd`.
    pub eps_psd: f64,
    pub max_rounds: usize,
}

impl Default for CuttingPlaneOptions {
    fn default() -> Self {
        Self { eps_psd: 1e-8, max_rounds: 500 }
    }
}

#[derive(Clone, Debug)]
pub struct CuttingPlaneResult {
    /// Final LP solve over the cut model (a relaxation of the true problem).
    pub solution: LpSolution,
    /// LP optimum: lower bound on the true minimum within the cut model.
    pub lower_bound: f64,
    /// Objective of a PSD-feasible point, when one is available.
    pub upper_bound: Option<f64>,
    pub feasible_x: Option<Vec<f64>>,
    pub cut_record: CutRecord,
    /// Dual multiplier (nonnegative) per recorded cut, from the final solve.
    pub cut_multipliers: Vec<f64>,
    pub rounds: usize,
    pub converged: bool,
}

// The PSD violation reachable with cuts separated by angle delta scales as
// delta^2, so deduplication must be tighter than the square root of
// `eps_psd`; anything coarser stalls the loop above the target.
const DEDUP_INNER: f64 = 1.0 - 1e-12;

fn find_duplicate(record: &CutRecord, block: usize, w: &[C64]) -> Option<usize> {
    record
        .cuts
        .iter()
        .position(|(b, existing)| *b == block && inner(existing, w).norm() > DEDUP_INNER)
}

/// Seed vectors bounding each block: the computational basis plus the four
/// real/imaginary pair combinations for every index pair. Together they pin
/// all matrix entries of the block, which keeps the initial LP bounded.
fn seed_vectors(dim: usize) -> Vec<Vec<C64>> {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for i in 0..dim {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[i] = C64::new(1.0, 0.0);
        out.push(v);
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            for &phase in &[C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
                let mut v = vec![C64::new(0.0, 0.0); dim];
                v[i] = C64::new(s, 0.0);
                v[j] = phase * s;
                out.push(v);
            }
        }
    }
    out
}

/// Feasibility-restoration hook: maps the near-feasible LP iterate and the
/// worst block eigenvalue to a PSD-feasible point, when the problem admits
/// one.
pub type RestoreFn<'a> = &'a dyn Fn(&[f64], f64) -> Option<Vec<f64>>;

pub fn cutting_plane_psd(
    base: &LinearProgram,
    blocks: &[AffineBlock],
    opts: &CuttingPlaneOptions,
    restore: Option<RestoreFn<'_>>,
) -> Result<CuttingPlaneResult> {
    let n = base.num_vars();
    for block in blocks {
        if block.fi.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: block.fi.len() });
        }
    }

    let mut lp = base.clone();
    let base_ineq = lp.ineq.len();
    let mut record = CutRecord::default();

    // A cut whose eigenvector nearly coincides with a stored one refreshes
    // the stored cut in place: near convergence the active eigenvector only
    // rotates slightly between rounds, and dropping the refinement would
    // stall the loop above `eps_psd`.
    let add_cut = |lp: &mut LinearProgram, record: &mut CutRecord, block_idx: usize, w: Vec<C64>| -> bool {
        let (coeffs, offset) = blocks[block_idx].cut_row(&w);
        // <ww, F0> + sum_i x_i <ww, Fi> >= 0  as  -sum_i x_i <ww, Fi> <= <ww, F0>.
        let row: Vec<f64> = coeffs.iter().map(|c| -c).collect();
        match find_duplicate(record, block_idx, &w) {
            Some(c) => {
                lp.ineq[base_ineq + c] = (row, offset);
                record.cuts[c] = (block_idx, w);
                false
            }
            None => {
                lp.le_constraint(row, offset);
                record.cuts.push((block_idx, w));
                true
            }
        }
    };

    for (block_idx, block) in blocks.iter().enumerate() {
        for w in seed_vectors(block.dim()) {
            add_cut(&mut lp, &mut record, block_idx, w);
        }
    }

    let mut rounds = 0;
    let mut last: Option<LpSolution> = None;
    let mut converged = false;
    while rounds < opts.max_rounds {
        rounds += 1;
        let sol = simplex_solve(&lp);
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Err(Error::Infeasible),
            LpStatus::Unbounded => return Err(Error::Unbounded),
            LpStatus::Stalled => {
                return Err(Error::SolverStalled { iterations: sol.iterations, residual: f64::NAN })
            }
        }

        let mut worst = f64::INFINITY;
        for (block_idx, block) in blocks.iter().enumerate() {
            let m = block.evaluate(&sol.x);
            let dec = hermitian_eig(&m);
            for (ev_idx, &lam) in dec.eigenvalues.iter().enumerate() {
                worst = worst.min(lam);
                if lam < -opts.eps_psd {
                    let w = dec.eigenvectors.column(ev_idx);
                    add_cut(&mut lp, &mut record, block_idx, w);
                }
            }
        }
        record.final_min_eigenvalue = worst;
        last = Some(sol);
        if worst >= -opts.eps_psd {
            converged = true;
            break;
        }
    }

    let solution = last.expect("at least one LP solve");
    let lower_bound = solution.objective;
    let objective_of = |x: &[f64]| -> f64 {
        base.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    };

    let (feasible_x, upper_bound) = if converged {
        (Some(solution.x.clone()), Some(objective_of(&solution.x)))
    } else if let Some(restore) = restore {
        match restore(&solution.x, record.final_min_eigenvalue) {
            Some(x) => {
                let ok = blocks.iter().all(|b| {
                    let m = b.evaluate(&x);
                    hermitian_eig(&m).eigenvalues.last().copied().unwrap_or(0.0)
                        >= -opts.eps_psd * 10.0
                });
                if ok {
                    let obj = objective_of(&x);
                    (Some(x), Some(obj))
                } else {
                    (None, None)
                }
            }
            None => (None, None),
        }
    } else {
        (None, None)
    };

    // Multipliers for the recorded cuts (cut rows sit after the base
    // inequality rows); our convention has z <= 0 on `<=` rows, so the
    // multipliers of the `>=` cuts are the negated duals.
    let cut_multipliers: Vec<f64> = solution.dual_ineq[base_ineq..]
        .iter()
        .map(|z| (-z).max(0.0))
        .collect();

    Ok(CuttingPlaneResult {
        solution,
        lower_bound,
        upper_bound,
        feasible_x,
        cut_record: record,
        cut_multipliers,
        rounds,
        converged,
    })
}

/// Assembles the PSD dual operator `sum_c y_c w_c w_c^dag` for the cuts of
/// one block from the recorded multipliers.
pub fn dual_operator(
    record: &CutRecord,
    multipliers: &[f64],
    block_idx: usize,
    dim: usize,
) -> HermitianOperator {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for ((b, w), &y) in record.cuts.iter().zip(multipliers) {
        if *b != block_idx || y == 0.0 {
            continue;
        }
        for r in 0..dim {
            for c in 0..dim {
                let v = m.at(r, c) + w[r] * w[c].conj() * y;
                m.set(r, c, v);
            }
        }
    }
    HermitianOperator::new(m).expect("rank-one sum is Hermitian")
}

#[cfg(test)]
mod tests;
