//! Closed-form vector and matrix gauges.
//!
//! The workhorse is the k-support norm: the atomic norm of k-sparse unit
//! vectors, computable exactly from the sorted coefficient magnitudes. On
//! top of it sit the Schmidt-vector gauges of bipartite entanglement, the
//! bipartition-minimum gauge of genuine multipartite entanglement, the
//! element-wise coherence norms, and the pure-state polar gauges used by
//! every resource theory in this crate.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, C64, ComplexMatrix, SchmidtData, StateVector};
use crate::theories::{Theory, TheoryDescriptor};

#[allow(unused_imports)]
use num_traits::Float;

/// Magnitudes sorted nonincreasing, ties broken by original index
/// (stable sort; the value is sort-invariant, the rule only fixes
/// determinism).
fn sorted_magnitudes(x: &[C64]) -> Vec<f64> {
    let mut m: Vec<f64> = x.iter().map(|z| z.norm()).collect();
    m.sort_by(|a, b| b.total_cmp(a));
    m
}

fn check_k(k: usize, d: usize) -> Result<()> {
    if k == 0 || k > d {
        return Err(Error::KOutOfRange { k, d });
    }
    Ok(())
}

/// k-support norm of sorted nonincreasing magnitudes.
///
/// Scans the split index r upward from 0; the index `k-r-1` falling off the
/// left edge counts as +infinity, so the scan always terminates. Exact ties
/// resolve toward smaller r, and if roundoff leaves no r passing strictly,
/// the r with the smallest violation is used.
fn ksupport_from_sorted(m: &[f64], k: usize) -> f64 {
    let d = m.len();
    debug_assert!(k >= 1 && k <= d);
    // suffix[j] = sum_{i >= j} m[i]
    let mut suffix = vec![0.0f64; d + 1];
    for j in (0..d).rev() {
        suffix[j] = suffix[j + 1] + m[j];
    }
    let mut prefix_sq = vec![0.0f64; d + 1];
    for j in 0..d {
        prefix_sq[j + 1] = prefix_sq[j] + m[j] * m[j];
    }

    let value_at = |r: usize| -> f64 {
        let head = k - r - 1; // number of squared head terms
        let tail = suffix[head];
        (prefix_sq[head] + tail * tail / (r + 1) as f64).sqrt()
    };

    let mut best: Option<(f64, usize)> = None;
    for r in 0..k {
        let head = k - r - 1;
        let mid = suffix[head] / (r + 1) as f64;
        let left_ok = head == 0 || m[head - 1] > mid;
        let right_ok = mid >= m[head];
        if left_ok && right_ok {
            return value_at(r);
        }
        // Violation margin for the roundoff fallback.
        let mut viol = 0.0f64;
        if head > 0 && m[head - 1] <= mid {
            viol = viol.max(mid - m[head - 1]);
        }
        if mid < m[head] {
            viol = viol.max(m[head] - mid);
        }
        if best.map_or(true, |(bv, _)| viol < bv) {
            best = Some((viol, r));
        }
    }
    let (_, r) = best.expect("k >= 1 guarantees a candidate");
    value_at(r)
}

/// Atomic norm of k-sparse unit vectors (the gauge of their convex hull).
/// Interpolates between the l1 norm (k = 1) and the l2 norm (k = d).
pub fn ksupport_norm(x: &[C64], k: usize) -> Result<f64> {
    check_k(k, x.len())?;
    Ok(ksupport_from_sorted(&sorted_magnitudes(x), k))
}

/// k-support norm of a real nonnegative coefficient vector (Schmidt vectors).
pub fn ksupport_norm_mags(m: &[f64], k: usize) -> Result<f64> {
    check_k(k, m.len())?;
    let mut sorted: Vec<f64> = m.iter().map(|v| v.abs()).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(ksupport_from_sorted(&sorted, k))
}

/// Polar (dual norm) of the k-support norm: the l2 norm of the k largest
/// coefficient magnitudes.
pub fn ksupport_dual(x: &[C64], k: usize) -> Result<f64> {
    check_k(k, x.len())?;
    let m = sorted_magnitudes(x);
    Ok(m[..k].iter().map(|v| v * v).sum::<f64>().sqrt())
}

pub fn ksupport_dual_mags(m: &[f64], k: usize) -> Result<f64> {
    check_k(k, m.len())?;
    let mut sorted: Vec<f64> = m.iter().map(|v| v.abs()).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(sorted[..k].iter().map(|v| v * v).sum::<f64>().sqrt())
}

/// Number of coefficients with magnitude above `tol`.
pub fn coherence_rank(x: &[C64], tol: f64) -> usize {
    x.iter().filter(|z| z.norm() > tol).count()
}

/// k-support norm of the Schmidt vector; for k = 1 this is the sum of
/// Schmidt coefficients.
pub fn schmidt_gauge(psi: &StateVector, da: usize, db: usize, k: usize) -> Result<f64> {
    let sd = linalg::schmidt_decompose(psi, da, db)?;
    ksupport_norm_mags(&sd.coefficients, k)
}

/// Negativity of a bipartite pure state, `sum_{j<l} lambda_j lambda_l`,
/// evaluated through the Schmidt-vector gauge.
pub fn pure_negativity(psi: &StateVector, da: usize, db: usize) -> Result<f64> {
    let g = schmidt_gauge(psi, da, db, 1)?;
    Ok((g * g - 1.0) / 2.0)
}

/// The `2^(n-1) - 1` binary splits of `n` parties, each listed as the side
/// containing party 0 (so no split appears twice as its own complement).
pub fn bipartitions(n_parties: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n_parties < 2 {
        return out;
    }
    let rest = n_parties - 1;
    for mask in 0..(1usize << rest) {
        let mut side = vec![0usize];
        for p in 0..rest {
            if mask & (1 << p) != 0 {
                side.push(p + 1);
            }
        }
        if side.len() < n_parties {
            out.push(side);
        }
    }
    out
}

/// Regroups a multiparty state into the bipartition (side | complement),
/// returning the state with dims `[d_side, d_rest]`.
pub fn regroup_bipartition(psi: &StateVector, side: &[usize]) -> Result<StateVector> {
    let dims = psi.dims();
    let n = dims.len();
    let in_side = {
        let mut flags = vec![false; n];
        for &p in side {
            if p >= n {
                return Err(Error::InvalidSubsystem { index: p, count: n });
            }
            flags[p] = true;
        }
        flags
    };
    let side_parties: Vec<usize> = (0..n).filter(|&p| in_side[p]).collect();
    let rest_parties: Vec<usize> = (0..n).filter(|&p| !in_side[p]).collect();
    let da: usize = side_parties.iter().map(|&p| dims[p]).product();
    let db: usize = rest_parties.iter().map(|&p| dims[p]).product();

    let mut amp = vec![C64::new(0.0, 0.0); da * db];
    let mut parts = vec![0usize; n];
    for (flat, &a) in psi.amplitudes().iter().enumerate() {
        let mut rem = flat;
        for i in (0..n).rev() {
            parts[i] = rem % dims[i];
            rem /= dims[i];
        }
        let mut ia = 0usize;
        for &p in &side_parties {
            ia = ia * dims[p] + parts[p];
        }
        let mut ib = 0usize;
        for &p in &rest_parties {
            ib = ib * dims[p] + parts[p];
        }
        amp[ia * db + ib] = a;
    }
    StateVector::new(amp, vec![da, db])
}

const MAX_PARTIES: usize = 12;

/// Gauge of genuine n-partite entanglement on pure states: the minimum of
/// the Schmidt-vector l1 gauge over all bipartitions. The squared value
/// minus one is twice the renormalized genuine multipartite negativity.
pub fn genuine_gauge(psi: &StateVector) -> Result<f64> {
    let n = psi.dims().len();
    if n < 2 || n > MAX_PARTIES {
        return Err(Error::PartyCountOutOfRange { n, max: MAX_PARTIES });
    }
    let mut best = f64::INFINITY;
    for side in bipartitions(n) {
        let grouped = regroup_bipartition(psi, &side)?;
        let (da, db) = (grouped.dims()[0], grouped.dims()[1]);
        let g = schmidt_gauge(&grouped, da, db, 1)?;
        best = best.min(g);
    }
    Ok(best)
}

/// Element-wise l1 norm, `sum_ij |rho_ij|`.
pub fn elementwise_l1(m: &ComplexMatrix) -> f64 {
    m.entries().iter().map(|z| z.norm()).sum()
}

/// Element-wise max norm, `max_ij |rho_ij|`.
pub fn elementwise_max(m: &ComplexMatrix) -> f64 {
    m.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max(0, max_i rho_ii)` — the polar gauge of the incoherent free states.
pub fn max_diag_clipped(m: &ComplexMatrix) -> f64 {
    let n = m.rows().min(m.cols());
    (0..n).map(|i| m.at(i, i).re).fold(0.0, f64::max)
}

fn schmidt_for(psi: &StateVector, da: usize, db: usize) -> Result<SchmidtData> {
    linalg::schmidt_decompose(psi, da, db)
}

/// Squared polar vector gauge of a pure state; equals the polar gauge of
/// the free-state set evaluated at the projector `|psi><psi|`.
pub fn pure_polar(psi: &StateVector, theory: &Theory) -> Result<f64> {
    match theory.descriptor() {
        TheoryDescriptor::CoherenceK { d, k } => {
            if psi.dim() != *d {
                return Err(Error::DimensionMismatch { expected: *d, got: psi.dim() });
            }
            let dual = ksupport_dual(psi.amplitudes(), *k)?;
            Ok(dual * dual)
        }
        TheoryDescriptor::SchmidtK { da, db, k } => {
            let sd = schmidt_for(psi, *da, *db)?;
            let dual = ksupport_dual_mags(&sd.coefficients, *k)?;
            Ok(dual * dual)
        }
        TheoryDescriptor::GenuineMultipartite { dims } => {
            if psi.dims() != &dims[..] {
                return Err(Error::DimensionMismatch {
                    expected: dims.iter().product(),
                    got: psi.dim(),
                });
            }
            let n = dims.len();
            if n < 2 || n > MAX_PARTIES {
                return Err(Error::PartyCountOutOfRange { n, max: MAX_PARTIES });
            }
            // Largest overlap with a state that is product across some split:
            // the max over bipartitions of the top Schmidt coefficient squared.
            let mut best = 0.0f64;
            for side in bipartitions(n) {
                let grouped = regroup_bipartition(psi, &side)?;
                let sd = schmidt_for(&grouped, grouped.dims()[0], grouped.dims()[1])?;
                best = best.max(sd.coefficients[0] * sd.coefficients[0]);
            }
            Ok(best)
        }
        TheoryDescriptor::MagicQubits { .. } => {
            let polytope = theory.polytope().ok_or(Error::ContinuumFreeSet)?;
            let mut best = 0.0f64;
            for v in polytope.vertices() {
                if v.dim() != psi.dim() {
                    return Err(Error::DimensionMismatch { expected: v.dim(), got: psi.dim() });
                }
                best = best.max(v.overlap(psi).norm_sqr());
            }
            Ok(best)
        }
    }
}

/// Geometric measure of a pure state, one minus the squared largest overlap
/// with a free state; zero exactly on free states.
pub fn geometric_pure(psi: &StateVector, theory: &Theory) -> Result<f64> {
    Ok((1.0 - pure_polar(psi, theory)?).max(0.0))
}

#[cfg(test)]
mod tests;
