//! Cyclic Jacobi eigendecomposition for complex Hermitian matrices.

use alloc::vec::Vec;

use super::{C64, ComplexMatrix, HermitianOperator, SpectralDecomposition};

#[allow(unused_imports)]
use num_traits::Float;

/// Off-diagonal Frobenius mass below this fraction of the total Frobenius
/// norm counts as converged.
const CONVERGENCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 80;

/// Full eigendecomposition, eigenvalues sorted nonincreasing.
///
/// Cyclic sweeps of embedded 2x2 unitary rotations; robust and free of
/// external dependencies at the dimensions this crate targets (d <= ~64).
pub fn hermitian_eig(op: &HermitianOperator) -> SpectralDecomposition {
    let n = op.dim();
    let mut a = op.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a.at(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= CONVERGENCE * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.at(i, i).re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v.at(r, order[c]));
    SpectralDecomposition { eigenvalues, eigenvectors }
}

/// Zeroes `a[p][q]` with the unitary that diagonalizes the 2x2 pivot block.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a.at(p, q);
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let phase = apq / abs;
    let app = a.at(p, p).re;
    let aqq = a.at(q, q).re;

    // Classic tangent formula: the root of smaller magnitude of
    // t^2 + 2 tau t - 1 = 0 with tau = (aqq - app) / (2 |apq|).
    let tau = (aqq - app) / (2.0 * abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = a.rows();
    // Right multiplication by U: columns p and q of A and V.
    // U = [[c, s*phase], [-s*conj(phase), c]] on the (p, q) plane.
    for k in 0..n {
        let akp = a.at(k, p);
        let akq = a.at(k, q);
        a.set(k, p, akp * c - akq * s * phase.conj());
        a.set(k, q, akp * s * phase + akq * c);

        let vkp = v.at(k, p);
        let vkq = v.at(k, q);
        v.set(k, p, vkp * c - vkq * s * phase.conj());
        v.set(k, q, vkp * s * phase + vkq * c);
    }
    // Left multiplication by U^dagger: rows p and q of A.
    for k in 0..n {
        let apk = a.at(p, k);
        let aqk = a.at(q, k);
        a.set(p, k, apk * c - aqk * s * phase);
        a.set(q, k, apk * s * phase.conj() + aqk * c);
    }
    // Clean the pivot entries against roundoff.
    let app_new = a.at(p, p);
    let aqq_new = a.at(q, q);
    a.set(p, p, C64::new(app_new.re, 0.0));
    a.set(q, q, C64::new(aqq_new.re, 0.0));
    a.set(p, q, C64::new(0.0, 0.0));
    a.set(q, p, C64::new(0.0, 0.0));
}
