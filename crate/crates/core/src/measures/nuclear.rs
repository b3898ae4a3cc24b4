//! Nuclear gauge over a dictionary free set: `min ||X||_l1` subject to
//! `T X T^dag = rho`, with `T` the vertex dictionary.

use alloc::vec::Vec;

use super::{MeasureOptions, MeasureResult, SolverStats, State, certify_status};
use crate::error::{Error, Result};
use crate::linalg::{C64, ComplexMatrix};
use crate::solvers::admm::{AffineL1Problem, admm_l1_affine};
use crate::theories::{Theory, TheoryDescriptor};

#[allow(unused_imports)]
use num_traits::Float;

/// Squared one-qubit stabilizer gauge, exact in Bloch coordinates.
///
/// The stabilizer states span the octahedron `||n||_1 <= 1` in the Bloch
/// ball, and the squared dictionary gauge of a pure state is one plus the
/// least `s` admitting a Bloch vector `u` with `||u||_2 <= s` and
/// `||n - u||_1 <= 1 + s`. The optimal `u` clips every component of `|n|`
/// at a common level `c`, and the defining equation
/// `sum_i max(|n_i| - c, 0) = 1 + sqrt(sum_i min(|n_i|, c)^2)`
/// is monotone in `c`, so bisection solves it to machine precision.
/// Validated against the ADMM dictionary path in the test suite.
pub(crate) fn magic_qubit_gauge_sq(psi: &[C64]) -> f64 {
    debug_assert_eq!(psi.len(), 2);
    let (a, b) = (psi[0], psi[1]);
    let ab = a.conj() * b;
    let n = [(2.0 * ab.re).abs(), (2.0 * ab.im).abs(), (a.norm_sqr() - b.norm_sqr()).abs()];
    let l1: f64 = n.iter().sum();
    if l1 <= 1.0 {
        return 1.0;
    }
    let mix_excess = |c: f64| -> f64 {
        let reduced: f64 = n.iter().map(|&v| (v - c).max(0.0)).sum();
        let radius: f64 = n.iter().map(|&v| v.min(c).powi(2)).sum::<f64>().sqrt();
        reduced - 1.0 - radius
    };
    let (mut lo, mut hi) = (0.0f64, n.iter().cloned().fold(0.0, f64::max));
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mix_excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c = 0.5 * (lo + hi);
    let s: f64 = n.iter().map(|&v| v.min(c).powi(2)).sum::<f64>().sqrt();
    1.0 + s
}

/// `kron(T, conj(T))` mapping `vec(X)` to `vec(T X T^dag)` in row-major
/// vectorization.
fn dictionary_operator(t: &ComplexMatrix) -> ComplexMatrix {
    let (d, k) = (t.rows(), t.cols());
    let mut a = ComplexMatrix::zeros(d * d, k * k);
    for p in 0..d {
        for q in 0..d {
            let row = p * d + q;
            for i in 0..k {
                let tpi = t.at(p, i);
                if tpi.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..k {
                    a.set(row, i * k + j, tpi * t.at(q, j).conj());
                }
            }
        }
    }
    a
}

/// Nuclear gauge for dictionary theories (magic; coherence with k = 1),
/// solved by ADMM over the complex matrix variable. For coherence with
/// k = 1 the dictionary is the computational basis and the value collapses
/// to the element-wise l1 norm.
pub fn nuclear_gauge(
    state: &State,
    theory: &Theory,
    opts: &MeasureOptions,
) -> Result<MeasureResult> {
    match theory.descriptor() {
        TheoryDescriptor::MagicQubits { .. } | TheoryDescriptor::CoherenceK { k: 1, .. } => {}
        _ => {
            return Err(Error::Unsupported(
                "nuclear gauge needs a dictionary free set (magic or coherence with k = 1)",
            ))
        }
    }
    let polytope = theory.require_polytope("nuclear gauge needs the vertex dictionary")?;
    let rho = state.density();
    if polytope.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: polytope.dim(), got: rho.dim() });
    }
    let t = polytope.dictionary();
    let a = dictionary_operator(t);
    let b: Vec<C64> = rho.matrix().entries().to_vec();
    let res = admm_l1_affine(&AffineL1Problem { a, b }, &opts.admm())?;
    let value = res.value;
    let gap = res.gap;
    Ok(MeasureResult {
        value,
        status: certify_status(value, gap),
        lower: res.dual_bound.min(value),
        upper: value,
        witness: None,
        gap: Some(gap.abs()),
        stats: SolverStats { iterations: res.iterations, rounds: 1, cuts: 0 },
    })
}
