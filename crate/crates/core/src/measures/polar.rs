//! Polar gauge of the free-state set on positive semidefinite inputs:
//! the largest inner product with a free state, which doubles as the
//! witness threshold `lambda* I - P` in the dual cone of the free set.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::MeasureOptions;
use crate::error::{Error, Result};
use crate::gauges;
use crate::linalg::{
    C64, ComplexMatrix, HermitianOperator, StateVector, hermitian_eig, inner, vec_norm,
};
use crate::theories::{Theory, TheoryDescriptor};

#[allow(unused_imports)]
use num_traits::Float;

#[derive(Clone, Debug)]
pub struct PolarResult {
    pub value: f64,
    /// Threshold such that `lambda* I - P` lies in the dual cone of the
    /// free set (exactly when `exact`, within the heuristic gap otherwise).
    pub lambda_star: f64,
    /// False when the value is a heuristic lower bound (continuum free sets
    /// beyond the rank-one and support-enumerable cases).
    pub exact: bool,
}

fn check_psd(p: &HermitianOperator) -> Result<Vec<f64>> {
    let dec = hermitian_eig(p);
    let top = dec.eigenvalues[0].max(0.0);
    let min = *dec.eigenvalues.last().unwrap();
    if min < -1e-9 * (1.0 + top) {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(dec.eigenvalues)
}

/// All k-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        // Advance.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Alternating local-eigenvector ascent for
/// `max <a (x) b| P |a (x) b>` over product states.
fn product_ascent(p: &HermitianOperator, da: usize, db: usize, b0: Vec<C64>) -> f64 {
    let mut b = b0;
    let mut value = 0.0f64;
    for _ in 0..60 {
        // Contract the B side: M_a[i][i'] = sum_{j j'} b_j^* P[(ij),(i'j')] b_j'.
        let ma = ComplexMatrix::from_fn(da, da, |i, ip| {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..db {
                for jp in 0..db {
                    acc += b[j].conj() * p.matrix().at(i * db + j, ip * db + jp) * b[jp];
                }
            }
            acc
        });
        let ma = HermitianOperator::new(ma).expect("contraction stays Hermitian");
        let a = hermitian_eig(&ma).eigenvectors.column(0);
        // Contract the A side.
        let mb = ComplexMatrix::from_fn(db, db, |j, jp| {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..da {
                for ip in 0..da {
                    acc += a[i].conj() * p.matrix().at(i * db + j, ip * db + jp) * a[ip];
                }
            }
            acc
        });
        let mb = HermitianOperator::new(mb).expect("contraction stays Hermitian");
        let dec = hermitian_eig(&mb);
        b = dec.eigenvectors.column(0);
        let next = dec.eigenvalues[0];
        if (next - value).abs() < 1e-12 * (1.0 + next.abs()) {
            return next;
        }
        value = next;
    }
    value
}

/// Truncated power iteration for `max <v| P |v>` over Schmidt-rank-k states.
fn rank_k_ascent(p: &HermitianOperator, da: usize, db: usize, k: usize, v0: Vec<C64>) -> f64 {
    let truncate = |v: &[C64]| -> Vec<C64> {
        let psi = StateVector::normalized(v.to_vec(), vec![da, db]).expect("nonzero iterate");
        let sd = crate::linalg::schmidt_decompose(&psi, da, db).expect("bipartite");
        let mut out = vec![C64::new(0.0, 0.0); da * db];
        for s in 0..k.min(sd.coefficients.len()) {
            let lam = sd.coefficients[s];
            if lam == 0.0 {
                continue;
            }
            for i in 0..da {
                for j in 0..db {
                    out[i * db + j] += C64::new(lam, 0.0) * sd.left.at(i, s) * sd.right.at(j, s);
                }
            }
        }
        let n = vec_norm(&out);
        out.into_iter().map(|z| z / n).collect()
    };
    let mut v = truncate(&v0);
    let mut value = 0.0f64;
    for _ in 0..120 {
        let pv = p.matrix().mul_vec(&v);
        if vec_norm(&pv) < 1e-15 {
            break;
        }
        v = truncate(&pv);
        let next = inner(&v, &p.matrix().mul_vec(&v)).re;
        if (next - value).abs() < 1e-12 * (1.0 + next.abs()) {
            return next;
        }
        value = next;
    }
    value
}

/// Polar gauge of the free set at a PSD operator.
///
/// Polytope theories and k-coherence evaluate exactly (vertex maximum and
/// support enumeration); Schmidt and genuine-multipartite theories on
/// higher-rank inputs return a multi-restart ascent flagged as a heuristic
/// lower bound.
pub fn polar_gauge_psd(
    p: &HermitianOperator,
    theory: &Theory,
    opts: &MeasureOptions,
) -> Result<PolarResult> {
    let eigenvalues = check_psd(p)?;
    if p.dim() != theory.dim() {
        return Err(Error::DimensionMismatch { expected: theory.dim(), got: p.dim() });
    }
    if let Some(polytope) = theory.polytope() {
        let mut best = 0.0f64;
        for v in polytope.vertices() {
            best = best.max(p.expectation(v.amplitudes()));
        }
        return Ok(PolarResult { value: best, lambda_star: best, exact: true });
    }
    match theory.descriptor() {
        TheoryDescriptor::CoherenceK { d, k } => {
            // max over k-supports of the top eigenvalue of the restriction.
            let mut best = 0.0f64;
            for support in combinations(*d, *k) {
                let sub = ComplexMatrix::from_fn(*k, *k, |r, c| {
                    p.matrix().at(support[r], support[c])
                });
                let sub = HermitianOperator::new(sub)?;
                best = best.max(hermitian_eig(&sub).eigenvalues[0]);
            }
            let best = best.max(0.0);
            Ok(PolarResult { value: best, lambda_star: best, exact: true })
        }
        TheoryDescriptor::SchmidtK { da, db, k } => {
            let rank = eigenvalues.iter().filter(|&&l| l > 1e-10 * eigenvalues[0].max(1.0)).count();
            if rank <= 1 {
                // Rank one: P = c |psi><psi| and the polar is c times the
                // squared pure polar gauge.
                let dec = hermitian_eig(p);
                let c = dec.eigenvalues[0].max(0.0);
                let psi = StateVector::new(dec.eigenvectors.column(0), vec![*da, *db])?;
                let pure = gauges::pure_polar(&psi, theory)?;
                let value = c * pure;
                return Ok(PolarResult { value, lambda_star: value, exact: true });
            }
            let dec = hermitian_eig(p);
            let mut best = 0.0f64;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(101));
            for restart in 0..opts.restarts.max(4) {
                let seed_vec: Vec<C64> = if restart == 0 {
                    dec.eigenvectors.column(0)
                } else {
                    crate::linalg::gaussian_amplitudes(&mut rng, da * db)
                };
                let v = if *k == 1 {
                    // Alternating ascent needs only the B-side start.
                    let psi =
                        StateVector::normalized(seed_vec.clone(), vec![*da, *db])?;
                    let sd = crate::linalg::schmidt_decompose(&psi, *da, *db)?;
                    product_ascent(p, *da, *db, sd.right.column(0))
                } else {
                    rank_k_ascent(p, *da, *db, *k, seed_vec)
                };
                best = best.max(v);
            }
            Ok(PolarResult { value: best, lambda_star: best, exact: false })
        }
        TheoryDescriptor::GenuineMultipartite { dims } => {
            // Max over bipartitions of the product ascent in that split.
            let n = dims.len();
            let mut best = 0.0f64;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(202));
            for side in gauges::bipartitions(n) {
                let perm = permute_to_split(p, dims, &side)?;
                let (da, db) = (perm.1, perm.2);
                for restart in 0..opts.restarts.max(4).min(8) {
                    let b0: Vec<C64> = if restart == 0 {
                        let dec = hermitian_eig(&perm.0);
                        let psi = StateVector::normalized(
                            dec.eigenvectors.column(0),
                            vec![da, db],
                        )?;
                        let sd = crate::linalg::schmidt_decompose(&psi, da, db)?;
                        sd.right.column(0)
                    } else {
                        let g = crate::linalg::gaussian_amplitudes(&mut rng, db);
                        let n = vec_norm(&g);
                        g.into_iter().map(|z| z / n).collect()
                    };
                    best = best.max(product_ascent(&perm.0, da, db, b0));
                }
            }
            Ok(PolarResult { value: best, lambda_star: best, exact: false })
        }
        TheoryDescriptor::MagicQubits { .. } => Err(Error::Unsupported(
            "magic theory without a vertex dictionary",
        )),
    }
}

/// Conjugates `P` by the permutation regrouping the listed parties in front,
/// returning the regrouped operator and the split dimensions.
fn permute_to_split(
    p: &HermitianOperator,
    dims: &[usize],
    side: &[usize],
) -> Result<(HermitianOperator, usize, usize)> {
    let n = dims.len();
    let mut in_side = vec![false; n];
    for &s in side {
        in_side[s] = true;
    }
    let order: Vec<usize> = (0..n)
        .filter(|&q| in_side[q])
        .chain((0..n).filter(|&q| !in_side[q]))
        .collect();
    let da: usize = order.iter().take(side.len()).map(|&q| dims[q]).product();
    let db: usize = order.iter().skip(side.len()).map(|&q| dims[q]).product();
    let d: usize = dims.iter().product();

    // Map each flat index to its regrouped position.
    let mut map = vec![0usize; d];
    let mut parts = vec![0usize; n];
    for flat in 0..d {
        let mut rem = flat;
        for i in (0..n).rev() {
            parts[i] = rem % dims[i];
            rem /= dims[i];
        }
        let mut target = 0usize;
        for &q in &order {
            target = target * dims[q] + parts[q];
        }
        map[flat] = target;
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            out.set(map[r], map[c], p.matrix().at(r, c));
        }
    }
    Ok((HermitianOperator::new(out)?, da, db))
}
