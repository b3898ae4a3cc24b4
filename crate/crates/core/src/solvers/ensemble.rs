//! Ensemble-descent optimizer for convex-roof upper bounds.
//!
//! Pure-state ensembles of a rank-r state are parametrized by m x r
//! column-isometries U through `x_i = sum_j conj(U_ij) sqrt(lambda_j) |e_j>`;
//! every ensemble realizing rho arises this way. The optimizer minimizes
//! `sum_i p_i g(psi_i)` for a degree-2-homogeneous pure-state objective by
//! random isometry restarts refined with coordinate descent over two-row
//! complex Givens rotations (golden-section line search in the rotation
//! angle and phase).

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    C64, ComplexMatrix, DensityMatrix, StateVector, hermitian_eig, hermitian_to_vec, inner,
};

#[allow(unused_imports)]
use num_traits::Float;

/// Eigenvalues of rho below this are truncated as numerical rank deficiency.
const RANK_CUTOFF: f64 = 1e-12;
/// Members with weight below this contribute nothing and are skipped.
const WEIGHT_CUTOFF: f64 = 1e-14;

/// An ensemble realizing rho: spectral data, the column isometry, and the
/// realized members. The member count obeys `m <= r^2`.
#[derive(Clone, Debug)]
pub struct EnsembleState {
    pub eigenvalues: Vec<f64>,
    /// `d x r` eigenvector columns spanning the support of rho.
    pub basis: ComplexMatrix,
    /// `m x r` column isometry.
    pub isometry: ComplexMatrix,
    pub weights: Vec<f64>,
    pub members: Vec<StateVector>,
}

#[derive(Clone, Copy, Debug)]
pub struct EnsembleOptions {
    /// Member count; defaults to `min(r^2, 2r + 2)`.
    pub members: Option<usize>,
    pub restarts: usize,
    pub seed: u64,
    /// Full coordinate-descent sweeps per restart.
    pub max_sweeps: usize,
    /// Stop a restart when a sweep improves by less than this.
    pub sweep_tol: f64,
    /// Stop everything once the value reaches this known lower bound.
    pub lower_stop: Option<f64>,
}

impl Default for EnsembleOptions {
    fn default() -> Self {
        Self {
            members: None,
            restarts: 32,
            seed: 0,
            max_sweeps: 40,
            sweep_tol: 1e-10,
            lower_stop: None,
        }
    }
}

struct Workspace<'a> {
    /// Scaled eigenvectors `sqrt(lambda_j) e_j`, as columns.
    scaled_basis: ComplexMatrix,
    rank: usize,
    dim: usize,
    g: &'a mut dyn FnMut(&[C64]) -> f64,
}

impl Workspace<'_> {
    /// Weight and objective contribution of one isometry row.
    fn member_cost(&mut self, row: &[C64]) -> f64 {
        let mut x = vec![C64::new(0.0, 0.0); self.dim];
        for j in 0..self.rank {
            let c = row[j].conj();
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for r in 0..self.dim {
                x[r] += c * self.scaled_basis.at(r, j);
            }
        }
        let w = x.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if w < WEIGHT_CUTOFF {
            return 0.0;
        }
        let n = w.sqrt();
        for xi in &mut x {
            *xi /= n;
        }
        w * (self.g)(&x)
    }

    fn total_cost(&mut self, u: &ComplexMatrix) -> f64 {
        let mut acc = 0.0;
        for i in 0..u.rows() {
            let row: Vec<C64> = (0..self.rank).map(|j| u.at(i, j)).collect();
            acc += self.member_cost(&row);
        }
        acc
    }
}

fn gram_schmidt_columns(u: &mut ComplexMatrix) {
    let (m, r) = (u.rows(), u.cols());
    for c in 0..r {
        for prev in 0..c {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..m {
                dot += u.at(i, prev).conj() * u.at(i, c);
            }
            for i in 0..m {
                let v = u.at(i, c) - dot * u.at(i, prev);
                u.set(i, c, v);
            }
        }
        let norm: f64 = (0..m).map(|i| u.at(i, c).norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-14 {
            for i in 0..m {
                let v = u.at(i, c) / norm;
                u.set(i, c, v);
            }
        }
    }
}

fn random_isometry(rng: &mut ChaCha8Rng, m: usize, r: usize) -> ComplexMatrix {
    let amp = crate::linalg::gaussian_amplitudes(rng, m * r);
    let mut u = ComplexMatrix::from_fn(m, r, |i, j| amp[i * r + j]);
    gram_schmidt_columns(&mut u);
    u
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Grid scan then golden-section refinement of a 1-d objective minimum.
fn line_minimize(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, grid: usize, iters: usize) -> (f64, f64) {
    let mut best_t = lo;
    let mut best_v = f(lo);
    for s in 1..=grid {
        let t = lo + (hi - lo) * s as f64 / grid as f64;
        let v = f(t);
        if v < best_v {
            best_v = v;
            best_t = t;
        }
    }
    let h = (hi - lo) / grid as f64;
    let (mut a, mut b) = ((best_t - h).max(lo), (best_t + h).min(hi));
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 > f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        }
    }
    let t = 0.5 * (a + b);
    let v = f(t);
    if v < best_v { (t, v) } else { (best_t, best_v) }
}

/// One coordinate-descent pass over all row pairs; returns the improved cost.
fn sweep(ws: &mut Workspace<'_>, u: &mut ComplexMatrix, mut current: f64) -> f64 {
    let m = u.rows();
    let r = u.cols();
    for p in 0..m {
        for q in (p + 1)..m {
            let row_p: Vec<C64> = (0..r).map(|j| u.at(p, j)).collect();
            let row_q: Vec<C64> = (0..r).map(|j| u.at(q, j)).collect();
            let base_pair = {
                let cp = ws.member_cost(&row_p);
                let cq = ws.member_cost(&row_q);
                cp + cq
            };
            let rest = current - base_pair;

            let pair_cost = |theta: f64, phi: f64, ws: &mut Workspace<'_>| -> f64 {
                let (c, s) = (theta.cos(), theta.sin());
                let ph = C64::new(phi.cos(), phi.sin());
                let new_p: Vec<C64> = (0..r)
                    .map(|j| row_p[j] * c + row_q[j] * s * ph)
                    .collect();
                let new_q: Vec<C64> = (0..r)
                    .map(|j| -row_p[j] * s * ph.conj() + row_q[j] * c)
                    .collect();
                ws.member_cost(&new_p) + ws.member_cost(&new_q)
            };

            // Angle search at two reference phases, then a phase search at
            // the winning angle, then a final angle polish.
            let half_pi = core::f64::consts::FRAC_PI_2;
            let (t0, v0) = line_minimize(|t| pair_cost(t, 0.0, ws), -half_pi, half_pi, 12, 24);
            let (t1, v1) = line_minimize(|t| pair_cost(t, half_pi, ws), -half_pi, half_pi, 12, 24);
            let (mut theta, mut phi, mut best) =
                if v0 <= v1 { (t0, 0.0, v0) } else { (t1, half_pi, v1) };
            let pi = core::f64::consts::PI;
            let (phi2, v2) = line_minimize(|f| pair_cost(theta, f, ws), -pi, pi, 16, 24);
            if v2 < best {
                phi = phi2;
                best = v2;
            }
            let (theta2, v3) = line_minimize(|t| pair_cost(t, phi, ws), -half_pi, half_pi, 12, 24);
            if v3 < best {
                theta = theta2;
                best = v3;
            }

            if best < base_pair - 1e-15 {
                let (c, s) = (theta.cos(), theta.sin());
                let ph = C64::new(phi.cos(), phi.sin());
                for j in 0..r {
                    u.set(p, j, row_p[j] * c + row_q[j] * s * ph);
                    u.set(q, j, -row_p[j] * s * ph.conj() + row_q[j] * c);
                }
                current = rest + best;
            }
        }
    }
    current
}

/// Carathéodory reduction of an ensemble to at most `cap` members, keeping
/// `sum_i q_i |phi_i><phi_i|` fixed: repeatedly finds a null combination of
/// the member projectors and shifts weight until one member vanishes.
fn caratheodory_reduce(
    mut members: Vec<(f64, StateVector)>,
    cap: usize,
) -> Vec<(f64, StateVector)> {
    while members.len() > cap {
        let l = members.len();
        let vecs: Vec<Vec<f64>> = members
            .iter()
            .map(|(_, phi)| {
                let proj = crate::linalg::outer(phi.amplitudes());
                let op = crate::linalg::HermitianOperator::new(proj).expect("projector");
                hermitian_to_vec(&op)
            })
            .collect();
        // Null vector of the stacked projector coordinates via the smallest
        // eigenvector of the Gram matrix.
        let mut gram = ComplexMatrix::zeros(l, l);
        for a in 0..l {
            for b in 0..l {
                let dot: f64 = vecs[a].iter().zip(&vecs[b]).map(|(x, y)| x * y).sum();
                gram.set(a, b, C64::new(dot, 0.0));
            }
        }
        let gram = crate::linalg::HermitianOperator::new(gram).expect("gram");
        let dec = hermitian_eig(&gram);
        let smallest = *dec.eigenvalues.last().unwrap();
        if smallest > 1e-9 {
            break; // linearly independent; cannot reduce further
        }
        let nu: Vec<f64> = (0..l).map(|i| dec.eigenvectors.at(i, l - 1).re).collect();
        let positive = nu.iter().any(|&v| v > 1e-12);
        let nu: Vec<f64> = if positive { nu } else { nu.iter().map(|v| -v).collect() };
        let mut t = f64::INFINITY;
        let mut drop_idx = None;
        for (i, (q, _)) in members.iter().enumerate() {
            if nu[i] > 1e-12 {
                let ratio = q / nu[i];
                if ratio < t {
                    t = ratio;
                    drop_idx = Some(i);
                }
            }
        }
        let Some(drop_idx) = drop_idx else { break };
        let mut next = Vec::with_capacity(l - 1);
        for (i, (q, phi)) in members.into_iter().enumerate() {
            if i == drop_idx {
                continue;
            }
            next.push(((q - t * nu[i]).max(0.0), phi));
        }
        members = next;
    }
    members
}

/// Isometry realizing a target ensemble on the spectral frame of rho.
fn isometry_from_ensemble(
    eigenvalues: &[f64],
    basis: &ComplexMatrix,
    ensemble: &[(f64, StateVector)],
    m: usize,
) -> ComplexMatrix {
    let r = eigenvalues.len();
    let mut u = ComplexMatrix::zeros(m, r);
    for (mu, (q, phi)) in ensemble.iter().enumerate() {
        for j in 0..r {
            let e_j: Vec<C64> = basis.column(j);
            let overlap = inner(&e_j, phi.amplitudes());
            u.set(mu, j, C64::new(q.sqrt(), 0.0) * overlap.conj() / eigenvalues[j].sqrt());
        }
    }
    gram_schmidt_columns(&mut u);
    u
}

fn realize(
    rho_dims: &[usize],
    eigenvalues: &[f64],
    basis: &ComplexMatrix,
    u: &ComplexMatrix,
) -> (Vec<f64>, Vec<StateVector>) {
    let d = basis.rows();
    let r = eigenvalues.len();
    let mut weights = Vec::new();
    let mut members = Vec::new();
    for i in 0..u.rows() {
        let mut x = vec![C64::new(0.0, 0.0); d];
        for j in 0..r {
            let c = u.at(i, j).conj() * eigenvalues[j].sqrt();
            for row in 0..d {
                x[row] += c * basis.at(row, j);
            }
        }
        let w: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        if w < WEIGHT_CUTOFF {
            continue;
        }
        let n = w.sqrt();
        for xi in &mut x {
            *xi /= n;
        }
        weights.push(w);
        members.push(StateVector::new(x, rho_dims.to_vec()).expect("normalized member"));
    }
    (weights, members)
}

/// Minimizes `sum_i p_i g(psi_i)` over pure-state ensembles of `rho`.
///
/// `g` must be the squared vector gauge of the theory (positively
/// homogeneous of degree 2 on projectors); the returned value is an upper
/// bound on its convex roof at `rho`. Restarts are seeded deterministically
/// from `opts.seed`; `seed_ensembles` (e.g. a free-vertex decomposition from
/// a membership LP) are used as additional deterministic starting points,
/// Carathéodory-reduced to at most `r^2` members.
pub fn ensemble_optimize(
    rho: &DensityMatrix,
    g: &mut dyn FnMut(&[C64]) -> f64,
    opts: &EnsembleOptions,
    seed_ensembles: &[Vec<(f64, StateVector)>],
) -> Result<(f64, EnsembleState)> {
    let dec = hermitian_eig(rho.op());
    let rank = dec.eigenvalues.iter().filter(|&&l| l > RANK_CUTOFF).count();
    if rank == 0 {
        return Err(Error::NotDensity { trace_error: 1.0, min_eigenvalue: 0.0 });
    }
    let eigenvalues: Vec<f64> = dec.eigenvalues[..rank].to_vec();
    let d = rho.dim();
    let basis = ComplexMatrix::from_fn(d, rank, |r, c| dec.eigenvectors.at(r, c));

    let cap = rank * rank;
    let reduced_seeds: Vec<Vec<(f64, StateVector)>> = seed_ensembles
        .iter()
        .map(|e| caratheodory_reduce(e.clone(), cap))
        .collect();
    let mut m = opts.members.unwrap_or_else(|| cap.min(2 * rank + 2)).max(rank);
    for s in &reduced_seeds {
        m = m.max(s.len());
    }
    m = m.min(cap.max(rank));

    let mut ws = Workspace { scaled_basis: ComplexMatrix::from_fn(d, rank, |r, c| {
        basis.at(r, c) * eigenvalues[c].sqrt()
    }), rank, dim: d, g };

    let mut starts: Vec<ComplexMatrix> = Vec::new();
    // Spectral ensemble itself.
    let mut identity = ComplexMatrix::zeros(m, rank);
    for j in 0..rank {
        identity.set(j, j, C64::new(1.0, 0.0));
    }
    starts.push(identity);
    for seed_ens in &reduced_seeds {
        starts.push(isometry_from_ensemble(&eigenvalues, &basis, seed_ens, m));
    }

    let mut best_cost = f64::INFINITY;
    let mut best_u: Option<ComplexMatrix> = None;
    let deterministic = starts.len();
    let total = deterministic + opts.restarts;
    for restart in 0..total {
        let mut u = if restart < deterministic {
            starts[restart].clone()
        } else {
            let mut rng =
                ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(restart as u64));
            random_isometry(&mut rng, m, rank)
        };
        let mut cost = ws.total_cost(&u);
        for _ in 0..opts.max_sweeps {
            let next = sweep(&mut ws, &mut u, cost);
            if cost - next < opts.sweep_tol * (1.0 + cost.abs()) {
                cost = next;
                break;
            }
            cost = next;
        }
        if cost < best_cost {
            best_cost = cost;
            best_u = Some(u);
        }
        if let Some(stop) = opts.lower_stop {
            if best_cost <= stop + 1e-9 * (1.0 + stop.abs()) {
                break;
            }
        }
    }

    let u = best_u.expect("at least one restart");
    let (weights, members) = realize(rho.dims(), &eigenvalues, &basis, &u);
    Ok((
        best_cost,
        EnsembleState { eigenvalues, basis, isometry: u, weights, members },
    ))
}

#[cfg(test)]
mod tests;
