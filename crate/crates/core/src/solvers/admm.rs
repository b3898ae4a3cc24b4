//! ADMM for complex l1 minimization under affine constraints:
//! `min ||x||_1  s.t.  A x = b` over `x` in `C^n`.
//!
//! The affine step projects through a precomputed pseudoinverse of `A A^dag`,
//! the proximal step is complex soft-thresholding, and the reported value is
//! certified against the dual bound `max Re<y, b>  s.t.  ||A^dag y||_inf <= 1`
//! evaluated at the ADMM dual iterate.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{C64, ComplexMatrix, HermitianOperator, vec_norm};

#[allow(unused_imports)]
use num_traits::Float;

/// `min ||x||_1 s.t. A x = b` with complex data.
#[derive(Clone, Debug)]
pub struct AffineL1Problem {
    pub a: ComplexMatrix,
    pub b: Vec<C64>,
}

#[derive(Clone, Copy, Debug)]
pub struct AdmmOptions {
    /// Duality-gap tolerance relative to `1 + value`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for AdmmOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 50_000 }
    }
}

#[derive(Clone, Debug)]
pub struct AdmmResult {
    pub x: Vec<C64>,
    /// `||x||_1` of the returned (feasible) iterate.
    pub value: f64,
    /// Certified lower bound from the scaled dual iterate.
    pub dual_bound: f64,
    pub gap: f64,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub converged: bool,
}

/// Applies the spectral pseudoinverse of a Hermitian PSD Gram matrix.
struct GramPinv {
    vectors: ComplexMatrix,
    inv_eigs: Vec<f64>,
}

impl GramPinv {
    fn new(gram: &HermitianOperator) -> Self {
        let dec = gram.eig();
        let cutoff = dec.eigenvalues[0].max(0.0) * 1e-12;
        let inv_eigs =
            dec.eigenvalues.iter().map(|&l| if l > cutoff { 1.0 / l } else { 0.0 }).collect();
        Self { vectors: dec.eigenvectors, inv_eigs }
    }

    fn apply(&self, v: &[C64]) -> Vec<C64> {
        let coeffs = self.vectors.adjoint_mul_vec(v);
        let scaled: Vec<C64> = coeffs.iter().zip(&self.inv_eigs).map(|(c, &l)| c * l).collect();
        self.vectors.mul_vec(&scaled)
    }
}

fn soft_threshold(v: &[C64], thresh: f64) -> Vec<C64> {
    v.iter()
        .map(|z| {
            let n = z.norm();
            if n <= thresh {
                C64::new(0.0, 0.0)
            } else {
                z * ((n - thresh) / n)
            }
        })
        .collect()
}

fn l1(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).sum()
}

pub fn admm_l1_affine(problem: &AffineL1Problem, opts: &AdmmOptions) -> Result<AdmmResult> {
    let a = &problem.a;
    let b = &problem.b;
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: b.len() });
    }

    let gram = HermitianOperator::new(a.mul(&a.adjoint()))?;
    let pinv = GramPinv::new(&gram);
    // Minimum-norm feasible point; rejects b outside the range of A.
    let x0 = a.adjoint_mul_vec(&pinv.apply(b));
    let ax0 = a.mul_vec(&x0);
    let feas = vec_norm(&ax0.iter().zip(b).map(|(p, q)| p - q).collect::<Vec<_>>());
    let bnorm = vec_norm(b);
    if feas > 1e-8 * (1.0 + bnorm) {
        return Err(Error::Infeasible);
    }

    // Projection onto {x : A x = b}.
    let project = |v: &[C64]| -> Vec<C64> {
        let av = a.mul_vec(v);
        let resid: Vec<C64> = av.iter().zip(b).map(|(p, q)| p - q).collect();
        let corr = a.adjoint_mul_vec(&pinv.apply(&resid));
        v.iter().zip(&corr).map(|(vi, ci)| vi - ci).collect()
    };

    let mut x = x0.clone();
    let mut z = x.clone();
    let mut u = vec![C64::new(0.0, 0.0); n];
    let mut rho = 1.0f64;
    let relax = 1.6f64;

    let mut best: Option<AdmmResult> = None;
    let mut primal_res = f64::INFINITY;
    let mut dual_res = f64::INFINITY;
    let mut iterations = 0;

    for it in 0..opts.max_iter {
        iterations = it + 1;
        let zu: Vec<C64> = z.iter().zip(&u).map(|(zi, ui)| zi - ui).collect();
        x = project(&zu);
        let xr: Vec<C64> =
            x.iter().zip(&z).map(|(xi, zi)| xi * relax + zi * (1.0 - relax)).collect();
        let w: Vec<C64> = xr.iter().zip(&u).map(|(xi, ui)| xi + ui).collect();
        let z_old = z.clone();
        z = soft_threshold(&w, 1.0 / rho);
        u = w.iter().zip(&z).map(|(wi, zi)| wi - zi).collect();

        primal_res = vec_norm(&x.iter().zip(&z).map(|(p, q)| p - q).collect::<Vec<_>>());
        dual_res = rho * vec_norm(&z.iter().zip(&z_old).map(|(p, q)| p - q).collect::<Vec<_>>());

        // Residual balancing.
        if primal_res > 10.0 * dual_res && dual_res.is_finite() {
            rho *= 2.0;
            for ui in &mut u {
                *ui *= 0.5;
            }
        } else if dual_res > 10.0 * primal_res {
            rho *= 0.5;
            for ui in &mut u {
                *ui *= 2.0;
            }
        }

        // Duality-gap certificate every few iterations.
        if it % 25 == 24 || primal_res + dual_res < 1e-12 {
            let value = l1(&x);
            // Dual candidate: least-squares solve of A^dag y = rho u,
            // scaled into the dual-feasible ball.
            let nu: Vec<C64> = u.iter().map(|ui| ui * rho).collect();
            let y = pinv.apply(&a.mul_vec(&nu));
            let aty = a.adjoint_mul_vec(&y);
            let inf: f64 = aty.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let scale = if inf > 1.0 { 1.0 / inf } else { 1.0 };
            let dual_bound: f64 =
                y.iter().zip(b).map(|(yi, bi)| (yi.conj() * bi).re).sum::<f64>() * scale;
            let gap = value - dual_bound;
            let res = AdmmResult {
                x: x.clone(),
                value,
                dual_bound,
                gap,
                iterations,
                primal_residual: primal_res,
                dual_residual: dual_res,
                converged: gap.abs() <= opts.tol * (1.0 + value.abs()),
            };
            let better = best.as_ref().map_or(true, |prev| res.gap.abs() < prev.gap.abs());
            if better {
                best = Some(res.clone());
            }
            if res.converged {
                return Ok(res);
            }
        }
    }

    Ok(best.unwrap_or(AdmmResult {
        x: x.clone(),
        value: l1(&x),
        dual_bound: f64::NEG_INFINITY,
        gap: f64::INFINITY,
        iterations,
        primal_residual: primal_res,
        dual_residual: dual_res,
        converged: false,
    }))
}
