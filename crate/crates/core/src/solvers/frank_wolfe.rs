//! Frank-Wolfe (conditional gradient) maximization of a concave function
//! over the simplex of vertex weights.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

#[derive(Clone, Copy, Debug)]
pub struct FrankWolfeOptions {
    /// Stop when the Frank-Wolfe gap drops below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Golden-section refinements per line search.
    pub line_search_iters: usize,
}

impl Default for FrankWolfeOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 2_000, line_search_iters: 48 }
    }
}

#[derive(Clone, Debug)]
pub struct FrankWolfeResult {
    pub weights: Vec<f64>,
    pub value: f64,
    /// Final duality gap `max_j grad_j - <grad, x>`; for concave objectives
    /// the optimum exceeds `value` by at most this amount.
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn golden_section_max(
    mut f: impl FnMut(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    iters: usize,
) -> f64 {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Maximizes a concave differentiable `f` over `{x >= 0, sum x = 1}` with
/// `num_vertices` coordinates. `grad` returns the gradient with respect to
/// the weights. Non-finite gradients at the boundary are retried after an
/// epsilon blend toward the uniform point.
pub fn frank_wolfe_maximize(
    f: &mut dyn FnMut(&[f64]) -> f64,
    grad: &mut dyn FnMut(&[f64]) -> Vec<f64>,
    num_vertices: usize,
    opts: &FrankWolfeOptions,
) -> FrankWolfeResult {
    let m = num_vertices;
    let mut x = vec![1.0 / m as f64; m];
    let mut gap = f64::INFINITY;
    let mut iterations = 0;

    for it in 0..opts.max_iter {
        iterations = it + 1;
        let mut g = grad(&x);
        if g.iter().any(|v| !v.is_finite()) {
            // Epsilon-regularize away from the boundary and retry once.
            let eps = 1e-9;
            for xi in &mut x {
                *xi = (1.0 - eps) * *xi + eps / m as f64;
            }
            g = grad(&x);
            if g.iter().any(|v| !v.is_finite()) {
                break;
            }
        }
        let (best_j, best_g) = g
            .iter()
            .enumerate()
            .fold(
                (0usize, f64::NEG_INFINITY),
                |acc, (j, &v)| if v > acc.1 { (j, v) } else { acc },
            );
        let gx: f64 = g.iter().zip(&x).map(|(gi, xi)| gi * xi).sum();
        gap = best_g - gx;
        if gap <= opts.tol {
            break;
        }
        // Line search along x + gamma (e_j - x).
        let step = {
            let xc = x.clone();
            let eval = |gamma: f64| {
                let mut y = xc.clone();
                for (j, yj) in y.iter_mut().enumerate() {
                    *yj *= 1.0 - gamma;
                    if j == best_j {
                        *yj += gamma;
                    }
                }
                f(&y)
            };
            golden_section_max(eval, 0.0, 1.0, opts.line_search_iters)
        };
        let gamma = if step > 0.0 { step } else { 2.0 / (it as f64 + 2.0) };
        for (j, xj) in x.iter_mut().enumerate() {
            *xj *= 1.0 - gamma;
            if j == best_j {
                *xj += gamma;
            }
        }
    }
    let value = f(&x);
    FrankWolfeResult { weights: x, value, gap, iterations, converged: gap <= opts.tol }
}
