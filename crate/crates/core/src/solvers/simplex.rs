//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Sized for the desk-scale programs this crate produces (up to a few
//! hundred rows and columns). Artificial columns are kept in the tableau
//! through phase 2 so the dual vector can be read off their reduced costs;
//! Bland's rule is always on, so the iteration cannot cycle.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

/// Entries below this are treated as zero when pivoting.
const PIVOT_EPS: f64 = 1e-9;
/// Reduced-cost threshold for optimality.
const COST_EPS: f64 = 1e-9;
/// Phase-1 objective above this means infeasible.
const FEAS_EPS: f64 = 1e-8;

/// `min c.x  s.t.  A x = b,  G x <= h,  x_j >= 0` (or free where flagged).
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub eq: Vec<(Vec<f64>, f64)>,
    pub ineq: Vec<(Vec<f64>, f64)>,
    pub free: Vec<bool>,
}

impl LinearProgram {
    pub fn minimize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self { objective, eq: Vec::new(), ineq: Vec::new(), free: vec![false; n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn eq_constraint(&mut self, a: Vec<f64>, b: f64) {
        debug_assert_eq!(a.len(), self.num_vars());
        self.eq.push((a, b));
    }

    pub fn le_constraint(&mut self, g: Vec<f64>, h: f64) {
        debug_assert_eq!(g.len(), self.num_vars());
        self.ineq.push((g, h));
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Pivot budget exhausted without reaching optimality.
    Stalled,
}

/// Solution record. For `Optimal` solves the duals satisfy, within solver
/// tolerance: `c_j - y.a_j - z.g_j >= 0` for every `x_j >= 0` variable
/// (with equality on basic/free variables), `z <= 0`, and the strong-duality
/// identity `c.x = y.b + z.h`.
///
/// For `Infeasible` solves `farkas` holds multipliers `(y, z)` over the
/// stacked `[eq; ineq]` rows with `y.A + z.G <= 0` componentwise on the
/// `x >= 0` columns (zero on free columns), `z <= 0`, and `y.b + z.h > 0`.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub dual_eq: Vec<f64>,
    pub dual_ineq: Vec<f64>,
    pub farkas: Option<Vec<f64>>,
}

struct Tableau {
    /// Coefficient rows, `live_rows x total_cols`.
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    /// Basic column index per row.
    basis: Vec<usize>,
    /// Objective row (reduced costs) and its value.
    obj: Vec<f64>,
    obj_value: f64,
    n_std: usize,
    n_art: usize,
    /// Original stacked row index per live tableau row.
    row_origin: Vec<usize>,
    iterations: usize,
}

impl Tableau {
    fn total_cols(&self) -> usize {
        self.n_std + self.n_art
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let cols = self.total_cols();
        let p = self.rows[row][col];
        let inv = 1.0 / p;
        for j in 0..cols {
            self.rows[row][j] *= inv;
        }
        self.rhs[row] *= inv;
        self.rows[row][col] = 1.0;
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let f = self.rows[r][col];
            if f.abs() <= f64::MIN_POSITIVE {
                continue;
            }
            for j in 0..cols {
                self.rows[r][j] -= f * self.rows[row][j];
            }
            self.rows[r][col] = 0.0;
            self.rhs[r] -= f * self.rhs[row];
        }
        let f = self.obj[col];
        if f != 0.0 {
            for j in 0..cols {
                self.obj[j] -= f * self.rows[row][j];
            }
            self.obj[col] = 0.0;
            self.obj_value -= f * self.rhs[row];
        }
        self.basis[row] = col;
        self.iterations += 1;
    }

    /// Bland's rule: entering column is the lowest index with negative
    /// reduced cost; leaving row breaks ratio ties by the lowest basic
    /// variable index. Returns Ok(true) when optimal, Ok(false) on a pivot,
    /// Err(()) when unbounded.
    fn step(&mut self, allow_artificial_entering: bool) -> core::result::Result<bool, ()> {
        let limit = if allow_artificial_entering { self.total_cols() } else { self.n_std };
        let mut entering = None;
        for j in 0..limit {
            if self.obj[j] < -COST_EPS {
                entering = Some(j);
                break;
            }
        }
        let Some(col) = entering else {
            return Ok(true);
        };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..self.rows.len() {
            let a = self.rows[r][col];
            if a > PIVOT_EPS {
                let ratio = self.rhs[r] / a;
                match leave {
                    None => leave = Some((r, ratio)),
                    Some((br, bratio)) => {
                        if ratio < bratio - 1e-12
                            || (ratio <= bratio + 1e-12 && self.basis[r] < self.basis[br])
                        {
                            leave = Some((r, ratio));
                        }
                    }
                }
            }
        }
        let Some((row, _)) = leave else {
            return Err(());
        };
        self.pivot(row, col);
        Ok(false)
    }
}

/// Two-phase dense simplex over the given program.
pub fn simplex_solve(lp: &LinearProgram) -> LpSolution {
    let n = lp.num_vars();
    debug_assert_eq!(lp.free.len(), n);

    // Standard columns: split free variables, then one slack per ineq row.
    let mut pos_col = vec![0usize; n];
    let mut neg_col = vec![usize::MAX; n];
    let mut n_std = 0usize;
    for j in 0..n {
        pos_col[j] = n_std;
        n_std += 1;
        if lp.free[j] {
            neg_col[j] = n_std;
            n_std += 1;
        }
    }
    let slack_base = n_std;
    n_std += lp.ineq.len();

    let m = lp.eq.len() + lp.ineq.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut flip = Vec::with_capacity(m);
    let stacked: Vec<(&[f64], f64, Option<usize>)> = lp
        .eq
        .iter()
        .map(|(a, b)| (a.as_slice(), *b, None))
        .chain(
            lp.ineq
                .iter()
                .enumerate()
                .map(|(s, (g, h))| (g.as_slice(), *h, Some(slack_base + s))),
        )
        .collect();
    for (a, b, slack) in &stacked {
        let sign = if *b < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0f64; n_std];
        for j in 0..n {
            row[pos_col[j]] = sign * a[j];
            if lp.free[j] {
                row[neg_col[j]] = -sign * a[j];
            }
        }
        if let Some(sc) = slack {
            row[*sc] = sign;
        }
        rows.push(row);
        rhs.push(sign * b);
        flip.push(sign);
    }

    // Phase-1 tableau with one artificial per row.
    let n_art = m;
    let mut t = Tableau {
        rows: rows
            .into_iter()
            .enumerate()
            .map(|(r, mut row)| {
                row.resize(n_std + n_art, 0.0);
                row[n_std + r] = 1.0;
                row
            })
            .collect(),
        rhs,
        basis: (0..m).map(|r| n_std + r).collect(),
        obj: vec![0.0; n_std + n_art],
        obj_value: 0.0,
        n_std,
        n_art,
        row_origin: (0..m).collect(),
        iterations: 0,
    };
    // Phase-1 objective: minimize the sum of artificials. Reduced against
    // the all-artificial basis, the cost row is the negated column sums.
    for j in 0..n_std {
        t.obj[j] = -(0..m).map(|r| t.rows[r][j]).sum::<f64>();
    }
    t.obj_value = -t.rhs.iter().sum::<f64>();

    let max_pivots = 2000 + 200 * (m + n_std);
    loop {
        if t.iterations > max_pivots {
            return stalled(&t, lp, n, &pos_col, &neg_col);
        }
        match t.step(true) {
            Ok(true) => break,
            Ok(false) => {}
            Err(()) => {
                // Phase-1 objective is bounded below by zero.
                return stalled(&t, lp, n, &pos_col, &neg_col);
            }
        }
    }

    // obj_value tracks -(phase-1 objective).
    let phase1 = -t.obj_value;
    if phase1 > FEAS_EPS {
        // Farkas certificate from the phase-1 duals: y'_r = 1 - cbar(art_r),
        // mapped back through the row sign flips.
        let mut farkas = vec![0.0f64; m];
        for r0 in 0..m {
            let y = 1.0 - t.obj[n_std + r0];
            farkas[r0] = flip[r0] * y;
        }
        // Returned convention: y.A + z.G <= 0 on x >= 0 columns and
        // y.b + z.h > 0. Phase-1 duals give exactly this orientation.
        return LpSolution {
            status: LpStatus::Infeasible,
            x: vec![0.0; n],
            objective: f64::INFINITY,
            iterations: t.iterations,
            dual_eq: vec![0.0; lp.eq.len()],
            dual_ineq: vec![0.0; lp.ineq.len()],
            farkas: Some(farkas),
        };
    }

    // Drive basic artificials out; delete rows that are redundant.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n_std {
            let col = (0..n_std).find(|&j| t.rows[r][j].abs() > PIVOT_EPS);
            match col {
                Some(c) => t.pivot(r, c),
                None => {
                    t.rows.remove(r);
                    t.rhs.remove(r);
                    t.basis.remove(r);
                    t.row_origin.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    // Phase 2: real costs on the standard columns.
    let mut cost = vec![0.0f64; n_std + n_art];
    for j in 0..n {
        cost[pos_col[j]] = lp.objective[j];
        if lp.free[j] {
            cost[neg_col[j]] = -lp.objective[j];
        }
    }
    t.obj = cost.clone();
    t.obj_value = 0.0;
    for (row_idx, &b) in t.basis.iter().enumerate() {
        let cb = cost[b];
        if cb != 0.0 {
            for j in 0..(n_std + n_art) {
                t.obj[j] -= cb * t.rows[row_idx][j];
            }
            t.obj_value -= cb * t.rhs[row_idx];
        }
    }
    loop {
        if t.iterations > max_pivots {
            return stalled(&t, lp, n, &pos_col, &neg_col);
        }
        match t.step(false) {
            Ok(true) => break,
            Ok(false) => {}
            Err(()) => {
                let mut sol = extract(&t, lp, n, &pos_col, &neg_col, &flip);
                sol.status = LpStatus::Unbounded;
                sol.objective = f64::NEG_INFINITY;
                return sol;
            }
        }
    }

    extract(&t, lp, n, &pos_col, &neg_col, &flip)
}

fn extract(
    t: &Tableau,
    lp: &LinearProgram,
    n: usize,
    pos_col: &[usize],
    neg_col: &[usize],
    flip: &[f64],
) -> LpSolution {
    let mut x_std = vec![0.0f64; t.n_std];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < t.n_std {
            x_std[b] = t.rhs[r];
        }
    }
    let mut x = vec![0.0f64; n];
    for j in 0..n {
        x[j] = x_std[pos_col[j]];
        if lp.free[j] {
            x[j] -= x_std[neg_col[j]];
        }
    }
    // Duals from the artificial reduced costs: cbar(art_r0) = -y'_{r0} for
    // live rows (phase-2 artificial cost is zero); deleted redundant rows
    // get a zero multiplier.
    let m = lp.eq.len() + lp.ineq.len();
    let mut y = vec![0.0f64; m];
    for &orig in &t.row_origin {
        y[orig] = flip[orig] * (-t.obj[t.n_std + orig]);
    }
    let objective: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    LpSolution {
        status: LpStatus::Optimal,
        x,
        objective,
        iterations: t.iterations,
        dual_eq: y[..lp.eq.len()].to_vec(),
        dual_ineq: y[lp.eq.len()..].to_vec(),
        farkas: None,
    }
}

fn stalled(
    t: &Tableau,
    lp: &LinearProgram,
    n: usize,
    pos_col: &[usize],
    neg_col: &[usize],
) -> LpSolution {
    let mut x_std = vec![0.0f64; t.n_std];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < t.n_std {
            x_std[b] = t.rhs[r];
        }
    }
    let mut x = vec![0.0f64; n];
    for j in 0..n {
        x[j] = x_std[pos_col[j]];
        if lp.free[j] {
            x[j] -= x_std[neg_col[j]];
        }
    }
    LpSolution {
        status: LpStatus::Stalled,
        x,
        objective: f64::NAN,
        iterations: t.iterations,
        dual_eq: vec![0.0; lp.eq.len()],
        dual_ineq: vec![0.0; lp.ineq.len()],
        farkas: None,
    }
}

/// Worst KKT residuals of an optimal solution: primal feasibility, dual
/// feasibility, and complementary slackness.
pub fn kkt_residuals(lp: &LinearProgram, sol: &LpSolution) -> (f64, f64, f64) {
    let n = lp.num_vars();
    let mut primal = 0.0f64;
    for (a, b) in &lp.eq {
        let ax: f64 = a.iter().zip(&sol.x).map(|(ai, xi)| ai * xi).sum();
        primal = primal.max((ax - b).abs());
    }
    let mut slacks = Vec::with_capacity(lp.ineq.len());
    for (g, h) in &lp.ineq {
        let gx: f64 = g.iter().zip(&sol.x).map(|(gi, xi)| gi * xi).sum();
        slacks.push(h - gx);
        primal = primal.max((gx - h).max(0.0));
    }
    for j in 0..n {
        if !lp.free[j] {
            primal = primal.max((-sol.x[j]).max(0.0));
        }
    }

    let mut dual = 0.0f64;
    let mut cs = 0.0f64;
    for j in 0..n {
        let mut red = lp.objective[j];
        for (r, (a, _)) in lp.eq.iter().enumerate() {
            red -= sol.dual_eq[r] * a[j];
        }
        for (s, (g, _)) in lp.ineq.iter().enumerate() {
            red -= sol.dual_ineq[s] * g[j];
        }
        if lp.free[j] {
            dual = dual.max(red.abs());
        } else {
            dual = dual.max((-red).max(0.0));
            cs = cs.max((sol.x[j] * red).abs());
        }
    }
    for (s, slack) in slacks.iter().enumerate() {
        dual = dual.max(sol.dual_ineq[s].max(0.0));
        cs = cs.max((sol.dual_ineq[s] * slack).abs());
    }
    (primal, dual, cs)
}

#[cfg(test)]
mod tests;
