use super::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn fixes_single_variable() {
    let mut lp = LinearProgram::minimize(vec![1.0]);
    lp.eq_constraint(vec![1.0], 3.0);
    let sol = simplex_solve(&lp);
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective - 3.0).abs() < 1e-10);
    assert!((sol.x[0] - 3.0).abs() < 1e-10);
}

#[test]
fn detects_infeasible_system() {
    // x1 + x2 = 1 and x1 + x2 = 2 cannot both hold.
    let mut lp = LinearProgram::minimize(vec![0.0, 0.0]);
    lp.eq_constraint(vec![1.0, 1.0], 1.0);
    lp.eq_constraint(vec![1.0, 1.0], 2.0);
    let sol = simplex_solve(&lp);
    assert_eq!(sol.status, LpStatus::Infeasible);
    // Farkas: y.A <= 0 componentwise and y.b > 0.
    let y = sol.farkas.unwrap();
    for j in 0..2 {
        let col = y[0] * 1.0 + y[1] * 1.0;
        assert!(col <= 1e-9, "column {j} violates Farkas: {col}");
    }
    assert!(y[0] * 1.0 + y[1] * 2.0 > 1e-9);
}

#[test]
fn detects_unbounded() {
    // min -x, x >= 0, no constraint above.
    let lp = LinearProgram::minimize(vec![-1.0]);
    let sol = simplex_solve(&lp);
    assert_eq!(sol.status, LpStatus::Unbounded);
}

#[test]
fn solves_with_inequalities_and_free_vars() {
    // min x + y  s.t.  x + y >= 2 (as -x - y <= -2), y free, x >= 0.
    let mut lp = LinearProgram::minimize(vec![1.0, 1.0]);
    lp.le_constraint(vec![-1.0, -1.0], -2.0);
    lp.set_free(1);
    let sol = simplex_solve(&lp);
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective - 2.0).abs() < 1e-9);
    let (p, d, c) = kkt_residuals(&lp, &sol);
    assert!(p < 1e-9 && d < 1e-9 && c < 1e-9, "kkt: {p} {d} {c}");
}

#[test]
fn free_variable_takes_negative_value() {
    // min y s.t. y >= -5 (as -y <= 5), y free: optimum y = -5.
    let mut lp = LinearProgram::minimize(vec![1.0]);
    lp.le_constraint(vec![-1.0], 5.0);
    lp.set_free(0);
    let sol = simplex_solve(&lp);
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.x[0] + 5.0).abs() < 1e-9);
}

#[test]
fn random_feasible_lps_satisfy_kkt() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _case in 0..20 {
        let (m, n) = (10usize, 20usize);
        // Feasible by construction: b = A x0 with x0 >= 0; c >= 0 keeps the
        // objective bounded below.
        let a: Vec<Vec<f64>> =
            (0..m).map(|_| (0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect()).collect();
        let x0: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let c: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let mut lp = LinearProgram::minimize(c);
        for row in &a {
            let b: f64 = row.iter().zip(&x0).map(|(ai, xi)| ai * xi).sum();
            lp.eq_constraint(row.clone(), b);
        }
        let sol = simplex_solve(&lp);
        assert_eq!(sol.status, LpStatus::Optimal);
        let (p, d, cs) = kkt_residuals(&lp, &sol);
        assert!(p <= 1e-7, "primal residual {p}");
        assert!(d <= 1e-7, "dual residual {d}");
        assert!(cs <= 1e-7, "complementary slackness {cs}");
        // Strong duality.
        let dual_val: f64 =
            sol.dual_eq.iter().zip(lp.eq.iter()).map(|(y, (_, b))| y * b).sum::<f64>();
        assert!((dual_val - sol.objective).abs() <= 1e-7 * (1.0 + sol.objective.abs()));
    }
}

#[test]
fn degenerate_lp_terminates() {
    // Degenerate vertex: several constraints active at the optimum.
    let mut lp = LinearProgram::minimize(vec![-1.0, -1.0]);
    lp.le_constraint(vec![1.0, 0.0], 1.0);
    lp.le_constraint(vec![0.0, 1.0], 1.0);
    lp.le_constraint(vec![1.0, 1.0], 2.0);
    lp.le_constraint(vec![1.0, -1.0], 0.0);
    let sol = simplex_solve(&lp);
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective + 2.0).abs() < 1e-9);
}

#[test]
fn redundant_rows_are_handled() {
    // Same constraint twice.
    let mut lp = LinearProgram::minimize(vec![1.0, 2.0]);
    lp.eq_constraint(vec![1.0, 1.0], 1.0);
    lp.eq_constraint(vec![2.0, 2.0], 2.0);
    let sol = simplex_solve(&lp);
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective - 1.0).abs() < 1e-9);
    let (p, d, c) = kkt_residuals(&lp, &sol);
    assert!(p < 1e-8 && d < 1e-8 && c < 1e-8);
}
