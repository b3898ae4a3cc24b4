use super::*;
use crate::linalg::DensityMatrix;
use crate::states;
use crate::theories::{TheoryDescriptor, build_polytope};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn herm2(a: f64, b: C64, d: f64) -> HermitianOperator {
    let m = ComplexMatrix::from_rows(2, 2, alloc::vec![re(a), b, b.conj(), re(d)]).unwrap();
    HermitianOperator::new(m).unwrap()
}

#[test]
fn psd_at_lp_optimum_means_plain_lp() {
    // min x1 s.t. x1 >= 1 with block M(x) = x1 * I: PSD everywhere feasible.
    let mut lp = LinearProgram::minimize(alloc::vec![1.0]);
    lp.le_constraint(alloc::vec![-1.0], -1.0);
    let block = AffineBlock {
        f0: herm2(0.0, re(0.0), 0.0),
        fi: alloc::vec![herm2(1.0, re(0.0), 1.0)],
    };
    let res =
        cutting_plane_psd(&lp, &[block], &CuttingPlaneOptions::default(), None).unwrap();
    assert!(res.converged);
    assert!((res.lower_bound - 1.0).abs() < 1e-8);
    // Converged on the first round: no violated eigenvector ever appeared.
    assert_eq!(res.rounds, 1);
}

#[test]
fn largest_eigenvalue_of_pauli_x() {
    // min t s.t. t I - sigma_x >= 0  =>  t = 1.
    let lp = LinearProgram::minimize(alloc::vec![1.0]);
    let block = AffineBlock {
        f0: herm2(0.0, re(-1.0), 0.0),
        fi: alloc::vec![herm2(1.0, re(0.0), 1.0)],
    };
    let res =
        cutting_plane_psd(&lp, &[block], &CuttingPlaneOptions::default(), None).unwrap();
    assert!(res.converged);
    assert!((res.lower_bound - 1.0).abs() < 1e-7, "got {}", res.lower_bound);
    assert!((res.upper_bound.unwrap() - 1.0).abs() < 1e-7);
}

#[test]
fn generalized_robustness_of_t_state() {
    // min sum x_i  s.t.  sum_i x_i sigma_i - rho >= 0, x >= 0
    // for the one-qubit stabilizer polytope: optimum is 3 - sqrt(3), and the
    // generalized robustness is that minus one.
    let polytope = build_polytope(&TheoryDescriptor::MagicQubits { n: 1 }).unwrap();
    let rho = DensityMatrix::from_pure(&states::t_state());
    let k = polytope.len();
    let lp = LinearProgram::minimize(alloc::vec![1.0; k]);
    let block = AffineBlock {
        f0: HermitianOperator::new(rho.matrix().scale(re(-1.0))).unwrap(),
        fi: (0..k).map(|i| polytope.vertex_projector(i)).collect(),
    };
    let res =
        cutting_plane_psd(&lp, &[block], &CuttingPlaneOptions::default(), None).unwrap();
    assert!(res.converged, "rounds {}", res.rounds);
    let expect = 3.0 - 3.0f64.sqrt();
    assert!(
        (res.lower_bound - expect).abs() < 1e-5,
        "lower {} want {expect}",
        res.lower_bound
    );
    assert!((res.upper_bound.unwrap() - expect).abs() < 1e-5);

    // Dual operator from the cut multipliers certifies the same value:
    // W' = sum y_c w w^dag is PSD with <sigma_i, W'> <= 1 and
    // <rho, W'> = optimum.
    let w = dual_operator(&res.cut_record, &res.cut_multipliers, 0, 2);
    let dec = w.eig();
    assert!(dec.eigenvalues.last().unwrap() >= &-1e-9);
    for i in 0..k {
        assert!(w.inner(&polytope.vertex_projector(i)) <= 1.0 + 1e-7);
    }
    assert!((w.inner(rho.op()) - expect).abs() < 1e-5);
}

#[test]
fn lower_bounds_never_decrease_and_bracket_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _case in 0..10 {
        // Random 2x2 one-variable-pair problem:
        // min c.x s.t. F0 + x1 F1 + x2 F2 >= 0, x >= 0, x <= 3 (box).
        let rand_herm = |rng: &mut ChaCha8Rng| {
            herm2(
                rng.gen::<f64>() * 2.0 - 1.0,
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                rng.gen::<f64>() * 2.0 - 1.0,
            )
        };
        let f1 = rand_herm(&mut rng);
        let f2 = rand_herm(&mut rng);
        // Make the problem feasible: F0 = I - 0.5 F1 - 0.5 F2 is PSD-correctable.
        let f0 = HermitianOperator::new(
            ComplexMatrix::identity(2)
                .scale(re(2.0))
                .sub(&f1.matrix().scale(re(0.5)))
                .sub(&f2.matrix().scale(re(0.5))),
        )
        .unwrap();
        let c = alloc::vec![rng.gen::<f64>() + 0.1, rng.gen::<f64>() + 0.1];
        let mut lp = LinearProgram::minimize(c.clone());
        lp.le_constraint(alloc::vec![1.0, 0.0], 3.0);
        lp.le_constraint(alloc::vec![0.0, 1.0], 3.0);
        let block = AffineBlock { f0: f0.clone(), fi: alloc::vec![f1.clone(), f2.clone()] };
        let res =
            cutting_plane_psd(&lp, &[block.clone()], &CuttingPlaneOptions::default(), None)
                .unwrap();
        if !res.converged {
            continue;
        }
        // Brute force on a dense grid with eigenvalue feasibility checks.
        let mut brute = f64::INFINITY;
        let steps = 120;
        for i in 0..=steps {
            for j in 0..=steps {
                let x = [3.0 * i as f64 / steps as f64, 3.0 * j as f64 / steps as f64];
                let m = block.evaluate(&x);
                if m.min_eigenvalue() >= -1e-9 {
                    brute = brute.min(c[0] * x[0] + c[1] * x[1]);
                }
            }
        }
        if brute.is_finite() {
            let grid_slack = 0.15;
            assert!(
                res.lower_bound <= brute + 1e-6,
                "lower {} above brute {brute}",
                res.lower_bound
            );
            assert!(
                res.upper_bound.unwrap() <= brute + grid_slack,
                "upper {} far above brute {brute}",
                res.upper_bound.unwrap()
            );
        }
    }
}

#[test]
fn infeasible_block_propagates() {
    // -I - x * 0 >= 0 is impossible.
    let lp = LinearProgram::minimize(alloc::vec![1.0]);
    let block = AffineBlock {
        f0: herm2(-1.0, re(0.0), -1.0),
        fi: alloc::vec![herm2(0.0, re(0.0), 0.0)],
    };
    let err = cutting_plane_psd(&lp, &[block], &CuttingPlaneOptions::default(), None);
    assert!(matches!(err, Err(crate::Error::Infeasible)));
}
