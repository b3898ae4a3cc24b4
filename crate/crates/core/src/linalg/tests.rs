use super::*;
use alloc::vec;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub(crate) fn bell() -> StateVector {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(vec![re(s), re(0.0), re(0.0), re(s)], vec![2, 2]).unwrap()
}

fn ghz3() -> StateVector {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut amp = vec![re(0.0); 8];
    amp[0] = re(s);
    amp[7] = re(s);
    StateVector::new(amp, vec![2, 2, 2]).unwrap()
}

fn diag_matrix(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    ComplexMatrix::from_fn(n, n, |r, c| if r == c { re(values[r]) } else { re(0.0) })
}

fn random_hermitian(dim: usize, seed: u64) -> HermitianOperator {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut m = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        m.set(r, r, re(rng.gen::<f64>() * 2.0 - 1.0));
        for col in (r + 1)..dim {
            let z = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            m.set(r, col, z);
            m.set(col, r, z.conj());
        }
    }
    HermitianOperator::new(m).unwrap()
}

#[test]
fn eig_already_diagonal() {
    let op = HermitianOperator::new(diag_matrix(&[3.0, 1.0, 2.0])).unwrap();
    let dec = hermitian_eig(&op);
    assert!((dec.eigenvalues[0] - 3.0).abs() < 1e-12);
    assert!((dec.eigenvalues[1] - 2.0).abs() < 1e-12);
    assert!((dec.eigenvalues[2] - 1.0).abs() < 1e-12);
    // Permutation eigenvectors: each column is a basis vector.
    for col in 0..3 {
        let v = dec.eigenvectors.column(col);
        let big = v.iter().filter(|z| z.norm() > 0.9).count();
        assert_eq!(big, 1);
    }
}

#[test]
fn eig_pauli_x() {
    let m = ComplexMatrix::from_rows(2, 2, vec![re(0.0), re(1.0), re(1.0), re(0.0)]).unwrap();
    let op = HermitianOperator::new(m).unwrap();
    let dec = hermitian_eig(&op);
    assert!((dec.eigenvalues[0] - 1.0).abs() < 1e-12);
    assert!((dec.eigenvalues[1] + 1.0).abs() < 1e-12);
    let v = dec.eigenvectors.column(0);
    let s = core::f64::consts::FRAC_1_SQRT_2;
    assert!((v[0].norm() - s).abs() < 1e-10);
    assert!((v[1].norm() - s).abs() < 1e-10);
}

#[test]
fn eig_reconstructs_random_hermitian() {
    for seed in 0..4u64 {
        let op = random_hermitian(8, seed);
        let dec = hermitian_eig(&op);
        let rec = dec.reconstruct();
        assert!(rec.sub(op.matrix()).max_abs() < 1e-8);
        // Orthonormality of eigenvector columns.
        let vtv = dec.eigenvectors.adjoint().mul(&dec.eigenvectors);
        assert!(vtv.sub(&ComplexMatrix::identity(8)).max_abs() < 1e-8);
        // Trace identities.
        let sum: f64 = dec.eigenvalues.iter().sum();
        let sum_sq: f64 = dec.eigenvalues.iter().map(|l| l * l).sum();
        let tr = op.matrix().trace().re;
        let tr2 = op.matrix().mul(op.matrix()).trace().re;
        assert!((sum - tr).abs() <= 1e-8 * (1.0 + tr.abs()));
        assert!((sum_sq - tr2).abs() <= 1e-8 * (1.0 + tr2.abs()));
    }
}

#[test]
fn eig_rejects_non_hermitian() {
    let m = ComplexMatrix::from_rows(2, 2, vec![re(0.0), re(1.0), re(0.5), re(0.0)]).unwrap();
    assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
}

#[test]
fn schmidt_product_state() {
    let psi = StateVector::new(vec![re(1.0), re(0.0), re(0.0), re(0.0)], vec![2, 2]).unwrap();
    let sd = schmidt_decompose(&psi, 2, 2).unwrap();
    assert!((sd.coefficients[0] - 1.0).abs() < 1e-12);
    assert!(sd.coefficients[1].abs() < 1e-12);
}

#[test]
fn schmidt_bell_state() {
    let sd = schmidt_decompose(&bell(), 2, 2).unwrap();
    let s = core::f64::consts::FRAC_1_SQRT_2;
    assert!((sd.coefficients[0] - s).abs() < 1e-10);
    assert!((sd.coefficients[1] - s).abs() < 1e-10);
}

#[test]
fn schmidt_haar_reconstruction() {
    for seed in 10..14u64 {
        let psi = sample_pure(&[3, 3], seed);
        let sd = schmidt_decompose(&psi, 3, 3).unwrap();
        let sq: f64 = sd.coefficients.iter().map(|l| l * l).sum();
        assert!((sq - 1.0).abs() < 1e-9);
        // Rebuild sum_s lambda_s a_s (x) b_s.
        let mut rebuilt = vec![re(0.0); 9];
        for s in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    rebuilt[i * 3 + j] += re(sd.coefficients[s]) * sd.left.at(i, s) * sd.right.at(j, s);
                }
            }
        }
        for (a, b) in rebuilt.iter().zip(psi.amplitudes()) {
            assert!((a - b).norm() < 1e-8);
        }
        // Cross-check: coefficients agree with the B-side reduction spectrum.
        let rho = DensityMatrix::from_pure(&psi);
        let rho_b = partial_trace(&rho, &[1]).unwrap();
        let spec_b = hermitian_eig(rho_b.op());
        for (lam, mu) in sd.coefficients.iter().zip(&spec_b.eigenvalues) {
            assert!((lam * lam - mu).abs() < 1e-9);
        }
    }
}

#[test]
fn schmidt_dimension_mismatch() {
    let psi = bell();
    assert!(schmidt_decompose(&psi, 2, 3).is_err());
}

#[test]
fn partial_transpose_product_state() {
    let rho_a = sample_mixed(&[2], 2, 3).unwrap();
    let rho_b = sample_mixed(&[2], 2, 4).unwrap();
    let prod = rho_a.matrix().kron(rho_b.matrix());
    let rho = DensityMatrix::new(prod, vec![2, 2]).unwrap();
    let pt = partial_transpose(&rho, 1).unwrap();
    let expect = rho_a.matrix().kron(&rho_b.matrix().transpose());
    assert!(pt.matrix().sub(&expect).max_abs() < 1e-12);
}

#[test]
fn partial_transpose_bell_spectrum() {
    let rho = DensityMatrix::from_pure(&bell());
    let pt = partial_transpose(&rho, 1).unwrap();
    let mut eigs = hermitian_eig(&pt).eigenvalues;
    eigs.sort_by(f64::total_cmp);
    assert!((eigs[0] + 0.5).abs() < 1e-10);
    for e in &eigs[1..] {
        assert!((e - 0.5).abs() < 1e-10);
    }
    assert!((pt.matrix().trace().re - 1.0).abs() < 1e-12);
}

#[test]
fn partial_transpose_is_involution() {
    let rho = sample_mixed(&[2, 3], 4, 7).unwrap();
    let pt = partial_transpose(&rho, 0).unwrap();
    let back = partial_transpose_op(&pt, &[2, 3], 0).unwrap();
    assert!(back.matrix().sub(rho.matrix()).max_abs() < 1e-12);
}

#[test]
fn partial_transpose_invalid_subsystem() {
    let rho = sample_mixed(&[2, 2], 2, 1).unwrap();
    assert!(matches!(
        partial_transpose(&rho, 2),
        Err(Error::InvalidSubsystem { index: 2, count: 2 })
    ));
}

#[test]
fn partial_trace_product() {
    let rho_a = sample_mixed(&[2], 2, 11).unwrap();
    let rho_b = sample_mixed(&[3], 3, 12).unwrap();
    let prod = rho_a.matrix().kron(rho_b.matrix());
    let rho = DensityMatrix::new(prod, vec![2, 3]).unwrap();
    let tr_b = partial_trace(&rho, &[0]).unwrap();
    assert!(tr_b.matrix().sub(rho_a.matrix()).max_abs() < 1e-10);
}

#[test]
fn partial_trace_bell_is_maximally_mixed() {
    let rho = DensityMatrix::from_pure(&bell());
    let red = partial_trace(&rho, &[0]).unwrap();
    let expect = ComplexMatrix::identity(2).scale(re(0.5));
    assert!(red.matrix().sub(&expect).max_abs() < 1e-12);
}

#[test]
fn partial_trace_ghz_single_party() {
    let rho = DensityMatrix::from_pure(&ghz3());
    let red = partial_trace(&rho, &[2]).unwrap();
    let expect = ComplexMatrix::identity(2).scale(re(0.5));
    assert!(red.matrix().sub(&expect).max_abs() < 1e-12);
}

#[test]
fn partial_trace_empty_keep_rejected() {
    let rho = sample_mixed(&[2, 2], 2, 1).unwrap();
    assert!(matches!(partial_trace(&rho, &[]), Err(Error::EmptyKeepSet)));
}

#[test]
fn trace_norm_values() {
    let rho = sample_mixed(&[4], 3, 5).unwrap();
    assert!((trace_norm(rho.op()) - 1.0).abs() < 1e-9);

    let m = HermitianOperator::new(diag_matrix(&[2.0, -3.0])).unwrap();
    assert!((trace_norm(&m) - 5.0).abs() < 1e-12);

    let pt = partial_transpose(&DensityMatrix::from_pure(&bell()), 1).unwrap();
    assert!((trace_norm(&pt) - 2.0).abs() < 1e-10);
}

#[test]
fn ppt_trace_norm_dichotomy() {
    // NPT state: Bell projector.
    let bell_rho = DensityMatrix::from_pure(&bell());
    let pt = partial_transpose(&bell_rho, 1).unwrap();
    assert!(trace_norm(&pt) > 1.0 + 1e-6);
    // PPT state: Werner state at the separability boundary p = 1/3.
    let singlet = StateVector::new(
        vec![re(0.0), re(core::f64::consts::FRAC_1_SQRT_2), re(-core::f64::consts::FRAC_1_SQRT_2), re(0.0)],
        vec![2, 2],
    )
    .unwrap();
    let werner = DensityMatrix::maximally_mixed(vec![2, 2])
        .mix(&DensityMatrix::from_pure(&singlet), 1.0 / 3.0)
        .unwrap();
    let ptw = partial_transpose(&werner, 1).unwrap();
    assert!((trace_norm(&ptw) - 1.0).abs() < 1e-9);
    assert!(ptw.min_eigenvalue() > -1e-10);
}

#[test]
fn root_fidelity_basic() {
    let rho = sample_mixed(&[3], 2, 21).unwrap();
    assert!((root_fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-8);

    let e0 = DensityMatrix::from_pure(&StateVector::basis_state(2, 0));
    let e1 = DensityMatrix::from_pure(&StateVector::basis_state(2, 1));
    assert!(root_fidelity(&e0, &e1).unwrap() < 1e-8);
}

#[test]
fn root_fidelity_pure_reduction() {
    let psi = sample_pure(&[3], 31);
    let rho = DensityMatrix::from_pure(&psi);
    let sigma = sample_mixed(&[3], 3, 32).unwrap();
    let rf = root_fidelity(&rho, &sigma).unwrap();
    let overlap = sigma.op().expectation(psi.amplitudes());
    assert!((rf - overlap.sqrt()).abs() < 1e-9);
    // F = rf^2 equals Tr(rho sigma) when one argument is pure.
    assert!((rf * rf - rho.op().inner(sigma.op())).abs() < 1e-9);
    assert!((0.0..=1.0 + 1e-12).contains(&(rf * rf)));
    // Symmetry in the arguments.
    let rf2 = root_fidelity(&sigma, &rho).unwrap();
    assert!((rf - rf2).abs() < 1e-9);
}

#[test]
fn sampling_deterministic() {
    let a = sample_pure(&[4], 99);
    let b = sample_pure(&[4], 99);
    assert_eq!(a.amplitudes(), b.amplitudes());
    let ma = sample_mixed(&[4], 2, 99).unwrap();
    let mb = sample_mixed(&[4], 2, 99).unwrap();
    assert_eq!(ma.matrix().entries(), mb.matrix().entries());
}

#[test]
fn sampling_rank_one_is_pure() {
    let rho = sample_mixed(&[3], 1, 17).unwrap();
    assert!((rho.purity() - 1.0).abs() < 1e-9);
}

#[test]
fn sampling_rank_zero_rejected() {
    assert!(matches!(sample_mixed(&[2], 0, 1), Err(Error::InvalidRank { .. })));
}

#[test]
fn sampling_haar_moment() {
    let n = 10_000;
    let mut acc = 0.0;
    for seed in 0..n {
        let psi = sample_pure(&[2], seed);
        acc += psi.amplitudes()[0].norm_sqr();
    }
    let mean = acc / n as f64;
    assert!((mean - 0.5).abs() < 0.02, "Haar moment off: {mean}");
}
