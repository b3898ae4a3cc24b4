use super::*;
use crate::gauges;
use crate::linalg::sample_mixed;
use crate::states;
use crate::theories::{Theory, free_membership};

fn l1_sq(x: &[C64]) -> f64 {
    let l1: f64 = x.iter().map(|z| z.norm()).sum();
    l1 * l1
}

#[test]
fn pure_state_gives_exact_gauge() {
    let rho = DensityMatrix::from_pure(&states::plus());
    let mut g = l1_sq;
    let opts = EnsembleOptions { restarts: 2, ..Default::default() };
    let (value, ens) = ensemble_optimize(&rho, &mut g, &opts, &[]).unwrap();
    // Rank one: any ensemble reproduces g(psi) exactly.
    assert!((value - 2.0).abs() < 1e-10);
    assert_eq!(ens.eigenvalues.len(), 1);
}

#[test]
fn free_mixture_reaches_unit_value() {
    // Diagonal state: free for 2-coherence, so the roof of the squared l1
    // gauge is exactly one. The membership decomposition seeds the optimum.
    let theory = Theory::parse("coherence:d=3,k=1").unwrap();
    let mixed = sample_mixed(&[3], 3, 40).unwrap();
    let diag = crate::linalg::ComplexMatrix::from_fn(3, 3, |r, c| {
        if r == c { mixed.matrix().at(r, r) } else { C64::new(0.0, 0.0) }
    });
    let rho = DensityMatrix::new(diag, alloc::vec![3]).unwrap();
    let cert = free_membership(&rho, &theory).unwrap();
    let polytope = theory.polytope().unwrap();
    let seed: Vec<(f64, StateVector)> = cert
        .weights
        .unwrap()
        .iter()
        .enumerate()
        .filter(|(_, w)| **w > 1e-12)
        .map(|(i, w)| (*w, polytope.vertices()[i].clone()))
        .collect();
    let mut g = l1_sq;
    let opts =
        EnsembleOptions { restarts: 4, lower_stop: Some(1.0), ..Default::default() };
    let (value, _) = ensemble_optimize(&rho, &mut g, &opts, &[seed]).unwrap();
    assert!((value - 1.0).abs() < 1e-6, "free state roof should be 1, got {value}");
}

#[test]
fn ensemble_reconstructs_rho() {
    let rho = sample_mixed(&[4], 3, 17).unwrap();
    let mut g = l1_sq;
    let opts = EnsembleOptions { restarts: 3, max_sweeps: 10, ..Default::default() };
    let (_, ens) = ensemble_optimize(&rho, &mut g, &opts, &[]).unwrap();
    // sum_i p_i |psi_i><psi_i| = rho.
    let mut acc = crate::linalg::ComplexMatrix::zeros(4, 4);
    for (w, psi) in ens.weights.iter().zip(&ens.members) {
        acc = acc.add(&crate::linalg::outer(psi.amplitudes()).scale(C64::new(*w, 0.0)));
    }
    assert!(acc.sub(rho.matrix()).max_abs() < 1e-7, "ensemble drifted from rho");
    // Isometry invariant.
    let u = &ens.isometry;
    let utu = u.adjoint().mul(u);
    let r = ens.eigenvalues.len();
    assert!(utu.sub(&crate::linalg::ComplexMatrix::identity(r)).max_abs() < 1e-8);
    // Carathéodory bound on the member count.
    assert!(u.rows() <= r * r);
}

#[test]
fn roof_upper_bounds_convexity_mixture() {
    // Value at a mixture never exceeds the mixture of pure values.
    let bell_rho = DensityMatrix::from_pure(&states::bell());
    let e00 = DensityMatrix::from_pure(
        &StateVector::basis_state(4, 0).with_dims(alloc::vec![2, 2]).unwrap(),
    );
    let rho = e00.mix(&bell_rho, 0.5).unwrap();
    let mut g = |x: &[C64]| {
        let psi = StateVector::new(x.to_vec(), alloc::vec![2, 2]).expect("unit member");
        let v = gauges::schmidt_gauge(&psi, 2, 2, 1).expect("schmidt");
        v * v
    };
    let opts = EnsembleOptions { restarts: 8, ..Default::default() };
    let (value, _) = ensemble_optimize(&rho, &mut g, &opts, &[]).unwrap();
    // Pure values: g(|00>) = 1, g(Bell) = 2; mixture bound 1.5.
    assert!(value <= 1.5 + 1e-8);
    // Lower bound from negativity: roof >= 2 N(rho) + 1.
    let pt = crate::linalg::partial_transpose(&rho, 1).unwrap();
    let neg = (pt.trace_norm() - 1.0) / 2.0;
    assert!(value >= 2.0 * neg + 1.0 - 1e-5, "value {value} below 2N+1 = {}", 2.0 * neg + 1.0);
}

#[test]
fn caratheodory_reduction_respects_cap() {
    // Six stabilizer vertices mixing to the maximally mixed state reduce to
    // at most r^2 = 4 members.
    let theory = Theory::parse("magic:n=1").unwrap();
    let polytope = theory.polytope().unwrap();
    let members: Vec<(f64, StateVector)> =
        polytope.vertices().iter().map(|v| (1.0 / 6.0, v.clone())).collect();
    let reduced = caratheodory_reduce(members, 4);
    assert!(reduced.len() <= 4);
    let mut acc = crate::linalg::ComplexMatrix::zeros(2, 2);
    for (w, phi) in &reduced {
        acc = acc.add(&crate::linalg::outer(phi.amplitudes()).scale(C64::new(*w, 0.0)));
    }
    let expect = crate::linalg::ComplexMatrix::identity(2).scale(C64::new(0.5, 0.0));
    assert!(acc.sub(&expect).max_abs() < 1e-9);
}
