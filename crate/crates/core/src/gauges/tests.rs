use super::*;
use crate::states;
use crate::theories::Theory;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn random_vec(rng: &mut impl Rng, d: usize) -> Vec<C64> {
    (0..d).map(|_| C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)).collect()
}

fn l1(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm()).sum()
}

fn l2(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn linf(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn ksupport_k1_is_l1_and_kd_is_l2() {
    let x = vec![re(3.0), re(4.0)];
    assert!((ksupport_norm(&x, 1).unwrap() - 7.0).abs() < 1e-12);
    assert!((ksupport_norm(&x, 2).unwrap() - 5.0).abs() < 1e-12);
}

#[test]
fn ksupport_uniform_three_vector() {
    let s = 1.0 / 3.0f64.sqrt();
    let x = vec![re(s); 3];
    // Dual-ball ascent oracle confirms sqrt(3/2) for this input.
    assert!((ksupport_norm(&x, 2).unwrap() - (1.5f64).sqrt()).abs() < 1e-12);
}

#[test]
fn ksupport_single_atom() {
    for k in 1..=4 {
        let mut x = vec![re(0.0); 4];
        x[0] = re(1.0);
        assert!((ksupport_norm(&x, k).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn ksupport_k_out_of_range() {
    let x = vec![re(1.0), re(0.0)];
    assert!(ksupport_norm(&x, 0).is_err());
    assert!(ksupport_norm(&x, 3).is_err());
    assert!(ksupport_dual(&x, 0).is_err());
}

#[test]
fn ksupport_dual_values() {
    let x = vec![re(3.0), re(4.0), re(12.0)];
    assert!((ksupport_dual(&x, 2).unwrap() - 160.0f64.sqrt()).abs() < 1e-12);
    assert!((ksupport_dual(&x, 3).unwrap() - l2(&x)).abs() < 1e-12);
    let e = vec![re(0.0), re(1.0), re(0.0)];
    assert!((ksupport_dual(&e, 2).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn interpolation_chain_and_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let d = rng.gen_range(1..=8);
        let x = random_vec(&mut rng, d);
        for k in 1..=d {
            let g = ksupport_norm(&x, k).unwrap();
            let gd = ksupport_dual(&x, k).unwrap();
            let (a, b, c, e) = (l1(&x), l2(&x), linf(&x), 1e-10);
            assert!(a + e >= g && g + e >= b && b + e >= gd && gd + e >= c);
        }
    }
}

#[test]
fn generalized_cauchy_schwarz() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let d = rng.gen_range(1..=6);
        let x = random_vec(&mut rng, d);
        let y = random_vec(&mut rng, d);
        let k = rng.gen_range(1..=d);
        let ip = crate::linalg::inner(&x, &y).norm();
        let bound = ksupport_norm(&x, k).unwrap() * ksupport_dual(&y, k).unwrap();
        assert!(ip <= bound + 1e-9, "|<x,y>| = {ip} > {bound}");
    }
}

#[test]
fn monotone_in_k() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let d = rng.gen_range(2..=8);
        let x = random_vec(&mut rng, d);
        for k in 1..d {
            assert!(ksupport_norm(&x, k).unwrap() >= ksupport_norm(&x, k + 1).unwrap() - 1e-10);
            assert!(ksupport_dual(&x, k).unwrap() <= ksupport_dual(&x, k + 1).unwrap() + 1e-10);
        }
    }
}

#[test]
fn sparse_unit_vectors_have_unit_gauge() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let d = rng.gen_range(2..=8);
        let k = rng.gen_range(1..=d);
        // k-sparse unit vector.
        let mut x = vec![re(0.0); d];
        let mut support: Vec<usize> = (0..d).collect();
        for i in 0..k {
            let j = rng.gen_range(i..d);
            support.swap(i, j);
        }
        for &i in &support[..k] {
            x[i] = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
        let n = l2(&x);
        if n < 1e-6 {
            continue;
        }
        for xi in &mut x {
            *xi /= n;
        }
        assert!(coherence_rank(&x, 1e-12) <= k);
        assert!((ksupport_norm(&x, k).unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn coherence_rank_contract() {
    assert_eq!(coherence_rank(&[re(1.0), re(0.0)], 1e-9), 1);
    let s = core::f64::consts::FRAC_1_SQRT_2;
    assert_eq!(coherence_rank(&[re(s), re(s)], 1e-9), 2);
    assert_eq!(coherence_rank(&[re(1.0), re(1e-14)], 1e-9), 1);
}

#[test]
fn schmidt_gauge_values() {
    let bell = states::bell();
    assert!((schmidt_gauge(&bell, 2, 2, 1).unwrap() - 2.0f64.sqrt()).abs() < 1e-10);
    assert!((schmidt_gauge(&bell, 2, 2, 2).unwrap() - 1.0).abs() < 1e-10);
    let product = StateVector::basis_state(4, 1).with_dims(vec![2, 2]).unwrap();
    for k in 1..=2 {
        assert!((schmidt_gauge(&product, 2, 2, k).unwrap() - 1.0).abs() < 1e-10);
    }
    let psi = crate::linalg::sample_pure(&[3, 3], 5);
    assert!((schmidt_gauge(&psi, 3, 3, 3).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn pure_negativity_values() {
    assert!((pure_negativity(&states::bell(), 2, 2).unwrap() - 0.5).abs() < 1e-10);
    let product = StateVector::basis_state(4, 2).with_dims(vec![2, 2]).unwrap();
    assert!(pure_negativity(&product, 2, 2).unwrap().abs() < 1e-10);
}

#[test]
fn bipartition_count() {
    assert_eq!(bipartitions(2).len(), 1);
    assert_eq!(bipartitions(3).len(), 3);
    assert_eq!(bipartitions(4).len(), 7);
}

#[test]
fn genuine_gauge_ghz_and_w() {
    let g = genuine_gauge(&states::ghz(3)).unwrap();
    assert!((g - 2.0f64.sqrt()).abs() < 1e-10);
    // W state: every single-party split has reduced eigenvalues 2/3 and 1/3.
    let w = genuine_gauge(&states::w(3)).unwrap();
    let expect = (2.0f64 / 3.0).sqrt() + (1.0f64 / 3.0).sqrt();
    assert!((w - expect).abs() < 1e-10, "got {w}, want {expect}");
}

#[test]
fn genuine_gauge_biseparable_is_one() {
    // |0> (x) Bell: the 0|12 split is product.
    let psi = StateVector::basis_state(2, 0).tensor(&states::bell());
    assert!((genuine_gauge(&psi).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn genuine_matches_min_negativity() {
    for seed in 0..5u64 {
        let psi = crate::linalg::sample_pure(&[2, 2, 2], 100 + seed);
        let g = genuine_gauge(&psi).unwrap();
        let mut min_neg = f64::INFINITY;
        for side in bipartitions(3) {
            let grouped = regroup_bipartition(&psi, &side).unwrap();
            let neg =
                pure_negativity(&grouped, grouped.dims()[0], grouped.dims()[1]).unwrap();
            min_neg = min_neg.min(neg);
        }
        assert!((g * g - 1.0 - 2.0 * min_neg).abs() < 1e-10);
    }
}

#[test]
fn elementwise_norms() {
    let d = 3;
    let id = ComplexMatrix::identity(d).scale(re(1.0 / d as f64));
    assert!((elementwise_l1(&id) - 1.0).abs() < 1e-12);
    assert!((elementwise_max(&id) - 1.0 / 3.0).abs() < 1e-12);
    assert!((max_diag_clipped(&id) - 1.0 / 3.0).abs() < 1e-12);

    let plus = crate::linalg::outer(states::plus().amplitudes());
    assert!((elementwise_l1(&plus) - 2.0).abs() < 1e-12);
    assert!((elementwise_max(&plus) - 0.5).abs() < 1e-12);
    assert!((max_diag_clipped(&plus) - 0.5).abs() < 1e-12);

    // Diagonal states are free for 2-coherence: unit element-wise l1.
    let rho = crate::linalg::sample_mixed(&[4], 4, 3).unwrap();
    let diag = ComplexMatrix::from_fn(4, 4, |r, c| if r == c { rho.matrix().at(r, r) } else { re(0.0) });
    assert!((elementwise_l1(&diag) - 1.0).abs() < 1e-9);
}

#[test]
fn pure_polar_values() {
    let coh = Theory::parse("coherence:d=2,k=1").unwrap();
    assert!((pure_polar(&states::plus(), &coh).unwrap() - 0.5).abs() < 1e-12);
    assert!((pure_polar(&StateVector::basis_state(2, 0), &coh).unwrap() - 1.0).abs() < 1e-12);

    let sch = Theory::parse("schmidt:dA=2,dB=2,k=1").unwrap();
    assert!((pure_polar(&states::bell(), &sch).unwrap() - 0.5).abs() < 1e-10);

    let magic = Theory::parse("magic:n=1").unwrap();
    let t = states::t_state();
    // Largest stabilizer overlap with |T>: (1 + 1/sqrt(3))/2.
    let expect = (1.0 + 1.0 / 3.0f64.sqrt()) / 2.0;
    assert!((pure_polar(&t, &magic).unwrap() - expect).abs() < 1e-10);
    // Free vertex overlaps with itself.
    assert!((pure_polar(&StateVector::basis_state(2, 1), &magic).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn geometric_pure_values() {
    let magic = Theory::parse("magic:n=1").unwrap();
    let expect = 1.0 - (1.0 + 1.0 / 3.0f64.sqrt()) / 2.0;
    assert!((geometric_pure(&states::t_state(), &magic).unwrap() - expect).abs() < 1e-10);
    assert!(geometric_pure(&StateVector::basis_state(2, 0), &magic).unwrap() < 1e-12);

    let sch = Theory::parse("schmidt:dA=2,dB=2,k=1").unwrap();
    assert!((geometric_pure(&states::bell(), &sch).unwrap() - 0.5).abs() < 1e-10);
}
