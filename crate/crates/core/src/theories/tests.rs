use super::stabilizer::{apply_gate, canonical_phase, generators};
use super::*;
use crate::linalg::{inner, sample_mixed};
use crate::states;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[test]
fn stabilizer_counts() {
    assert_eq!(stabilizer_enumerate(1).unwrap().len(), 6);
    assert_eq!(stabilizer_enumerate(2).unwrap().len(), 60);
}

#[test]
#[ignore = "slow path; run with --ignored"]
fn stabilizer_count_three_qubits() {
    assert_eq!(stabilizer_enumerate(3).unwrap().len(), 1080);
}

#[test]
fn stabilizer_range_check() {
    assert!(stabilizer_enumerate(0).is_err());
    assert!(stabilizer_enumerate(4).is_err());
}

#[test]
fn stabilizer_states_are_canonical_units() {
    for n in 1..=2 {
        for v in stabilizer_enumerate(n).unwrap() {
            let norm: f64 = v.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            // Canonical phase: first significant amplitude is real positive.
            let first = v.amplitudes().iter().find(|z| z.norm() > 1e-9).unwrap();
            assert!(first.im.abs() < 1e-12 && first.re > 0.0);
        }
    }
}

#[test]
fn stabilizer_closure_is_fixpoint() {
    for n in 1..=2usize {
        let states = stabilizer_enumerate(n).unwrap();
        for gate in generators(n) {
            for s in &states {
                let moved = canonical_phase(&apply_gate(s.amplitudes(), n, gate));
                let hit = states
                    .iter()
                    .any(|t| inner(t.amplitudes(), &moved).norm() > 1.0 - 1e-10);
                assert!(hit, "closure violated by {gate:?}");
            }
        }
    }
}

#[test]
fn magic_one_qubit_vertices_are_pauli_eigenvectors() {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let expected: [Vec<C64>; 6] = [
        vec![re(1.0), re(0.0)],
        vec![re(0.0), re(1.0)],
        vec![re(s), re(s)],
        vec![re(s), re(-s)],
        vec![re(s), C64::new(0.0, s)],
        vec![re(s), C64::new(0.0, -s)],
    ];
    let found = stabilizer_enumerate(1).unwrap();
    for e in &expected {
        let hit = found.iter().any(|v| inner(v.amplitudes(), e).norm() > 1.0 - 1e-10);
        assert!(hit);
    }
}

#[test]
fn build_polytope_contract() {
    let coh = build_polytope(&TheoryDescriptor::CoherenceK { d: 3, k: 1 }).unwrap();
    assert_eq!(coh.len(), 3);
    assert!(coh.exact());
    let magic = build_polytope(&TheoryDescriptor::MagicQubits { n: 1 }).unwrap();
    assert_eq!(magic.len(), 6);
    assert!(matches!(
        build_polytope(&TheoryDescriptor::SchmidtK { da: 2, db: 2, k: 1 }),
        Err(Error::ContinuumFreeSet)
    ));
    assert!(matches!(
        build_polytope(&TheoryDescriptor::CoherenceK { d: 3, k: 2 }),
        Err(Error::ContinuumFreeSet)
    ));
}

#[test]
fn theory_grammar_round_trip() {
    for spec in
        ["coherence:d=4,k=2", "schmidt:dA=3,dB=4,k=2", "genuine:dims=2x2x3", "magic:n=2"]
    {
        let desc = TheoryDescriptor::parse(spec).unwrap();
        assert_eq!(desc.spec_string(), spec);
    }
    assert!(TheoryDescriptor::parse("coherence:d=2,k=5").is_err());
    assert!(TheoryDescriptor::parse("nonsense:d=2").is_err());
    assert!(TheoryDescriptor::parse("magic:n=9").is_err());
    assert!(TheoryDescriptor::parse("coherence").is_err());
}

#[test]
fn membership_maximally_mixed_magic() {
    let theory = Theory::parse("magic:n=1").unwrap();
    let rho = DensityMatrix::maximally_mixed(vec![2]);
    let cert = free_membership(&rho, &theory).unwrap();
    assert!(cert.inside);
    let w = cert.weights.unwrap();
    // Weights reconstruct rho.
    let polytope = theory.polytope().unwrap();
    let mut acc = ComplexMatrix::zeros(2, 2);
    for (i, wi) in w.iter().enumerate() {
        acc = acc.add(&polytope.vertex_projector(i).matrix().scale(re(*wi)));
    }
    assert!(acc.sub(rho.matrix()).max_abs() < 1e-8);
}

#[test]
fn membership_t_state_outside_with_witness() {
    let theory = Theory::parse("magic:n=1").unwrap();
    let rho = DensityMatrix::from_pure(&states::t_state());
    let cert = free_membership(&rho, &theory).unwrap();
    assert!(!cert.inside);
    let w = cert.witness.unwrap();
    let polytope = theory.polytope().unwrap();
    for i in 0..polytope.len() {
        assert!(w.inner(&polytope.vertex_projector(i)) >= -1e-8);
    }
    assert!(w.inner(rho.op()) < -1e-10);
}

#[test]
fn membership_diagonal_coherence() {
    let theory = Theory::parse("coherence:d=3,k=1").unwrap();
    let mixed = sample_mixed(&[3], 3, 9).unwrap();
    let diag = ComplexMatrix::from_fn(3, 3, |r, c| {
        if r == c { mixed.matrix().at(r, r) } else { re(0.0) }
    });
    let rho = DensityMatrix::new(diag, vec![3]).unwrap();
    let cert = free_membership(&rho, &theory).unwrap();
    assert!(cert.inside);
    let w = cert.weights.unwrap();
    for i in 0..3 {
        assert!((w[i] - rho.matrix().at(i, i).re).abs() < 1e-8);
    }
    // Coherent states sit outside the diagonal polytope.
    let plus3 = StateVector::normalized(vec![re(1.0), re(1.0), re(1.0)], vec![3]).unwrap();
    let cert = free_membership(&DensityMatrix::from_pure(&plus3), &theory).unwrap();
    assert!(!cert.inside && cert.witness.is_some());
}

#[test]
fn membership_every_vertex_inside() {
    let theory = Theory::parse("magic:n=1").unwrap();
    let polytope = theory.polytope().unwrap().clone();
    for v in polytope.vertices() {
        let rho = DensityMatrix::from_pure(v);
        assert!(free_membership(&rho, &theory).unwrap().inside);
    }
}

#[test]
fn membership_invariant_under_vertex_permutation() {
    let theory = Theory::parse("magic:n=1").unwrap();
    let polytope = theory.polytope().unwrap();
    let mut vertices: Vec<StateVector> = polytope.vertices().to_vec();
    vertices.reverse();
    let permuted = Theory::with_polytope(
        TheoryDescriptor::MagicQubits { n: 1 },
        PolytopeFreeSet::from_vertices(vertices, true).unwrap(),
    )
    .unwrap();
    let rho = sample_mixed(&[2], 2, 33).unwrap();
    let a = free_membership(&rho, &theory).unwrap();
    let b = free_membership(&rho, &permuted).unwrap();
    assert_eq!(a.inside, b.inside);
}

#[test]
fn membership_requires_polytope() {
    let theory = Theory::parse("schmidt:dA=2,dB=2,k=1").unwrap();
    let rho = sample_mixed(&[2, 2], 2, 1).unwrap();
    assert!(matches!(free_membership(&rho, &theory), Err(Error::Unsupported(_))));
}

#[test]
fn pure_free_tests() {
    let sch1 = Theory::parse("schmidt:dA=2,dB=2,k=1").unwrap();
    let sch2 = Theory::parse("schmidt:dA=2,dB=2,k=2").unwrap();
    assert!(!pure_free_test(&states::bell(), &sch1, 1e-9).unwrap());
    assert!(pure_free_test(&states::bell(), &sch2, 1e-9).unwrap());

    let magic = Theory::parse("magic:n=1").unwrap();
    assert!(!pure_free_test(&states::t_state(), &magic, 1e-9).unwrap());
    assert!(pure_free_test(&states::plus(), &magic, 1e-9).unwrap());

    let coh = Theory::parse("coherence:d=2,k=1").unwrap();
    assert!(!pure_free_test(&states::plus(), &coh, 1e-9).unwrap());

    let genuine = Theory::parse("genuine:dims=2x2x2").unwrap();
    assert!(!pure_free_test(&states::ghz(3), &genuine, 1e-9).unwrap());
    let bisep = StateVector::basis_state(2, 0).tensor(&states::bell());
    assert!(pure_free_test(&bisep, &genuine, 1e-9).unwrap());
}

#[test]
fn every_vertex_passes_its_own_pure_test() {
    for spec in ["magic:n=1", "magic:n=2", "coherence:d=4,k=1"] {
        let theory = Theory::parse(spec).unwrap();
        let polytope = theory.polytope().unwrap().clone();
        for v in polytope.vertices() {
            let v = v.with_dims(theory.descriptor().factor_dims()).unwrap();
            assert!(pure_free_test(&v, &theory, 1e-9).unwrap(), "{spec}");
        }
    }
}
