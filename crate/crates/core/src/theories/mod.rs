//! Free-set descriptors and their concrete realizations.
//!
//! A [`TheoryDescriptor`] picks one of the four supported resource theories;
//! [`Theory`] pairs it with the vertex dictionary of the free-state polytope
//! whenever the free set is one (magic on 1-3 qubits, coherence with k = 1).
//! Membership of a density matrix in a polytope is decided by a feasibility
//! LP whose Farkas certificate doubles as a separating witness.

mod stabilizer;

pub use stabilizer::stabilizer_enumerate;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gauges;
use crate::linalg::{
    self, C64, ComplexMatrix, DensityMatrix, HermitianOperator, StateVector, outer,
};
use crate::solvers::simplex::{LinearProgram, LpStatus, simplex_solve};

#[allow(unused_imports)]
use num_traits::Float;

pub const MAX_MAGIC_QUBITS: usize = 3;

/// Which free-state set is in force.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoryDescriptor {
    /// Free pure states have at most `k` nonzero coefficients in the
    /// reference basis of dimension `d`.
    CoherenceK { d: usize, k: usize },
    /// Free pure states have Schmidt rank at most `k` across the
    /// `da x db` bipartition.
    SchmidtK { da: usize, db: usize, k: usize },
    /// Free pure states are product across at least one bipartition of the
    /// listed parties.
    GenuineMultipartite { dims: Vec<usize> },
    /// Free pure states are the stabilizer states on `n` qubits.
    MagicQubits { n: usize },
}

impl TheoryDescriptor {
    pub fn validate(&self) -> Result<()> {
        match self {
            TheoryDescriptor::CoherenceK { d, k } => {
                if *d == 0 || *k == 0 || k > d {
                    return Err(Error::KOutOfRange { k: *k, d: *d });
                }
            }
            TheoryDescriptor::SchmidtK { da, db, k } => {
                let r = (*da).min(*db);
                if *da == 0 || *db == 0 || *k == 0 || *k > r {
                    return Err(Error::KOutOfRange { k: *k, d: r });
                }
            }
            TheoryDescriptor::GenuineMultipartite { dims } => {
                let n = dims.len();
                if n < 2 || n > 12 || dims.iter().any(|&d| d == 0) {
                    return Err(Error::PartyCountOutOfRange { n, max: 12 });
                }
            }
            TheoryDescriptor::MagicQubits { n } => {
                if *n == 0 || *n > MAX_MAGIC_QUBITS {
                    return Err(Error::PartyCountOutOfRange { n: *n, max: MAX_MAGIC_QUBITS });
                }
            }
        }
        Ok(())
    }

    /// Total Hilbert-space dimension of states in this theory.
    pub fn dim(&self) -> usize {
        match self {
            TheoryDescriptor::CoherenceK { d, .. } => *d,
            TheoryDescriptor::SchmidtK { da, db, .. } => da * db,
            TheoryDescriptor::GenuineMultipartite { dims } => dims.iter().product(),
            TheoryDescriptor::MagicQubits { n } => 1 << n,
        }
    }

    /// Expected factor structure of inputs.
    pub fn factor_dims(&self) -> Vec<usize> {
        match self {
            TheoryDescriptor::CoherenceK { d, .. } => vec![*d],
            TheoryDescriptor::SchmidtK { da, db, .. } => vec![*da, *db],
            TheoryDescriptor::GenuineMultipartite { dims } => dims.clone(),
            TheoryDescriptor::MagicQubits { n } => vec![2; *n],
        }
    }

    /// Parses the theory grammar:
    /// `coherence:d=<int>,k=<int>` | `schmidt:dA=<int>,dB=<int>,k=<int>` |
    /// `genuine:dims=<d1>x<d2>x...` | `magic:n=<int>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (head, rest) = spec.split_once(':').ok_or(Error::TheoryParse("missing ':'"))?;
        let field = |name: &str| -> Result<usize> {
            for part in rest.split(',') {
                if let Some((key, val)) = part.split_once('=') {
                    if key.trim() == name {
                        return val
                            .trim()
                            .parse::<usize>()
                            .map_err(|_| Error::TheoryParse("bad integer"));
                    }
                }
            }
            Err(Error::TheoryParse("missing field"))
        };
        let desc = match head.trim() {
            "coherence" => TheoryDescriptor::CoherenceK { d: field("d")?, k: field("k")? },
            "schmidt" => TheoryDescriptor::SchmidtK {
                da: field("dA")?,
                db: field("dB")?,
                k: field("k")?,
            },
            "genuine" => {
                let dims_str =
                    rest.split_once('=').ok_or(Error::TheoryParse("missing dims="))?.1;
                let dims: Result<Vec<usize>> = dims_str
                    .split('x')
                    .map(|s| s.trim().parse::<usize>().map_err(|_| Error::TheoryParse("bad dims")))
                    .collect();
                TheoryDescriptor::GenuineMultipartite { dims: dims? }
            }
            "magic" => TheoryDescriptor::MagicQubits { n: field("n")? },
            _ => return Err(Error::TheoryParse("unknown theory")),
        };
        desc.validate()?;
        Ok(desc)
    }

    /// Canonical spec string in the same grammar `parse` accepts.
    pub fn spec_string(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        match self {
            TheoryDescriptor::CoherenceK { d, k } => {
                let _ = write!(s, "coherence:d={d},k={k}");
            }
            TheoryDescriptor::SchmidtK { da, db, k } => {
                let _ = write!(s, "schmidt:dA={da},dB={db},k={k}");
            }
            TheoryDescriptor::GenuineMultipartite { dims } => {
                let _ = write!(s, "genuine:dims=");
                for (i, d) in dims.iter().enumerate() {
                    if i > 0 {
                        let _ = write!(s, "x");
                    }
                    let _ = write!(s, "{d}");
                }
            }
            TheoryDescriptor::MagicQubits { n } => {
                let _ = write!(s, "magic:n={n}");
            }
        }
        s
    }
}

/// Vertex dictionary of a polytope free set.
#[derive(Clone, Debug)]
pub struct PolytopeFreeSet {
    vertices: Vec<StateVector>,
    /// `d x k` matrix whose unit columns are the free pure states.
    dictionary: ComplexMatrix,
    /// True when the vertex list describes the free set exactly.
    exact: bool,
}

impl PolytopeFreeSet {
    pub fn from_vertices(vertices: Vec<StateVector>, exact: bool) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Unsupported("empty vertex list"));
        }
        let d = vertices[0].dim();
        for v in &vertices {
            if v.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: v.dim() });
            }
        }
        let canon: Vec<StateVector> = vertices
            .iter()
            .map(|v| {
                let amp = stabilizer::canonical_phase(v.amplitudes());
                StateVector::new(amp, v.dims().to_vec()).expect("phase preserves norm")
            })
            .collect();
        let dictionary = ComplexMatrix::from_fn(d, canon.len(), |r, c| canon[c].amplitudes()[r]);
        Ok(Self { vertices: canon, dictionary, exact })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn vertices(&self) -> &[StateVector] {
        &self.vertices
    }

    #[inline]
    pub fn dictionary(&self) -> &ComplexMatrix {
        &self.dictionary
    }

    #[inline]
    pub fn exact(&self) -> bool {
        self.exact
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dictionary.rows()
    }

    /// Projector onto vertex `i`.
    pub fn vertex_projector(&self, i: usize) -> HermitianOperator {
        HermitianOperator::new(outer(self.vertices[i].amplitudes()))
            .expect("projector is Hermitian")
    }

    /// `sum_i <sigma_i, .>` columns in the orthonormal Hermitian basis.
    pub fn vertex_vectors(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| linalg::hermitian_to_vec(&self.vertex_projector(i))).collect()
    }
}

/// Vertex dictionary for the polytope theories; rejects continuum free sets
/// (coherence with k >= 2, Schmidt number, genuine multipartite).
pub fn build_polytope(descriptor: &TheoryDescriptor) -> Result<PolytopeFreeSet> {
    descriptor.validate()?;
    match descriptor {
        TheoryDescriptor::CoherenceK { d, k: 1 } => {
            let vertices = (0..*d).map(|i| StateVector::basis_state(*d, i)).collect();
            PolytopeFreeSet::from_vertices(vertices, true)
        }
        TheoryDescriptor::MagicQubits { n } => {
            let vertices = stabilizer_enumerate(*n)?;
            PolytopeFreeSet::from_vertices(vertices, true)
        }
        _ => Err(Error::ContinuumFreeSet),
    }
}

/// A descriptor together with the realized polytope, when the free set is one.
#[derive(Clone, Debug)]
pub struct Theory {
    descriptor: TheoryDescriptor,
    polytope: Option<PolytopeFreeSet>,
}

impl Theory {
    pub fn new(descriptor: TheoryDescriptor) -> Result<Self> {
        descriptor.validate()?;
        let polytope = match build_polytope(&descriptor) {
            Ok(p) => Some(p),
            Err(Error::ContinuumFreeSet) => None,
            Err(e) => return Err(e),
        };
        Ok(Self { descriptor, polytope })
    }

    pub fn parse(spec: &str) -> Result<Self> {
        Self::new(TheoryDescriptor::parse(spec)?)
    }

    /// Replaces the vertex dictionary (e.g. one loaded from a file).
    pub fn with_polytope(descriptor: TheoryDescriptor, polytope: PolytopeFreeSet) -> Result<Self> {
        descriptor.validate()?;
        if polytope.dim() != descriptor.dim() {
            return Err(Error::DimensionMismatch {
                expected: descriptor.dim(),
                got: polytope.dim(),
            });
        }
        Ok(Self { descriptor, polytope: Some(polytope) })
    }

    #[inline]
    pub fn descriptor(&self) -> &TheoryDescriptor {
        &self.descriptor
    }

    #[inline]
    pub fn polytope(&self) -> Option<&PolytopeFreeSet> {
        self.polytope.as_ref()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.descriptor.dim()
    }

    pub fn require_polytope(&self, what: &'static str) -> Result<&PolytopeFreeSet> {
        match &self.polytope {
            Some(p) => Ok(p),
            None => Err(Error::Unsupported(what)),
        }
    }
}

/// Outcome of a polytope membership query: a convex decomposition over the
/// vertices when inside, a separating witness when outside.
#[derive(Clone, Debug)]
pub struct MembershipCertificate {
    pub inside: bool,
    /// `x >= 0` with `sum_i x_i sigma_i = rho`, present iff inside.
    pub weights: Option<Vec<f64>>,
    /// `W` with `<W, sigma_i> >= 0` for all vertices and `<W, rho> < 0`,
    /// present iff outside.
    pub witness: Option<HermitianOperator>,
}

/// Decides membership of `rho` in the free polytope by LP feasibility.
///
/// On infeasibility the Farkas dual of the phase-1 simplex is returned as a
/// separating witness.
pub fn free_membership(rho: &DensityMatrix, theory: &Theory) -> Result<MembershipCertificate> {
    let polytope = theory.require_polytope("free_membership needs a polytope free set")?;
    if polytope.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: polytope.dim(), got: rho.dim() });
    }
    let cols = polytope.vertex_vectors();
    let b = linalg::hermitian_to_vec(rho.op());
    let d2 = b.len();
    let k = cols.len();

    let mut lp = LinearProgram::minimize(vec![0.0; k]);
    for row in 0..d2 {
        let a: Vec<f64> = (0..k).map(|j| cols[j][row]).collect();
        lp.eq_constraint(a, b[row]);
    }
    let sol = simplex_solve(&lp);
    match sol.status {
        LpStatus::Optimal => Ok(MembershipCertificate {
            inside: true,
            weights: Some(sol.x),
            witness: None,
        }),
        LpStatus::Infeasible => {
            let y = sol.farkas.ok_or(Error::SolverStalled { iterations: sol.iterations, residual: 0.0 })?;
            let mut w = linalg::vec_to_hermitian(&y[..d2], rho.dim())?;
            // Orient so that <W, rho> < 0 and <W, sigma_i> >= 0.
            let wr = w.inner(rho.op());
            if wr > 0.0 {
                w = HermitianOperator::new(w.matrix().scale(C64::new(-1.0, 0.0)))?;
            }
            let norm = w.matrix().frobenius_norm();
            if norm > 0.0 {
                w = HermitianOperator::new(w.matrix().scale(C64::new(1.0 / norm, 0.0)))?;
            }
            Ok(MembershipCertificate { inside: false, weights: None, witness: Some(w) })
        }
        LpStatus::Unbounded | LpStatus::Stalled => {
            Err(Error::SolverStalled { iterations: sol.iterations, residual: f64::NAN })
        }
    }
}

/// Pure-state freeness test for any supported theory.
pub fn pure_free_test(psi: &StateVector, theory: &Theory, tol: f64) -> Result<bool> {
    match theory.descriptor() {
        TheoryDescriptor::CoherenceK { d, k } => {
            if psi.dim() != *d {
                return Err(Error::DimensionMismatch { expected: *d, got: psi.dim() });
            }
            Ok(gauges::coherence_rank(psi.amplitudes(), tol) <= *k)
        }
        TheoryDescriptor::SchmidtK { da, db, k } => {
            let sd = linalg::schmidt_decompose(psi, *da, *db)?;
            Ok(sd.rank(tol) <= *k)
        }
        TheoryDescriptor::GenuineMultipartite { .. } => {
            let n = psi.dims().len();
            for side in gauges::bipartitions(n) {
                let grouped = gauges::regroup_bipartition(psi, &side)?;
                let sd =
                    linalg::schmidt_decompose(&grouped, grouped.dims()[0], grouped.dims()[1])?;
                if sd.rank(tol) <= 1 {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        TheoryDescriptor::MagicQubits { .. } => {
            let polytope = theory.require_polytope("magic free test needs the vertex list")?;
            for v in polytope.vertices() {
                if v.overlap(psi).norm_sqr() >= 1.0 - tol {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

#[cfg(test)]
mod tests;
