//! Dense complex linear algebra on small matrices (d up to ~64).
//!
//! Everything here is exact-arithmetic-free f64 work: a row-major complex
//! matrix type, a cyclic Jacobi eigensolver for Hermitian matrices, Schmidt
//! decomposition via the reduced state, partial transpose/trace, trace norm,
//! root fidelity and seeded Haar sampling.

mod eig;
mod random;

pub use eig::hermitian_eig;
pub(crate) use random::gaussian_amplitudes;
pub use random::{sample_mixed, sample_pure};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

#[allow(unused_imports)]
use num_traits::Float;

pub type C64 = num_complex::Complex<f64>;

/// Default tolerances for the structural invariants of the domain types.
pub mod tol {
    /// Hermiticity deviation, relative to `1 + max |entry|`.
    pub const HERMITIAN: f64 = 1e-10;
    /// Allowed deviation of `Tr rho` from one.
    pub const TRACE: f64 = 1e-9;
    /// Allowed negative eigenvalue mass on density matrices.
    pub const PSD: f64 = 1e-9;
    /// Allowed deviation of a state vector norm from one.
    pub const NORM: f64 = 1e-12;
    /// Schmidt coefficients below this are treated as exact zeros.
    pub const SCHMIDT_ZERO: f64 = 1e-12;
}

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self.at(r, c);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.at(k, c);
                }
            }
        }
        out
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(self.cols, v.len());
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for r in 0..self.rows {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..self.cols {
                acc += self.at(r, c) * v[c];
            }
            out[r] = acc;
        }
        out
    }

    /// `self^dagger * v`.
    pub fn adjoint_mul_vec(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(self.rows, v.len());
        let mut out = vec![C64::new(0.0, 0.0); self.cols];
        for r in 0..self.rows {
            let x = v[r];
            for c in 0..self.cols {
                out[c] += self.at(r, c).conj() * x;
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        debug_assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.at(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.at(r1, c1);
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        out.set(r1 * other.rows + r2, c1 * other.cols + c2, a * other.at(r2, c2));
                    }
                }
            }
        }
        out
    }

    /// Deviation from Hermiticity, `max |M - M^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        debug_assert_eq!(self.rows, self.cols);
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                let d = (self.at(r, c) - self.at(c, r).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Real part of `Tr(A^dagger B)`, the Hilbert-Schmidt inner product.
    pub fn inner_re(&self, other: &Self) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a.conj() * b).re).sum()
    }
}

/// Rank-one projector `|psi><psi|` from raw amplitudes.
pub fn outer(psi: &[C64]) -> ComplexMatrix {
    let d = psi.len();
    ComplexMatrix::from_fn(d, d, |r, c| psi[r] * psi[c].conj())
}

/// `<a|b>` with the physics convention (conjugate-linear in the first slot).
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian matrix with a validated symmetry defect.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    dim: usize,
    mat: ComplexMatrix,
}

impl HermitianOperator {
    /// Validates Hermiticity within `tol::HERMITIAN` and symmetrizes the
    /// residual so downstream spectral code sees an exactly Hermitian matrix.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::with_tol(mat, tol::HERMITIAN)
    }

    pub fn with_tol(mat: ComplexMatrix, tolerance: f64) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::DimensionMismatch { expected: mat.rows(), got: mat.cols() });
        }
        let defect = mat.hermiticity_defect();
        if defect > tolerance * (1.0 + mat.max_abs()) {
            return Err(Error::NotHermitian { deviation: defect });
        }
        let dim = mat.rows();
        let sym = ComplexMatrix::from_fn(dim, dim, |r, c| {
            let z = (mat.at(r, c) + mat.at(c, r).conj()) * 0.5;
            if r == c {
                C64::new(z.re, 0.0)
            } else {
                z
            }
        });
        Ok(Self { dim, mat: sym })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// `Tr(A B)` for Hermitian operands (a real number).
    pub fn inner(&self, other: &Self) -> f64 {
        self.mat.inner_re(&other.mat)
    }

    /// `<psi| A |psi>` for raw amplitudes.
    pub fn expectation(&self, psi: &[C64]) -> f64 {
        let av = self.mat.mul_vec(psi);
        inner(psi, &av).re
    }

    pub fn eig(&self) -> SpectralDecomposition {
        hermitian_eig(self)
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        *self.eig().eigenvalues.last().expect("nonempty spectrum")
    }

    /// Sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> f64 {
        self.eig().eigenvalues.iter().map(|l| l.abs()).sum()
    }

    /// PSD square root via the spectral decomposition, clipping eigenvalues
    /// in `[-tol::PSD, 0)` to zero. Eigenvalues below `1e-13 * lambda_max`
    /// are treated as exact zeros so roundoff in the kernel does not get
    /// amplified by the square root.
    pub fn sqrt_psd(&self) -> Result<ComplexMatrix> {
        let dec = self.eig();
        let min = *dec.eigenvalues.last().unwrap();
        if min < -tol::PSD * (1.0 + dec.eigenvalues[0].abs().max(1.0)) {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        let cutoff = dec.eigenvalues[0].max(0.0) * 1e-13;
        Ok(dec.apply(|l| if l > cutoff { l.sqrt() } else { 0.0 }))
    }
}

/// Spectral form `M = V diag(lambda) V^dagger` with `lambda` nonincreasing
/// and `V` holding orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let d = self.eigenvectors.rows();
        let mut out = ComplexMatrix::zeros(d, d);
        for (i, &l) in self.eigenvalues.iter().enumerate() {
            let fl = f(l);
            if fl == 0.0 {
                continue;
            }
            for r in 0..d {
                let vr = self.eigenvectors.at(r, i);
                for c in 0..d {
                    let v = out.at(r, c) + vr * self.eigenvectors.at(c, i).conj() * fl;
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|l| l)
    }
}

/// Unit-trace positive semidefinite operator with a tensor factorization.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let op = HermitianOperator::new(mat)?;
        let total: usize = dims.iter().product();
        if total != op.dim() || dims.is_empty() {
            return Err(Error::DimensionMismatch { expected: op.dim(), got: total });
        }
        let trace_error = (op.matrix().trace().re - 1.0).abs();
        let min_eigenvalue = op.min_eigenvalue();
        if trace_error > tol::TRACE || min_eigenvalue < -tol::PSD {
            return Err(Error::NotDensity { trace_error, min_eigenvalue });
        }
        Ok(Self { op, dims })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let mat = outer(psi.amplitudes());
        let op = HermitianOperator::new(mat).expect("projector is Hermitian");
        Self { op, dims: psi.dims().to_vec() }
    }

    /// Maximally mixed state on the given factors.
    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        let mat = ComplexMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0));
        let op = HermitianOperator::new(mat).expect("identity is Hermitian");
        Self { op, dims }
    }

    /// Convex combination `(1 - t) self + t other`.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        let mat = self
            .matrix()
            .scale(C64::new(1.0 - t, 0.0))
            .add(&other.matrix().scale(C64::new(t, 0.0)));
        DensityMatrix::new(mat, self.dims.clone())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn purity(&self) -> f64 {
        self.op.inner(&self.op)
    }

    /// Reinterprets the factor structure without touching the matrix.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != self.dim() || dims.is_empty() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: total });
        }
        Ok(Self { op: self.op.clone(), dims })
    }
}

/// Normalized pure state with a tensor factorization.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amp: Vec<C64>,
}

impl StateVector {
    pub fn new(amp: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != amp.len() || dims.is_empty() {
            return Err(Error::DimensionMismatch { expected: amp.len(), got: total });
        }
        let norm = vec_norm(&amp);
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { dims, amp })
    }

    /// Normalizes the amplitudes and constructs the state.
    pub fn normalized(mut amp: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let norm = vec_norm(&amp);
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        for a in &mut amp {
            *a /= norm;
        }
        Self::new(amp, dims)
    }

    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut amp = vec![C64::new(0.0, 0.0); dim];
        amp[index] = C64::new(1.0, 0.0);
        Self { dims: vec![dim], amp }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amp
    }

    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != self.amp.len() || dims.is_empty() {
            return Err(Error::DimensionMismatch { expected: self.amp.len(), got: total });
        }
        Ok(Self { dims, amp: self.amp.clone() })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut amp = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amp {
            for b in &other.amp {
                amp.push(a * b);
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, amp }
    }

    pub fn overlap(&self, other: &Self) -> C64 {
        inner(&self.amp, &other.amp)
    }
}

/// Nonincreasing Schmidt coefficients and the local bases realizing them,
/// zero-padded to `min(dA, dB)` terms.
#[derive(Clone, Debug)]
pub struct SchmidtData {
    pub coefficients: Vec<f64>,
    /// `dA x r` matrix of left basis columns.
    pub left: ComplexMatrix,
    /// `dB x r` matrix of right basis columns.
    pub right: ComplexMatrix,
}

impl SchmidtData {
    /// Number of coefficients above the zero cutoff.
    pub fn rank(&self, cutoff: f64) -> usize {
        self.coefficients.iter().filter(|&&l| l > cutoff).count()
    }
}

/// Schmidt decomposition of a bipartite pure state, computed from the
/// eigendecomposition of the reduced state on the A side.
pub fn schmidt_decompose(psi: &StateVector, da: usize, db: usize) -> Result<SchmidtData> {
    if da * db != psi.dim() {
        return Err(Error::DimensionMismatch { expected: psi.dim(), got: da * db });
    }
    let amp = psi.amplitudes();
    // dA x dB reshaping: psi = sum_ij M[i][j] |i>_A |j>_B.
    let m = ComplexMatrix::from_fn(da, db, |i, j| amp[i * db + j]);
    let madj = m.adjoint();
    let rho_a = HermitianOperator::new(m.mul(&madj))?;
    let dec = hermitian_eig(&rho_a);
    let r = da.min(db);

    let mut coefficients = Vec::with_capacity(r);
    let mut left = ComplexMatrix::zeros(da, r);
    let mut right = ComplexMatrix::zeros(db, r);
    for s in 0..r {
        let lam = dec.eigenvalues[s].max(0.0).sqrt();
        let lam = if lam < tol::SCHMIDT_ZERO { 0.0 } else { lam };
        coefficients.push(lam);
        let a: Vec<C64> = dec.eigenvectors.column(s);
        for (row, &v) in a.iter().enumerate() {
            left.set(row, s, v);
        }
        if lam > 0.0 {
            // M^dagger a = lam * conj(b)  =>  b = conj(M^dagger a) / lam.
            let ma = madj.mul_vec(&a);
            for (row, v) in ma.iter().enumerate() {
                right.set(row, s, v.conj() / lam);
            }
        }
    }
    // Orthonormal completion of the right basis for zero coefficients.
    let mut filled: Vec<Vec<C64>> = (0..r)
        .filter(|&s| coefficients[s] > 0.0)
        .map(|s| right.column(s))
        .collect();
    for s in 0..r {
        if coefficients[s] > 0.0 {
            continue;
        }
        let mut candidate = None;
        for basis_idx in 0..db {
            let mut v = vec![C64::new(0.0, 0.0); db];
            v[basis_idx] = C64::new(1.0, 0.0);
            for f in &filled {
                let c = inner(f, &v);
                for (vi, fi) in v.iter_mut().zip(f) {
                    *vi -= c * fi;
                }
            }
            let n = vec_norm(&v);
            if n > 0.5 {
                for vi in &mut v {
                    *vi /= n;
                }
                candidate = Some(v);
                break;
            }
        }
        let v = candidate.expect("orthonormal completion exists");
        for (row, vi) in v.iter().enumerate() {
            right.set(row, s, *vi);
        }
        filled.push(v);
    }
    Ok(SchmidtData { coefficients, left, right })
}

fn factor_indices(mut flat: usize, dims: &[usize], out: &mut [usize]) {
    for i in (0..dims.len()).rev() {
        out[i] = flat % dims[i];
        flat /= dims[i];
    }
}

fn flat_index(parts: &[usize], dims: &[usize]) -> usize {
    let mut flat = 0;
    for (p, d) in parts.iter().zip(dims) {
        flat = flat * d + p;
    }
    flat
}

/// Transpose of the given tensor factor; an involution preserving the trace.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<HermitianOperator> {
    partial_transpose_op(rho.op(), rho.dims(), subsystem)
}

/// Partial transpose of a general Hermitian operator with the given factor
/// structure (the output of a partial transpose need not be a state).
pub fn partial_transpose_op(
    op: &HermitianOperator,
    dims: &[usize],
    subsystem: usize,
) -> Result<HermitianOperator> {
    if subsystem >= dims.len() {
        return Err(Error::InvalidSubsystem { index: subsystem, count: dims.len() });
    }
    let d: usize = dims.iter().product();
    if d != op.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), got: d });
    }
    let n = dims.len();
    let mut ri = vec![0usize; n];
    let mut ci = vec![0usize; n];
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        factor_indices(r, dims, &mut ri);
        for c in 0..d {
            factor_indices(c, dims, &mut ci);
            let mut rt = ri.clone();
            let mut ct = ci.clone();
            rt[subsystem] = ci[subsystem];
            ct[subsystem] = ri[subsystem];
            out.set(flat_index(&rt, dims), flat_index(&ct, dims), op.matrix().at(r, c));
        }
    }
    HermitianOperator::new(out)
}

/// Traces out every factor not listed in `keep`; remaining factors keep their
/// original order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut keep_sorted: Vec<usize> = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.iter().any(|&i| i >= dims.len()) {
        return Err(Error::InvalidSubsystem {
            index: *keep_sorted.last().unwrap(),
            count: dims.len(),
        });
    }
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&i| dims[i]).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep_sorted.contains(i)).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced.iter().map(|&i| dims[i]).product();

    let n = dims.len();
    let mut out = ComplexMatrix::zeros(dk, dk);
    let kept_dims_ref = &kept_dims;
    let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
    let mut kr = vec![0usize; keep_sorted.len()];
    let mut kc = vec![0usize; keep_sorted.len()];
    let mut tr = vec![0usize; traced.len()];
    let mut full_r = vec![0usize; n];
    let mut full_c = vec![0usize; n];
    for rk in 0..dk {
        factor_indices(rk, kept_dims_ref, &mut kr);
        for ck in 0..dk {
            factor_indices(ck, kept_dims_ref, &mut kc);
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..dt {
                factor_indices(t, &traced_dims, &mut tr);
                for (slot, &factor) in keep_sorted.iter().enumerate() {
                    full_r[factor] = kr[slot];
                    full_c[factor] = kc[slot];
                }
                for (slot, &factor) in traced.iter().enumerate() {
                    full_r[factor] = tr[slot];
                    full_c[factor] = tr[slot];
                }
                acc += rho.matrix().at(flat_index(&full_r, dims), flat_index(&full_c, dims));
            }
            out.set(rk, ck, acc);
        }
    }
    DensityMatrix::new(out, kept_dims)
}

/// `Tr |M|`, the sum of absolute eigenvalues.
pub fn trace_norm(m: &HermitianOperator) -> f64 {
    m.trace_norm()
}

/// Coordinates of a Hermitian matrix in an orthonormal real basis:
/// the `d` diagonal entries, then `sqrt(2) Re M_ij` and `sqrt(2) Im M_ij`
/// for each `i < j`. Euclidean dot products of these vectors equal
/// `Tr(A B)` exactly.
pub fn hermitian_to_vec(op: &HermitianOperator) -> Vec<f64> {
    let d = op.dim();
    let m = op.matrix();
    let mut v = Vec::with_capacity(d * d);
    for i in 0..d {
        v.push(m.at(i, i).re);
    }
    let s = core::f64::consts::SQRT_2;
    for i in 0..d {
        for j in (i + 1)..d {
            let z = m.at(i, j);
            v.push(s * z.re);
            v.push(s * z.im);
        }
    }
    v
}

/// Inverse of [`hermitian_to_vec`].
pub fn vec_to_hermitian(v: &[f64], d: usize) -> Result<HermitianOperator> {
    if v.len() != d * d {
        return Err(Error::DimensionMismatch { expected: d * d, got: v.len() });
    }
    let mut m = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        m.set(i, i, C64::new(v[i], 0.0));
    }
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut idx = d;
    for i in 0..d {
        for j in (i + 1)..d {
            let z = C64::new(v[idx] * s, v[idx + 1] * s);
            idx += 2;
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    HermitianOperator::new(m)
}

/// Root fidelity `|| sqrt(rho) sqrt(sigma) ||_1`; the common fidelity
/// `F(rho, sigma)` is the square of this quantity.
pub fn root_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    let s = rho.op().sqrt_psd()?;
    let k = s.mul(sigma.matrix()).mul(&s);
    let k = HermitianOperator::new(k)?;
    let dec = k.eig();
    let cutoff = dec.eigenvalues[0].max(0.0) * 1e-13;
    Ok(dec.eigenvalues.iter().filter(|&&l| l > cutoff).map(|l| l.sqrt()).sum())
}

#[cfg(test)]
mod tests;
