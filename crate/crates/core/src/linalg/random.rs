//! Seeded Haar-distributed state sampling.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{C64, ComplexMatrix, DensityMatrix, HermitianOperator, StateVector};
use crate::error::{Error, Result};

#[allow(unused_imports)]
use num_traits::Float;

/// One standard complex Gaussian via Box-Muller.
fn complex_normal(rng: &mut impl Rng) -> C64 {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * core::f64::consts::PI * u2;
    C64::new(r * theta.cos(), r * theta.sin())
}

pub(crate) fn gaussian_amplitudes(rng: &mut impl Rng, len: usize) -> Vec<C64> {
    (0..len).map(|_| complex_normal(rng)).collect()
}

/// Haar-random pure state: normalized vector of i.i.d. complex Gaussians.
/// Deterministic for a fixed seed.
pub fn sample_pure(dims: &[usize], seed: u64) -> StateVector {
    let d: usize = dims.iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amp = gaussian_amplitudes(&mut rng, d);
    StateVector::normalized(amp, dims.to_vec()).expect("gaussian vector is nonzero")
}

/// Random mixed state of the given rank: the reduction of a Haar-random
/// purification on `d x rank`. Deterministic for a fixed seed.
pub fn sample_mixed(dims: &[usize], rank: usize, seed: u64) -> Result<DensityMatrix> {
    let d: usize = dims.iter().product();
    if rank == 0 || rank > d {
        return Err(Error::InvalidRank { rank, dim: d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amp = gaussian_amplitudes(&mut rng, d * rank);
    let norm = super::vec_norm(&amp);
    // rho = M M^dagger with the d x rank reshape of the purification.
    let m = ComplexMatrix::from_fn(d, rank, |i, j| amp[i * rank + j] / norm);
    let rho = m.mul(&m.adjoint());
    let op = HermitianOperator::new(rho)?;
    DensityMatrix::new(op.into_matrix(), dims.to_vec())
}
