//! Breadth-first Clifford closure enumerating the pure stabilizer states.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{C64, StateVector, inner};

#[allow(unused_imports)]
use num_traits::Float;

/// Two states are identified when `|<a|b>| > 1 - DEDUP_TOL`.
const DEDUP_TOL: f64 = 1e-10;
const PHASE_CUTOFF: f64 = 1e-9;

/// Divides by the phase of the first amplitude with magnitude above the
/// cutoff, making that amplitude real positive.
pub fn canonical_phase(amp: &[C64]) -> Vec<C64> {
    for a in amp {
        let n = a.norm();
        if n > PHASE_CUTOFF {
            let phase = a / n;
            return amp.iter().map(|z| z / phase).collect();
        }
    }
    amp.to_vec()
}

fn apply_h(v: &[C64], n: usize, q: usize) -> Vec<C64> {
    let mask = 1usize << (n - 1 - q);
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut out = v.to_vec();
    for i in 0..v.len() {
        if i & mask == 0 {
            let j = i | mask;
            out[i] = (v[i] + v[j]) * s;
            out[j] = (v[i] - v[j]) * s;
        }
    }
    out
}

fn apply_s(v: &[C64], n: usize, q: usize) -> Vec<C64> {
    let mask = 1usize << (n - 1 - q);
    let phase = C64::new(0.0, 1.0);
    v.iter()
        .enumerate()
        .map(|(i, z)| if i & mask != 0 { z * phase } else { *z })
        .collect()
}

fn apply_cnot(v: &[C64], n: usize, control: usize, target: usize) -> Vec<C64> {
    let cmask = 1usize << (n - 1 - control);
    let tmask = 1usize << (n - 1 - target);
    (0..v.len()).map(|i| if i & cmask != 0 { v[i ^ tmask] } else { v[i] }).collect()
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Gate {
    H(usize),
    S(usize),
    Cnot(usize, usize),
}

pub(crate) fn generators(n: usize) -> Vec<Gate> {
    let mut gates = Vec::new();
    for q in 0..n {
        gates.push(Gate::H(q));
        gates.push(Gate::S(q));
    }
    for c in 0..n {
        for t in 0..n {
            if c != t {
                gates.push(Gate::Cnot(c, t));
            }
        }
    }
    gates
}

pub(crate) fn apply_gate(v: &[C64], n: usize, gate: Gate) -> Vec<C64> {
    match gate {
        Gate::H(q) => apply_h(v, n, q),
        Gate::S(q) => apply_s(v, n, q),
        Gate::Cnot(c, t) => apply_cnot(v, n, c, t),
    }
}

fn is_known(states: &[Vec<C64>], candidate: &[C64]) -> bool {
    states.iter().any(|s| inner(s, candidate).norm() > 1.0 - DEDUP_TOL)
}

/// All pure stabilizer states on `n` qubits (n = 1, 2, 3), as the fixpoint
/// of {H, S, CNOT} applied to `|0...0>`, deduplicated by canonical global
/// phase. Ordering is the deterministic breadth-first discovery order.
pub fn stabilizer_enumerate(n: usize) -> Result<Vec<StateVector>> {
    if n == 0 || n > super::MAX_MAGIC_QUBITS {
        return Err(Error::PartyCountOutOfRange { n, max: super::MAX_MAGIC_QUBITS });
    }
    let dim = 1usize << n;
    let mut zero = vec![C64::new(0.0, 0.0); dim];
    zero[0] = C64::new(1.0, 0.0);

    let gates = generators(n);
    let mut states: Vec<Vec<C64>> = vec![zero];
    let mut frontier = 0usize;
    while frontier < states.len() {
        let current = states[frontier].clone();
        frontier += 1;
        for &g in &gates {
            let next = canonical_phase(&apply_gate(&current, n, g));
            if !is_known(&states, &next) {
                states.push(next);
            }
        }
    }

    let dims = vec![2usize; n];
    states
        .into_iter()
        .map(|amp| StateVector::new(amp, dims.clone()))
        .collect::<Result<Vec<_>>>()
}
