//! Constructors for a few named states used across the crate.

use alloc::vec;

use crate::linalg::{C64, StateVector};

#[allow(unused_imports)]
use num_traits::Float;

/// `(|00> + |11>)/sqrt(2)`.
pub fn bell() -> StateVector {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(
        vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)],
        vec![2, 2],
    )
    .expect("normalized")
}

/// `(|0...0> + |1...1>)/sqrt(2)` on `n` qubits.
pub fn ghz(n: usize) -> StateVector {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let d = 1usize << n;
    let mut amp = vec![C64::new(0.0, 0.0); d];
    amp[0] = C64::new(s, 0.0);
    amp[d - 1] = C64::new(s, 0.0);
    StateVector::new(amp, vec![2; n]).expect("normalized")
}

/// The W state `(|10...0> + |01...0> + ... + |0...01>)/sqrt(n)`.
pub fn w(n: usize) -> StateVector {
    let d = 1usize << n;
    let s = 1.0 / (n as f64).sqrt();
    let mut amp = vec![C64::new(0.0, 0.0); d];
    for q in 0..n {
        amp[1usize << (n - 1 - q)] = C64::new(s, 0.0);
    }
    StateVector::new(amp, vec![2; n]).expect("normalized")
}

/// `(|0> + |1>)/sqrt(2)`.
pub fn plus() -> StateVector {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(vec![C64::new(s, 0.0), C64::new(s, 0.0)], vec![2]).expect("normalized")
}

/// The one-qubit T state, Bloch vector `(1, 1, 1)/sqrt(3)`: the canonical
/// magic state whose robustness values are known in closed form.
pub fn t_state() -> StateVector {
    let inv_sqrt3 = 1.0 / 3.0f64.sqrt();
    let a = ((1.0 + inv_sqrt3) / 2.0).sqrt();
    let b = ((1.0 - inv_sqrt3) / 2.0).sqrt();
    let phase = C64::new(core::f64::consts::FRAC_1_SQRT_2, core::f64::consts::FRAC_1_SQRT_2);
    StateVector::new(vec![C64::new(a, 0.0), phase * b], vec![2]).expect("normalized")
}

/// `|T> (x) |T>` on two qubits.
pub fn t_tensor_t() -> StateVector {
    let t = t_state();
    t.tensor(&t)
}
