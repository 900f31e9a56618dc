//! Named states used throughout the examples and test suites.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::hilbert::{outer, CMatrix, CVector, DensityMatrix, PureState, C64};

fn two_qubit(amps: [f64; 4]) -> PureState {
    PureState::from_real(vec![2, 2], &amps).expect("valid amplitudes")
}

pub fn phi_plus_state() -> PureState {
    two_qubit([FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2])
}

pub fn phi_minus_state() -> PureState {
    two_qubit([FRAC_1_SQRT_2, 0.0, 0.0, -FRAC_1_SQRT_2])
}

pub fn psi_plus_state() -> PureState {
    two_qubit([0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0])
}

pub fn psi_minus_state() -> PureState {
    two_qubit([0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0])
}

pub fn phi_plus() -> DensityMatrix {
    phi_plus_state().to_density()
}

/// `(1 - p) I/4 + p |Phi+><Phi+|`.
pub fn werner(p: f64) -> DensityMatrix {
    let m = CMatrix::identity(4, 4) * C64::from((1.0 - p) / 4.0) + phi_plus().matrix() * C64::from(p);
    DensityMatrix::new(vec![2, 2], m).expect("werner parameter in [-1/3, 1]")
}

/// Mixture of the four Bell projectors with weights on `(Phi+, Phi-, Psi+, Psi-)`.
pub fn bell_diagonal(weights: [f64; 4]) -> DensityMatrix {
    let bells = [phi_plus_state(), phi_minus_state(), psi_plus_state(), psi_minus_state()];
    let mut m = CMatrix::zeros(4, 4);
    for (w, b) in weights.iter().zip(&bells) {
        m += outer(b.amps()) * C64::from(*w);
    }
    DensityMatrix::new(vec![2, 2], m).expect("weights form a distribution")
}

fn qubit(theta: f64) -> CVector {
    CVector::from_vec(vec![C64::from((theta / 2.0).cos()), C64::from((theta / 2.0).sin())])
}

/// `|a> (x) |b>` with real Bloch angles, as a density matrix.
pub fn product_qubits(theta_a: f64, theta_b: f64) -> DensityMatrix {
    let v = qubit(theta_a).kronecker(&qubit(theta_b));
    PureState::new(vec![2, 2], v).expect("unit norm").to_density()
}

/// Classical coin: `(|00><00| + |11><11|)/2` on register R (first) and event E.
pub fn classical_coin() -> DensityMatrix {
    DensityMatrix::from_diagonal(vec![2, 2], &[0.5, 0.0, 0.0, 0.5]).expect("diagonal state")
}

/// Quantum coin: `1/2 |0><0|_R (x) |phi><phi|_E + 1/2 |1><1|_R (x) |psi><psi|_E`
/// with `|phi> = |+>` and `|psi> = |1>`.
pub fn quantum_coin() -> DensityMatrix {
    let plus = CVector::from_vec(vec![C64::from(FRAC_1_SQRT_2), C64::from(FRAC_1_SQRT_2)]);
    let one = CVector::from_vec(vec![C64::from(0.0), C64::from(1.0)]);
    register_event_state(&[(0.5, plus), (0.5, one)])
}

/// `sum_x p_x |x><x|_R (x) |e_x><e_x|_E` for unit event vectors `e_x`.
pub fn register_event_state(events: &[(f64, CVector)]) -> DensityMatrix {
    let n = events.len();
    let d = events[0].1.len();
    let mut m = CMatrix::zeros(n * d, n * d);
    for (x, (p, e)) in events.iter().enumerate() {
        let block = outer(e) * C64::from(*p);
        m.view_mut((x * d, x * d), (d, d)).copy_from(&block);
    }
    DensityMatrix::new(vec![n, d], m).expect("valid register-event state")
}

pub fn ghz3_state() -> PureState {
    let mut a = vec![0.0; 8];
    a[0] = FRAC_1_SQRT_2;
    a[7] = FRAC_1_SQRT_2;
    PureState::from_real(vec![2, 2, 2], &a).expect("valid amplitudes")
}

pub fn ghz3() -> DensityMatrix {
    ghz3_state().to_density()
}

/// `(|001> + |010> + |100>)/sqrt 3`.
pub fn w3_state() -> PureState {
    let mut a = vec![0.0; 8];
    a[1] = 1.0;
    a[2] = 1.0;
    a[4] = 1.0;
    PureState::from_real(vec![2, 2, 2], &a).expect("valid amplitudes")
}
