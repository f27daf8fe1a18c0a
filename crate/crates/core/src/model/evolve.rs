use crate::error::{Error, Result};
use crate::pauli::PauliString;

use super::hamiltonian::PauliSum;
use super::state::{StateVector, C64};

/// Default Trotter step for imaginary-time evolution.
pub const DEFAULT_TROTTER_STEP: f64 = 0.05;

/// Normalized `e^{-tau H}|psi>` and `ln ||e^{-tau H}|psi>||^2`.
#[derive(Debug, Clone)]
pub struct Evolved {
    pub state: StateVector,
    pub log_norm_sq: f64,
}

/// `psi <- e^{-a P} psi = cosh(a) psi - sinh(a) P psi` for a Hermitian Pauli `P`.
fn apply_term(psi: &mut StateVector, a: f64, p: &PauliString, scratch: &mut [C64]) {
    psi.apply_into(p, scratch);
    let (c, s) = (a.cosh(), a.sinh());
    for (v, w) in psi.amplitudes_mut().iter_mut().zip(scratch.iter()) {
        *v = *v * c - *w * s;
    }
}

fn apply_group(psi: &mut StateVector, group: &[(f64, PauliString)], dt: f64, scratch: &mut [C64]) {
    for (coeff, p) in group {
        if *coeff != 0.0 {
            apply_term(psi, dt * coeff, p, scratch);
        }
    }
}

/// Second-order Trotter evolution in imaginary time, grouped by commuting term sets.
///
/// Each step applies the groups as `A/2 B/2 ... Z ... B/2 A/2`. The state is renormalized
/// after every step and the discarded norm is accumulated in `log_norm_sq`.
pub fn imaginary_time_evolve(h: &PauliSum, psi: &StateVector, tau: f64, step: f64) -> Result<Evolved> {
    if h.num_qubits() != psi.num_qubits() {
        return Err(Error::SizeMismatch { left: h.num_qubits(), right: psi.num_qubits() });
    }
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::param("imaginary time must be finite and non-negative"));
    }
    if !(step > 0.0) {
        return Err(Error::param("Trotter step must be positive"));
    }
    let mut state = psi.clone();
    let mut log_norm_sq = 2.0 * state.normalize().ln();
    let steps = (tau / step).ceil() as usize;
    if steps == 0 {
        return Ok(Evolved { state, log_norm_sq });
    }
    let dt = tau / steps as f64;
    let groups = h.groups();
    let mut scratch = vec![C64::new(0.0, 0.0); psi.amplitudes().len()];
    for _ in 0..steps {
        let (last, rest) = groups.split_last().expect("non-empty Hamiltonian");
        for g in rest {
            apply_group(&mut state, g, 0.5 * dt, &mut scratch);
        }
        apply_group(&mut state, last, dt, &mut scratch);
        for g in rest.iter().rev() {
            apply_group(&mut state, g, 0.5 * dt, &mut scratch);
        }
        let norm = state.normalize();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Numerical("Trotter evolution lost the state".into()));
        }
        log_norm_sq += 2.0 * norm.ln();
    }
    Ok(Evolved { state, log_norm_sq })
}

/// `<psi|H|psi>` for a normalized state.
pub fn energy(h: &PauliSum, psi: &StateVector) -> Result<f64> {
    h.terms().map(|(c, p)| Ok(c * psi.expectation(p)?)).sum()
}
