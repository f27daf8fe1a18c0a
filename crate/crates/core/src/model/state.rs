use nalgebra::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::pauli::PauliString;

pub type C64 = Complex<f64>;

/// Largest register held as a dense state vector.
pub const MAX_VECTOR_QUBITS: usize = 14;

pub(crate) fn guard_vector(n: usize) -> Result<()> {
    if n > MAX_VECTOR_QUBITS {
        Err(Error::ResourceGuard { what: "dense state vector", n, max: MAX_VECTOR_QUBITS })
    } else {
        Ok(())
    }
}

pub(crate) fn i_power(k: u8) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

#[inline]
pub(crate) fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

/// `(-1)^{sum_j s_j s_{j+1}}` with cyclic neighbours: the sign of `prod CZ_{j,j+1}` on `|s>`.
pub fn cz_ring_sign(s: usize, n: usize) -> f64 {
    let s = s as u64;
    let rot = if n == 1 { s } else { ((s >> 1) | ((s & 1) << (n - 1))) & ((1u64 << n) - 1) };
    let pairs = if n == 2 { 0 } else { s & rot };
    if parity(pairs) {
        -1.0
    } else {
        1.0
    }
}

/// Normalized Walsh-Hadamard transform (Hadamard on every qubit), in place.
pub fn hadamard_all<T>(amps: &mut [T])
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let len = amps.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for i in block..block + h {
                let a = amps[i];
                let b = amps[i + h];
                amps[i] = a + b;
                amps[i + h] = a - b;
            }
        }
        h *= 2;
    }
    let scale = 1.0 / (len as f64).sqrt();
    for a in amps.iter_mut() {
        *a = *a * scale;
    }
}

/// Dense pure state on `n <= 14` qubits; basis index bit `j-1` is the value of site `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn from_amplitudes(n: usize, amps: Vec<C64>) -> Result<Self> {
        guard_vector(n)?;
        if amps.len() != 1 << n {
            return Err(Error::param(format!("expected {} amplitudes, got {}", 1 << n, amps.len())));
        }
        Ok(StateVector { n, amps })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        guard_vector(n)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Tensor product of single-qubit states, site 1 first.
    pub fn product(sites: &[[C64; 2]]) -> Result<Self> {
        let n = sites.len();
        guard_vector(n)?;
        let mut amps = vec![C64::new(1.0, 0.0); 1 << n];
        for (s, a) in amps.iter_mut().enumerate() {
            for (j, site) in sites.iter().enumerate() {
                *a *= site[(s >> j) & 1];
            }
        }
        Ok(StateVector { n, amps })
    }

    /// Haar-random state from normalized complex Gaussians.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        guard_vector(n)?;
        let amps = (0..1usize << n)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let mut v = StateVector { n, amps };
        v.normalize();
        Ok(v)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Rescales to unit norm and returns the old norm.
    pub fn normalize(&mut self) -> f64 {
        let norm = self.norm();
        if norm > 0.0 {
            let inv = 1.0 / norm;
            for a in &mut self.amps {
                *a *= inv;
            }
        }
        norm
    }

    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    fn check_op(&self, p: &PauliString) -> Result<()> {
        if p.num_qubits() != self.n {
            Err(Error::SizeMismatch { left: p.num_qubits(), right: self.n })
        } else {
            Ok(())
        }
    }

    /// Writes `P|psi>` into `out`.
    pub(crate) fn apply_into(&self, p: &PauliString, out: &mut [C64]) {
        let x = p.x_mask() as usize;
        let z = p.z_mask();
        let ph = i_power(p.phase());
        for (s, &a) in self.amps.iter().enumerate() {
            let v = ph * a;
            out[s ^ x] = if parity(z & s as u64) { -v } else { v };
        }
    }

    pub fn apply(&self, p: &PauliString) -> Result<StateVector> {
        self.check_op(p)?;
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        self.apply_into(p, &mut out);
        Ok(StateVector { n: self.n, amps: out })
    }

    /// `<psi|P|psi>` for a Hermitian `P`.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        self.check_op(p)?;
        if !p.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let x = p.x_mask() as usize;
        let z = p.z_mask();
        let mut acc = C64::new(0.0, 0.0);
        for (s, &a) in self.amps.iter().enumerate() {
            let t = self.amps[s ^ x].conj() * a;
            if parity(z & s as u64) {
                acc -= t
            } else {
                acc += t
            }
        }
        let val = i_power(p.phase()) * acc;
        if val.im.abs() > 1e-10 * (1.0 + val.re.abs()) {
            return Err(Error::Numerical(format!("imaginary expectation {}", val.im)));
        }
        Ok(val.re)
    }

    /// Projective measurement of a Hermitian Pauli; returns the outcome bit (0 for +1).
    pub fn measure<R: Rng + ?Sized>(&mut self, p: &PauliString, rng: &mut R) -> Result<u8> {
        let ev = self.expectation(p)?;
        let p_plus = (0.5 * (1.0 + ev)).clamp(0.0, 1.0);
        let bit = u8::from(rng.gen::<f64>() >= p_plus);
        let sign = if bit == 0 { 1.0 } else { -1.0 };
        let mut image = vec![C64::new(0.0, 0.0); self.amps.len()];
        self.apply_into(p, &mut image);
        for (a, b) in self.amps.iter_mut().zip(&image) {
            *a = (*a + b * sign) * 0.5;
        }
        let norm = self.normalize();
        if norm == 0.0 {
            return Err(Error::Numerical("measurement projected onto the zero vector".into()));
        }
        Ok(bit)
    }

    /// Amplitudes `<r|H^n CZ_ring|psi>`, whose squares are the graph-basis weights.
    pub fn graph_amplitudes(&self) -> Vec<C64> {
        let mut v: Vec<C64> = self
            .amps
            .iter()
            .enumerate()
            .map(|(s, &a)| a * cz_ring_sign(s, self.n))
            .collect();
        hadamard_all(&mut v);
        v
    }
}

/// The ring cluster state `prod_j CZ_{j,j+1} |+>^n`.
pub fn cluster_state(n: usize) -> Result<StateVector> {
    guard_vector(n)?;
    let amp = 1.0 / ((1usize << n) as f64).sqrt();
    let amps = (0..1usize << n).map(|s| C64::new(amp * cz_ring_sign(s, n), 0.0)).collect();
    Ok(StateVector { n, amps })
}

/// Measures the listed commuting Hermitian Paulis in order and returns the outcome bits.
pub fn sample_pauli_outcomes<R: Rng + ?Sized>(
    state: &StateVector,
    context: &[PauliString],
    rng: &mut R,
) -> Result<(Vec<u8>, StateVector)> {
    for (i, a) in context.iter().enumerate() {
        for b in &context[i + 1..] {
            if !a.commutes_with(b)? {
                return Err(Error::NonCommuting);
            }
        }
    }
    let mut post = state.clone();
    let bits = context.iter().map(|p| post.measure(p, rng)).collect::<Result<Vec<_>>>()?;
    Ok((bits, post))
}
