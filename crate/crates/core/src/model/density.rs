use std::sync::OnceLock;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::hermitian_eigen;
use crate::pauli::PauliString;

use super::ensemble::{Ensemble, GraphDiagonal, QuantumState};
use super::spectrum::MAX_DENSITY_QUBITS;
use super::state::{cz_ring_sign, hadamard_all, i_power, parity, StateVector, C64};

/// Dense density matrix in the computational basis.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    n: usize,
    rho: DMatrix<C64>,
    spectral: OnceLock<Ensemble>,
}

fn guard(n: usize) -> Result<()> {
    if n > MAX_DENSITY_QUBITS {
        Err(Error::ResourceGuard { what: "dense density matrix", n, max: MAX_DENSITY_QUBITS })
    } else {
        Ok(())
    }
}

impl DensityMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        guard(n)?;
        let d = 1 << n;
        Ok(DensityMatrix { n, rho: DMatrix::zeros(d, d), spectral: OnceLock::new() })
    }

    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        let mut rho = Self::zeros(psi.num_qubits())?;
        rho.add_pure(1.0, psi);
        Ok(rho)
    }

    /// Adds `w |psi><psi|`.
    pub fn add_pure(&mut self, w: f64, psi: &StateVector) {
        let a = psi.amplitudes();
        let d = a.len();
        for c in 0..d {
            let ac = a[c].conj() * w;
            for r in 0..d {
                self.rho[(r, c)] += a[r] * ac;
            }
        }
        self.spectral = OnceLock::new();
    }

    /// Convex combination `(1-lambda) self + lambda other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(DensityMatrix {
            n: self.n,
            rho: &self.rho * C64::new(1.0 - lambda, 0.0) + &other.rho * C64::new(lambda, 0.0),
            spectral: OnceLock::new(),
        })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.diagonal().iter().map(|z| z.re).sum()
    }

    /// Independent Z dephasing with flip probability `eps` on every qubit.
    pub fn dephase_z(&self, eps: f64) -> Self {
        let d = 1usize << self.n;
        let damp = 1.0 - 2.0 * eps;
        let rho = DMatrix::from_fn(d, d, |r, c| {
            self.rho[(r, c)] * damp.powi(((r ^ c) as u64).count_ones() as i32)
        });
        DensityMatrix { n: self.n, rho, spectral: OnceLock::new() }
    }

    /// `(rho + W rho W) / 2` for a Hermitian Pauli `W`.
    pub fn twirl(&self, w: &PauliString) -> Result<Self> {
        if w.num_qubits() != self.n {
            return Err(Error::SizeMismatch { left: w.num_qubits(), right: self.n });
        }
        if !w.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let d = 1usize << self.n;
        let x = w.x_mask() as usize;
        let z = w.z_mask();
        let ph = i_power(w.phase());
        // W|s> = ph (-1)^{z.s} |s^x>, so (W rho W)_{rc} = |ph|^2 (+-) rho_{r^x, c^x}
        let sgn = |s: usize| if parity(z & s as u64) { -1.0 } else { 1.0 };
        let scale = (ph * ph.conj()).re;
        let rho = DMatrix::from_fn(d, d, |r, c| {
            let image = self.rho[(r ^ x, c ^ x)] * (scale * sgn(r ^ x) * sgn(c ^ x));
            (self.rho[(r, c)] + image) * 0.5
        });
        Ok(DensityMatrix { n: self.n, rho, spectral: OnceLock::new() })
    }

    /// Trace distance `||rho - sigma||_1 / 2`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        let diff = &self.rho - &other.rho;
        let eig = hermitian_eigen(&diff)?;
        Ok(0.5 * eig.values.iter().map(|l| l.abs()).sum::<f64>())
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigen(&self.rho)?.values[0])
    }

    fn ensemble(&self) -> &Ensemble {
        self.spectral.get_or_init(|| {
            let eig = hermitian_eigen(&self.rho).expect("hermitian eigensolver converges");
            let members = eig
                .values
                .iter()
                .enumerate()
                .filter(|(_, l)| **l > 1e-14)
                .map(|(k, &l)| {
                    let v = eig.vectors.column(k).iter().copied().collect();
                    (l, StateVector::from_amplitudes(self.n, v).expect("sized"))
                })
                .collect();
            Ensemble::new(members).expect("positive trace")
        })
    }
}

impl QuantumState for DensityMatrix {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.num_qubits() != self.n {
            return Err(Error::SizeMismatch { left: p.num_qubits(), right: self.n });
        }
        if !p.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let x = p.x_mask() as usize;
        let z = p.z_mask();
        // Tr(P rho) = sum_t <t^x|P|t> rho_{t, t^x}
        let mut acc = C64::new(0.0, 0.0);
        for t in 0..1usize << self.n {
            let v = self.rho[(t, t ^ x)];
            if parity(z & t as u64) {
                acc -= v
            } else {
                acc += v
            }
        }
        let val = i_power(p.phase()) * acc;
        if val.im.abs() > 1e-10 * (1.0 + val.re.abs()) {
            return Err(Error::Numerical(format!("imaginary expectation {}", val.im)));
        }
        Ok(val.re)
    }

    fn graph_diagonal(&self) -> Result<GraphDiagonal> {
        let n = self.n;
        let d = 1usize << n;
        // A = M rho with M = H^n CZ_ring, then c_r = sum_t A_{rt} M_{rt}.
        let mut a = self.rho.clone();
        for c in 0..d {
            let mut col: Vec<C64> =
                (0..d).map(|r| a[(r, c)] * cz_ring_sign(r, n)).collect();
            hadamard_all(&mut col);
            for (r, v) in col.into_iter().enumerate() {
                a[(r, c)] = v;
            }
        }
        let norm = 1.0 / (d as f64).sqrt();
        let weights = (0..d)
            .map(|r| {
                (0..d)
                    .map(|t| {
                        let m = norm * cz_ring_sign(t, n) * if parity((r & t) as u64) { -1.0 } else { 1.0 };
                        (a[(r, t)] * m).re
                    })
                    .sum()
            })
            .collect();
        GraphDiagonal::new(n, weights)
    }

    fn sample_pure<R: Rng + ?Sized>(&self, rng: &mut R) -> StateVector {
        self.ensemble().sample_pure(rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::state::cluster_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pure_density_matches_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = StateVector::random(4, &mut rng).unwrap();
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        for s in ["XZIY", "ZZZZ", "IYXI"] {
            let p: PauliString = s.parse().unwrap();
            let a = rho.expectation(&p).unwrap();
            let b = psi.expectation(&p).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
        let ga = QuantumState::graph_diagonal(&rho).unwrap();
        let gb = QuantumState::graph_diagonal(&psi).unwrap();
        for (a, b) in ga.weights().iter().zip(gb.weights()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn twirl_kills_anticommuting_expectations() {
        let rho = DensityMatrix::from_pure(&cluster_state(4).unwrap()).unwrap();
        let w: PauliString = "ZIII".parse().unwrap();
        let t = rho.twirl(&w).unwrap();
        let k1: PauliString = "XZIZ".parse().unwrap();
        let k2: PauliString = "ZXZI".parse().unwrap();
        assert!(t.expectation(&k1).unwrap().abs() < 1e-12);
        assert!((t.expectation(&k2).unwrap() - 1.0).abs() < 1e-12);
        assert!((t.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_of_orthogonal_states() {
        let a = DensityMatrix::from_pure(&StateVector::basis(2, 0).unwrap()).unwrap();
        let b = DensityMatrix::from_pure(&StateVector::basis(2, 3).unwrap()).unwrap();
        assert!((a.trace_distance(&b).unwrap() - 1.0).abs() < 1e-12);
        assert!(a.trace_distance(&a).unwrap() < 1e-14);
    }
}
