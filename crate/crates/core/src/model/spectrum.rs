//! Exact diagonalization in the Hadamard-rotated basis, where the two sublattice
//! parities of the Z2 x Z2 symmetry become diagonal and split the Hilbert space.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::pauli::PauliString;

use super::density::DensityMatrix;
use super::ensemble::{Ensemble, GraphDiagonal, QuantumState};
use super::hamiltonian::{hamiltonian, ModelParams, PauliSum};
use super::state::{cz_ring_sign, guard_vector, hadamard_all, parity, StateVector, C64};

/// Largest register for thermal density matrices.
pub const MAX_DENSITY_QUBITS: usize = 12;

/// Absolute tolerance below which two levels count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Sector ground levels closer than this fraction of the in-sector gap count as a
/// quasi-degenerate (symmetry-broken) manifold.
pub const QUASI_DEGENERACY_RATIO: f64 = 0.1;

#[derive(Debug, Clone)]
struct RotatedTerm {
    coeff: f64,
    x: usize,
    z: u64,
}

#[derive(Debug, Clone)]
struct Sector {
    states: Vec<usize>,
    energies: Vec<f64>,
    /// Column `k` is the eigenvector of `energies[k]`, over `states`.
    vectors: DMatrix<f64>,
}

/// Full spectrum of a real Pauli-sum Hamiltonian, resolved by conserved sublattice parities.
#[derive(Debug, Clone)]
pub struct Spectrum {
    n: usize,
    masks: Vec<u64>,
    sectors: Vec<Sector>,
    local: Vec<u32>,
}

fn rotate_terms(h: &PauliSum) -> Result<Vec<RotatedTerm>> {
    h.terms()
        .map(|(c, p)| {
            let r = p.hadamard_conjugate();
            let coeff = match r.phase() {
                0 => *c,
                2 => -*c,
                _ => {
                    return Err(Error::Unsupported(
                        "dense solver needs real Hamiltonians (even Y count per term)".into(),
                    ))
                }
            };
            Ok(RotatedTerm { coeff, x: r.x_mask() as usize, z: r.z_mask() })
        })
        .collect()
}

impl Spectrum {
    pub fn of(h: &PauliSum) -> Result<Self> {
        let n = h.num_qubits();
        guard_vector(n)?;
        let terms = rotate_terms(h)?;
        let odd: u64 = (0..n).step_by(2).map(|i| 1u64 << i).sum();
        let even: u64 = (1..n).step_by(2).map(|i| 1u64 << i).sum();
        let masks: Vec<u64> = [odd, even]
            .into_iter()
            .filter(|&m| m != 0 && terms.iter().all(|t| !parity(t.x as u64 & m)))
            .collect();
        let dim = 1usize << n;
        let label = |s: usize| -> usize {
            masks.iter().enumerate().map(|(i, &m)| usize::from(parity(s as u64 & m)) << i).sum()
        };
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); 1 << masks.len()];
        let mut local = vec![0u32; dim];
        for s in 0..dim {
            let l = label(s);
            local[s] = members[l].len() as u32;
            members[l].push(s);
        }
        let sectors = members
            .into_par_iter()
            .map(|states| {
                let d = states.len();
                let mut m = DMatrix::<f64>::zeros(d, d);
                for (a, &s) in states.iter().enumerate() {
                    for t in &terms {
                        let b = local[s ^ t.x] as usize;
                        let v = if parity(t.z & s as u64) { -t.coeff } else { t.coeff };
                        m[(b, a)] += v;
                    }
                }
                let eig = symmetric_eigen(&m)?;
                Ok(Sector { states, energies: eig.values.iter().copied().collect(), vectors: eig.vectors })
            })
            .collect::<Result<_>>()?;
        Ok(Spectrum { n, masks, sectors, local })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_sectors(&self) -> usize {
        self.sectors.len()
    }

    pub fn sector_energies(&self, sector: usize) -> &[f64] {
        &self.sectors[sector].energies
    }

    /// All eigenvalues in ascending order.
    pub fn energies(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.sectors.iter().flat_map(|s| s.energies.clone()).collect();
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn ground_energy(&self) -> f64 {
        self.sectors
            .iter()
            .filter_map(|s| s.energies.first().copied())
            .fold(f64::INFINITY, f64::min)
    }

    fn sector_vector_rotated(&self, sector: usize, k: usize) -> Vec<C64> {
        let sec = &self.sectors[sector];
        let mut full = vec![C64::new(0.0, 0.0); 1 << self.n];
        for (a, &s) in sec.states.iter().enumerate() {
            full[s] = C64::new(sec.vectors[(a, k)], 0.0);
        }
        full
    }

    /// Eigenvector `k` of a sector, in the computational basis.
    pub fn eigenvector(&self, sector: usize, k: usize) -> StateVector {
        let mut v = self.sector_vector_rotated(sector, k);
        hadamard_all(&mut v);
        StateVector::from_amplitudes(self.n, v).expect("size checked at construction")
    }

    /// `e^{-tau H}|psi>` by spectral decomposition, normalized, together with
    /// `ln ||e^{-tau H}|psi>||^2`.
    pub fn evolve(&self, psi: &StateVector, tau: f64) -> Result<(StateVector, f64)> {
        if psi.num_qubits() != self.n {
            return Err(Error::SizeMismatch { left: psi.num_qubits(), right: self.n });
        }
        let e0 = self.ground_energy();
        let mut rotated = psi.amplitudes().to_vec();
        hadamard_all(&mut rotated);
        let mut out = vec![C64::new(0.0, 0.0); rotated.len()];
        for sec in &self.sectors {
            for (k, &e) in sec.energies.iter().enumerate() {
                let col = sec.vectors.column(k);
                let c: C64 = sec.states.iter().enumerate().map(|(a, &s)| rotated[s] * col[a]).sum();
                let c = c * (-tau * (e - e0)).exp();
                for (a, &s) in sec.states.iter().enumerate() {
                    out[s] += c * col[a];
                }
            }
        }
        hadamard_all(&mut out);
        let mut v = StateVector::from_amplitudes(self.n, out)?;
        let norm = v.normalize();
        if norm == 0.0 {
            return Err(Error::Numerical("imaginary-time evolution annihilated the state".into()));
        }
        Ok((v, 2.0 * norm.ln() - 2.0 * tau * e0))
    }

    /// Gibbs weights at inverse temperature `beta` (may be infinite).
    pub fn thermal(self: &Arc<Self>, beta: f64) -> Result<GibbsState> {
        if !(beta >= 0.0) {
            return Err(Error::param("inverse temperature must be non-negative"));
        }
        let e0 = self.ground_energy();
        let mut weights: Vec<Vec<f64>> = self
            .sectors
            .iter()
            .map(|s| {
                s.energies
                    .iter()
                    .map(|&e| {
                        if beta.is_infinite() {
                            f64::from(u8::from(e - e0 <= DEGENERACY_TOL))
                        } else {
                            (-beta * (e - e0)).exp()
                        }
                    })
                    .collect()
            })
            .collect();
        let z: f64 = weights.iter().flatten().sum();
        for w in weights.iter_mut().flatten() {
            *w /= z;
        }
        Ok(GibbsState { spectrum: Arc::clone(self), beta, weights })
    }

    /// Lowest state and the quasi-degenerate manifold of sector ground states around it.
    pub fn ground_state(&self) -> GroundState {
        let (s0, _) = self
            .sectors
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.energies.is_empty())
            .min_by(|a, b| a.1.energies[0].total_cmp(&b.1.energies[0]))
            .expect("non-empty spectrum");
        let e0 = self.sectors[s0].energies[0];
        let all = self.energies();
        let gap = all.get(1).map_or(f64::INFINITY, |e| e - e0);
        let in_sector_gap = self.sectors[s0].energies.get(1).map_or(0.0, |e| e - e0);
        let window = DEGENERACY_TOL.max(QUASI_DEGENERACY_RATIO * in_sector_gap);
        let mut manifold = vec![self.eigenvector(s0, 0)];
        for (i, sec) in self.sectors.iter().enumerate() {
            if i != s0 && sec.energies.first().is_some_and(|e| e - e0 < window) {
                manifold.push(self.eigenvector(i, 0));
            }
        }
        let degenerate = gap < DEGENERACY_TOL || manifold.len() > 1;
        GroundState { energy: e0, gap, degenerate, state: manifold[0].clone(), manifold }
    }
}

/// Lowest eigenstate. `manifold` lists the sector ground states that are degenerate or
/// quasi-degenerate with it; more than one entry signals symmetry breaking.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub gap: f64,
    pub degenerate: bool,
    pub state: StateVector,
    pub manifold: Vec<StateVector>,
}

impl GroundState {
    /// Equal mixture over the low-lying manifold: the zero-temperature limit of the
    /// Gibbs state when the splitting is below any accessible temperature.
    pub fn mixture(&self) -> Ensemble {
        Ensemble::uniform(self.manifold.clone()).expect("non-empty manifold")
    }
}

pub fn ground_state(params: &ModelParams) -> Result<GroundState> {
    Ok(Spectrum::of(&hamiltonian(params)?)?.ground_state())
}

/// Thermal state `e^{-beta H}/Z` held in the eigenbasis of `H`.
#[derive(Debug, Clone)]
pub struct GibbsState {
    spectrum: Arc<Spectrum>,
    beta: f64,
    weights: Vec<Vec<f64>>,
}

/// Weights below this are dropped when building vectors from the ensemble.
const NEGLIGIBLE_WEIGHT: f64 = 1e-18;

impl GibbsState {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    fn members(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.weights.iter().enumerate().flat_map(|(s, ws)| {
            ws.iter().enumerate().filter(|(_, w)| **w > NEGLIGIBLE_WEIGHT).map(move |(k, &w)| (s, k, w))
        })
    }

    /// Dense density matrix in the computational basis.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let n = self.spectrum.n;
        let mut rho = DensityMatrix::zeros(n)?;
        for (s, k, w) in self.members() {
            rho.add_pure(w, &self.spectrum.eigenvector(s, k));
        }
        Ok(rho)
    }
}

impl QuantumState for GibbsState {
    fn num_qubits(&self) -> usize {
        self.spectrum.n
    }

    fn expectation(&self, p: &PauliString) -> Result<f64> {
        let sp = &self.spectrum;
        if p.num_qubits() != sp.n {
            return Err(Error::SizeMismatch { left: p.num_qubits(), right: sp.n });
        }
        if !p.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let r = p.hadamard_conjugate();
        let x = r.x_mask() as usize;
        let z = r.z_mask();
        if r.phase() % 2 == 1 || sp.masks.iter().any(|&m| parity(x as u64 & m)) {
            return Ok(0.0);
        }
        let sign = if r.phase() == 2 { -1.0 } else { 1.0 };
        let mut total = 0.0;
        for (sec, ws) in sp.sectors.iter().zip(&self.weights) {
            let pairs: Vec<(usize, usize, f64)> = sec
                .states
                .iter()
                .enumerate()
                .map(|(a, &s)| {
                    let b = sp.local[s ^ x] as usize;
                    (a, b, if parity(z & s as u64) { -1.0 } else { 1.0 })
                })
                .collect();
            for (k, &w) in ws.iter().enumerate() {
                if w <= NEGLIGIBLE_WEIGHT {
                    continue;
                }
                let col = sec.vectors.column(k);
                let q: f64 = pairs.iter().map(|&(a, b, sg)| sg * col[a] * col[b]).sum();
                total += w * q;
            }
        }
        Ok(sign * total)
    }

    fn graph_diagonal(&self) -> Result<GraphDiagonal> {
        let sp = &self.spectrum;
        let n = sp.n;
        let members: Vec<(usize, usize, f64)> = self.members().collect();
        let acc = members
            .par_iter()
            .fold(
                || vec![0.0; 1 << n],
                |mut acc, &(s, k, w)| {
                    let mut v = sp.sector_vector_rotated(s, k);
                    hadamard_all(&mut v);
                    for (i, a) in v.iter_mut().enumerate() {
                        *a *= cz_ring_sign(i, n);
                    }
                    hadamard_all(&mut v);
                    for (c, a) in acc.iter_mut().zip(&v) {
                        *c += w * a.norm_sqr();
                    }
                    acc
                },
            )
            .reduce(
                || vec![0.0; 1 << n],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        GraphDiagonal::new(n, acc)
    }

    fn sample_pure<R: Rng + ?Sized>(&self, rng: &mut R) -> StateVector {
        let mut u: f64 = rng.gen();
        let mut last = (0, 0);
        for (s, k, w) in self.members() {
            last = (s, k);
            if u < w {
                return self.spectrum.eigenvector(s, k);
            }
            u -= w;
        }
        self.spectrum.eigenvector(last.0, last.1)
    }
}

/// Gibbs state of the model at temperature `t` (`t = inf` gives the maximally mixed state).
pub fn gibbs_density(params: &ModelParams, t: f64) -> Result<GibbsState> {
    if params.n > MAX_DENSITY_QUBITS {
        return Err(Error::ResourceGuard {
            what: "thermal density matrix",
            n: params.n,
            max: MAX_DENSITY_QUBITS,
        });
    }
    if !(t > 0.0) {
        return Err(Error::param("temperature must be positive"));
    }
    let spectrum = Arc::new(Spectrum::of(&hamiltonian(params)?)?);
    spectrum.thermal(1.0 / t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::state::cluster_state;
    use crate::pauli::{stabilizer, symmetry, GroupElement};

    #[test]
    fn cluster_model_ground_state() {
        for n in [4, 6, 8] {
            let p = ModelParams::cluster(n).unwrap();
            let gs = ground_state(&p).unwrap();
            assert!((gs.energy + n as f64).abs() < 1e-10, "E0 = -Delta n / 2");
            assert!(!gs.degenerate);
            let ov = gs.state.inner(&cluster_state(n).unwrap()).unwrap().norm();
            assert!((ov - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn sectors_split_the_model() {
        let p = ModelParams::new(6, 0.4, 0.3, 2.0).unwrap();
        let sp = Spectrum::of(&hamiltonian(&p).unwrap()).unwrap();
        assert_eq!(sp.num_sectors(), 4);
        assert_eq!(sp.energies().len(), 64);
    }

    #[test]
    fn gibbs_matches_stabilizer_average() {
        let p = ModelParams::cluster(6).unwrap();
        let rho = gibbs_density(&p, 0.7).unwrap();
        let t = (1.0f64 / 0.7).tanh();
        for j in 1..=6 {
            let ev = rho.expectation(&stabilizer(j, 6).unwrap()).unwrap();
            assert!((ev - t).abs() < 1e-12);
        }
        let uz = rho.expectation(&symmetry(GroupElement::Z, 6).unwrap()).unwrap();
        assert!((uz - t.powi(6)).abs() < 1e-12);
    }

    #[test]
    fn infinite_temperature_is_maximally_mixed() {
        let p = ModelParams::new(4, 0.6, 0.2, 2.0).unwrap();
        let rho = gibbs_density(&p, 1e6).unwrap().to_density().unwrap();
        let m = rho.matrix();
        for i in 0..16 {
            for j in 0..16 {
                let target = if i == j { 1.0 / 16.0 } else { 0.0 };
                assert!((m[(i, j)].re - target).abs() < 1e-4 && m[(i, j)].im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn guard_on_density() {
        let p = ModelParams::cluster(14).unwrap();
        assert!(matches!(gibbs_density(&p, 1.0), Err(Error::ResourceGuard { .. })));
    }
}
