use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::PauliString;

use super::state::StateVector;

/// Weights `c_r = <G_r|rho|G_r>` of a state in the graph basis, where
/// `K_j |G_r> = (-1)^{r_j} |G_r>`. Index bit `j-1` is `r_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphDiagonal {
    n: usize,
    weights: Vec<f64>,
}

impl GraphDiagonal {
    pub fn new(n: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != 1 << n {
            return Err(Error::param("graph diagonal has the wrong length"));
        }
        Ok(GraphDiagonal { n, weights })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Overlap with the cluster state, `c_0`.
    pub fn fidelity(&self) -> f64 {
        self.weights[0]
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Anything whose Pauli expectations and graph-basis weights can be evaluated exactly
/// and from which pure states can be drawn with the right statistics.
pub trait QuantumState: Sync {
    fn num_qubits(&self) -> usize;

    /// `Tr(rho P)` for a Hermitian Pauli string.
    fn expectation(&self, p: &PauliString) -> Result<f64>;

    fn graph_diagonal(&self) -> Result<GraphDiagonal>;

    /// A pure state drawn so that averaging over draws reproduces the density matrix.
    fn sample_pure<R: Rng + ?Sized>(&self, rng: &mut R) -> StateVector;
}

impl QuantumState for StateVector {
    fn num_qubits(&self) -> usize {
        StateVector::num_qubits(self)
    }

    fn expectation(&self, p: &PauliString) -> Result<f64> {
        StateVector::expectation(self, p)
    }

    fn graph_diagonal(&self) -> Result<GraphDiagonal> {
        let w = self.graph_amplitudes().iter().map(|a| a.norm_sqr()).collect();
        GraphDiagonal::new(StateVector::num_qubits(self), w)
    }

    fn sample_pure<R: Rng + ?Sized>(&self, _rng: &mut R) -> StateVector {
        self.clone()
    }
}

/// Finite mixture of pure states.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    n: usize,
    members: Vec<(f64, StateVector)>,
}

impl Ensemble {
    /// Weights are normalized to sum to one.
    pub fn new(members: Vec<(f64, StateVector)>) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::param("empty ensemble"))?;
        let n = first.1.num_qubits();
        let mut total = 0.0;
        for (w, v) in &members {
            if v.num_qubits() != n {
                return Err(Error::SizeMismatch { left: v.num_qubits(), right: n });
            }
            if !(*w >= 0.0) {
                return Err(Error::param("ensemble weights must be non-negative"));
            }
            total += w;
        }
        if total <= 0.0 {
            return Err(Error::param("ensemble weights sum to zero"));
        }
        let members = members.into_iter().map(|(w, v)| (w / total, v)).collect();
        Ok(Ensemble { n, members })
    }

    pub fn uniform(states: Vec<StateVector>) -> Result<Self> {
        Self::new(states.into_iter().map(|v| (1.0, v)).collect())
    }

    pub fn members(&self) -> &[(f64, StateVector)] {
        &self.members
    }
}

impl QuantumState for Ensemble {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn expectation(&self, p: &PauliString) -> Result<f64> {
        self.members.iter().map(|(w, v)| Ok(w * v.expectation(p)?)).sum()
    }

    fn graph_diagonal(&self) -> Result<GraphDiagonal> {
        let mut acc = vec![0.0; 1 << self.n];
        for (w, v) in &self.members {
            for (a, g) in acc.iter_mut().zip(v.graph_amplitudes()) {
                *a += w * g.norm_sqr();
            }
        }
        GraphDiagonal::new(self.n, acc)
    }

    fn sample_pure<R: Rng + ?Sized>(&self, rng: &mut R) -> StateVector {
        let mut u: f64 = rng.gen();
        for (w, v) in &self.members {
            if u < *w {
                return v.clone();
            }
            u -= w;
        }
        self.members.last().expect("non-empty").1.clone()
    }
}
