use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{stabilizer, wrap_site, Pauli, PauliString};

/// Couplings of `H = -(Delta/2) sum_j (K_j + J_X X_j + J_ZZ Z_{j-1} Z_{j+1})` on a ring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub j_x: f64,
    pub j_zz: f64,
    pub delta: f64,
}

impl ModelParams {
    pub fn new(n: usize, j_x: f64, j_zz: f64, delta: f64) -> Result<Self> {
        let p = ModelParams { n, j_x, j_zz, delta };
        p.validate()?;
        Ok(p)
    }

    /// Pure cluster model with `Delta = 2`.
    pub fn cluster(n: usize) -> Result<Self> {
        Self::new(n, 0.0, 0.0, 2.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n % 2 == 1 {
            return Err(Error::InvalidQubitCount { n: self.n, min: 2 });
        }
        for (name, v) in [("J_X", self.j_x), ("J_ZZ", self.j_zz), ("Delta", self.delta)] {
            if !v.is_finite() {
                return Err(Error::param(format!("{name} must be finite")));
            }
        }
        if self.delta <= 0.0 {
            return Err(Error::param("Delta must be positive"));
        }
        Ok(())
    }
}

/// Real combination of Hermitian Pauli strings, split into mutually commuting groups.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n: usize,
    groups: Vec<Vec<(f64, PauliString)>>,
}

impl PauliSum {
    /// Groups must each consist of pairwise commuting Hermitian terms.
    pub fn from_groups(n: usize, groups: Vec<Vec<(f64, PauliString)>>) -> Result<Self> {
        for group in &groups {
            for (i, (_, a)) in group.iter().enumerate() {
                if a.num_qubits() != n {
                    return Err(Error::SizeMismatch { left: a.num_qubits(), right: n });
                }
                if !a.is_hermitian() {
                    return Err(Error::NotHermitian);
                }
                for (_, b) in &group[i + 1..] {
                    if !a.commutes_with(b)? {
                        return Err(Error::NonCommuting);
                    }
                }
            }
        }
        Ok(PauliSum { n, groups })
    }

    /// Greedy split into commuting groups, keeping term order within each group.
    pub fn from_terms(n: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let mut groups: Vec<Vec<(f64, PauliString)>> = Vec::new();
        for (c, p) in terms {
            if p.num_qubits() != n {
                return Err(Error::SizeMismatch { left: p.num_qubits(), right: n });
            }
            let slot = groups
                .iter()
                .position(|g| g.iter().all(|(_, q)| q.commutes_with(&p).unwrap_or(false)));
            match slot {
                Some(i) => groups[i].push((c, p)),
                None => groups.push(vec![(c, p)]),
            }
        }
        Self::from_groups(n, groups)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn groups(&self) -> &[Vec<(f64, PauliString)>] {
        &self.groups
    }

    pub fn terms(&self) -> impl Iterator<Item = &(f64, PauliString)> {
        self.groups.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The model Hamiltonian as `3n` terms grouped as (ZXZ, X, ZZ).
pub fn hamiltonian(params: &ModelParams) -> Result<PauliSum> {
    params.validate()?;
    let n = params.n;
    let half = -0.5 * params.delta;
    let mut cluster = Vec::with_capacity(n);
    let mut field = Vec::with_capacity(n);
    let mut ising = Vec::with_capacity(n);
    for j in 1..=n {
        cluster.push((half, stabilizer(j, n)?));
        field.push((half * params.j_x, PauliString::single(n, j, Pauli::X)?));
        let left = PauliString::single(n, wrap_site(j as i64 - 1, n), Pauli::Z)?;
        let right = PauliString::single(n, wrap_site(j as i64 + 1, n), Pauli::Z)?;
        ising.push((half * params.j_zz, &left * &right));
    }
    PauliSum::from_groups(n, vec![cluster, field, ising])
}
