//! Free-fermion solution of the `J_X` and `J_ZZ` axes.
//!
//! In the Hadamard-rotated frame the `J_X` axis is `-sum_j (X_{j-1} Z_j X_{j+1} + J Z_j)`
//! (the model at `Delta = 2`). A Jordan-Wigner map turns it into a quadratic form in
//! `c_j, c_j^dag`. The wrap-around term picks up the fermion parity `F = prod_j Z_j`, so
//! the form is solved with antiperiodic (`F = +1`) and periodic (`F = -1`) boundaries and
//! the two are recombined with parity projectors.
//! Expectations of Pauli strings are then determinants of submatrices of
//! `G_ij = <Q_i P_j>` with `P = c^dag + c`, `Q = c^dag - c`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{min_over_pairs, quantum_win_prob, ExpectationSet, PairMinimum};
use crate::linalg;
use crate::pauli::{symmetry, twisted_sop, GroupElement, PauliString};

/// `H = sum c^dag A c + (1/2) sum (c^dag B c^dag - c B c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    pub n: usize,
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
}

fn check_n(n: usize) -> Result<()> {
    if n < 6 || n % 2 == 1 {
        Err(Error::InvalidQubitCount { n, min: 6 })
    } else {
        Ok(())
    }
}

/// Fermion boundary condition on the wrap-around bonds.
///
/// The exact wrap term is `-F Q_n P_2` (and likewise for `n-1, 1`) with `F` the total
/// fermion parity, so `Antiperiodic` is exact in the even sector, which holds the
/// ground state, and `Periodic` is exact in the odd sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Boundary {
    Periodic,
    Antiperiodic,
}

/// Quadratic form of the rotated `J_X` axis.
pub fn build_quadratic(j_x: f64, n: usize, boundary: Boundary) -> Result<QuadraticForm> {
    check_n(n)?;
    let mut a = DMatrix::zeros(n, n);
    let mut b = DMatrix::zeros(n, n);
    for j in 0..n {
        let (l, r) = ((j + n - 1) % n, (j + 1) % n);
        let s = if boundary == Boundary::Antiperiodic && r < l { -1.0 } else { 1.0 };
        a[(j, j)] += 2.0 * j_x;
        a[(l, r)] -= s;
        a[(r, l)] -= s;
        b[(l, r)] -= s;
        b[(r, l)] += s;
    }
    Ok(QuadraticForm { n, a, b })
}

/// Normal modes: `(A + B) phi_k = Lambda_k psi_k` and `(A - B) psi_k = Lambda_k phi_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBasis {
    pub lambda: DVector<f64>,
    pub phi: DMatrix<f64>,
    pub psi: DMatrix<f64>,
}

impl ModeBasis {
    /// Largest residual of the two coupled eigen-equations over all modes.
    pub fn residual(&self, q: &QuadraticForm) -> f64 {
        let plus = &q.a + &q.b;
        let minus = &q.a - &q.b;
        let mut worst: f64 = 0.0;
        for k in 0..self.lambda.len() {
            let l = self.lambda[k];
            let r1 = &plus * self.phi.column(k) - self.psi.column(k) * l;
            let r2 = &minus * self.psi.column(k) - self.phi.column(k) * l;
            worst = worst.max(r1.amax()).max(r2.amax());
        }
        worst
    }

    /// Largest deviation of `phi^T phi` and `psi^T psi` from the identity.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.phi.ncols();
        let id = DMatrix::<f64>::identity(n, n);
        let e1 = (self.phi.transpose() * &self.phi - &id).amax();
        let e2 = (self.psi.transpose() * &self.psi - &id).amax();
        e1.max(e2)
    }
}

const ZERO_MODE_TOL: f64 = 1e-10;

/// `Lambda = 2 sqrt(1 + J^2 - 2 J cos(2 q))` for a mode of momentum `q`.
pub fn mode_energy(j_x: f64, q: f64) -> f64 {
    2.0 * (1.0 + j_x * j_x - 2.0 * j_x * (2.0 * q).cos()).max(0.0).sqrt()
}

/// Plane-wave modes. With periodic bonds the momenta are `q = 2 pi k / n`, using cosines
/// for `k < n/2`, the alternating mode at `k = n/2`, sines above it and the constant mode
/// at `k = n`; antiperiodic bonds use `q = (2m + 1) pi / n` with a cosine and a sine each.
///
/// `psi_k = (A + B) phi_k / Lambda_k`; modes with `Lambda_k = 0` take their `psi` from the
/// left null space of `A + B`.
pub fn analytic_modes(j_x: f64, n: usize, boundary: Boundary) -> Result<ModeBasis> {
    let q = build_quadratic(j_x, n, boundary)?;
    let nf = n as f64;
    let (s2, s1) = ((2.0 / nf).sqrt(), (1.0 / nf).sqrt());
    let pi = std::f64::consts::PI;
    let mut momenta = vec![0.0; n];
    let phi = match boundary {
        Boundary::Periodic => DMatrix::from_fn(n, n, |row, col| {
            let (j, k) = ((row + 1) as f64, col + 1);
            let q = 2.0 * pi * k as f64 / nf;
            match k {
                k if k < n / 2 => s2 * (q * j).cos(),
                k if k == n / 2 => s1 * if (row + 1) % 2 == 0 { 1.0 } else { -1.0 },
                k if k < n => s2 * (q * j).sin(),
                _ => s1,
            }
        }),
        Boundary::Antiperiodic => DMatrix::from_fn(n, n, |row, col| {
            let j = (row + 1) as f64;
            let q = (2 * (col % (n / 2)) + 1) as f64 * pi / nf;
            if col < n / 2 {
                s2 * (q * j).cos()
            } else {
                s2 * (q * j).sin()
            }
        }),
    };
    for (col, m) in momenta.iter_mut().enumerate() {
        *m = match boundary {
            Boundary::Periodic => 2.0 * pi * (col + 1) as f64 / nf,
            Boundary::Antiperiodic => (2 * (col % (n / 2)) + 1) as f64 * pi / nf,
        };
    }
    let lambda = DVector::from_fn(n, |k, _| mode_energy(j_x, momenta[k]));
    let plus = &q.a + &q.b;
    let mut psi = DMatrix::zeros(n, n);
    let mut zero_modes = Vec::new();
    for k in 0..n {
        if lambda[k] < ZERO_MODE_TOL {
            zero_modes.push(k);
        } else {
            psi.set_column(k, &(&plus * phi.column(k) / lambda[k]));
        }
    }
    if !zero_modes.is_empty() {
        let null = left_null_space(&plus)?;
        if null.ncols() != zero_modes.len() {
            return Err(Error::Numerical(format!(
                "{} zero modes but a {}-dimensional null space",
                zero_modes.len(),
                null.ncols()
            )));
        }
        for (col, &k) in zero_modes.iter().enumerate() {
            psi.set_column(k, &null.column(col));
        }
    }
    Ok(ModeBasis { lambda, phi, psi })
}

fn left_null_space(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let d = linalg::svd(m)?;
    let cols: Vec<_> = (0..m.ncols())
        .filter(|&k| d.s[k] < ZERO_MODE_TOL)
        .map(|k| d.u.column(k).into_owned())
        .collect();
    Ok(if cols.is_empty() { DMatrix::zeros(m.nrows(), 0) } else { DMatrix::from_columns(&cols) })
}

/// Modes from the singular value decomposition `A + B = psi diag(Lambda) phi^T`.
pub fn svd_modes(q: &QuadraticForm) -> Result<ModeBasis> {
    let d = linalg::svd(&(&q.a + &q.b))?;
    Ok(ModeBasis { lambda: d.s, phi: d.v, psi: d.u })
}

/// `G_ij = <Q_i P_j> = -sum_k tanh(beta Lambda_k / 2) psi_ik phi_jk`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub g: DMatrix<f64>,
}

/// `beta` is measured in units where the rotated Hamiltonian has unit couplings;
/// for a model with scale `Delta` pass `beta Delta / 2`. `beta = inf` gives the ground state.
pub fn correlation_matrix(modes: &ModeBasis, beta: f64) -> Result<CorrelationMatrix> {
    if !(beta >= 0.0) {
        return Err(Error::param(format!("beta must be non-negative, got {beta}")));
    }
    let occ = modes.lambda.map(|l| {
        if beta.is_infinite() {
            if l > ZERO_MODE_TOL { 1.0 } else { 0.0 }
        } else {
            (0.5 * beta * l).tanh()
        }
    });
    let scaled = DMatrix::from_fn(modes.psi.nrows(), modes.psi.ncols(), |i, k| modes.psi[(i, k)] * occ[k]);
    Ok(CorrelationMatrix { g: -(scaled * modes.phi.transpose()) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Majorana {
    Q,
    P,
}

/// `i^phase` times an ordered product of `P_j`/`Q_j` (1-indexed sites).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PQProduct {
    pub phase: u8,
    pub ops: Vec<(usize, Majorana)>,
}

impl PQProduct {
    pub fn count(&self, kind: Majorana) -> usize {
        self.ops.iter().filter(|(_, k)| *k == kind).count()
    }

    pub fn sites(&self, kind: Majorana) -> Vec<usize> {
        self.ops.iter().filter(|(_, k)| *k == kind).map(|(s, _)| *s).collect()
    }

    /// Swaps the adjacent factors at `i, i+1`, which anticommute unless equal.
    pub fn swap(&mut self, i: usize) {
        if self.ops[i] != self.ops[i + 1] {
            self.phase = (self.phase + 2) % 4;
        }
        self.ops.swap(i, i + 1);
    }

    /// Sorts by site with `Q_j` before `P_j` and cancels squares (`P^2 = 1`, `Q^2 = -1`).
    pub fn canonical(&self) -> PQProduct {
        let key = |&(s, k): &(usize, Majorana)| 2 * s + (k == Majorana::P) as usize;
        let max_key = self.ops.iter().map(key).max().unwrap_or(0);
        // sign of the stable sort = parity of strict inversions
        let mut seen = vec![0usize; max_key + 2];
        let mut inversions = 0usize;
        for op in &self.ops {
            let k = key(op);
            inversions += seen[k + 1..].iter().sum::<usize>();
            seen[k] += 1;
        }
        let mut phase = (self.phase as usize + 2 * (inversions % 2)) % 4;
        let mut ops = Vec::new();
        for (k, &count) in seen.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let op = (k / 2, if k % 2 == 1 { Majorana::P } else { Majorana::Q });
            if op.1 == Majorana::Q {
                phase = (phase + 2 * ((count / 2) % 2)) % 4;
            }
            if count % 2 == 1 {
                ops.push(op);
            }
        }
        PQProduct { phase: phase as u8, ops }
    }
}

/// Jordan-Wigner image of a Pauli string (already in the rotated frame), in canonical order.
///
/// `Z_j = P_j Q_j` and `X_j = (prod_{k<j} Z_k) P_j`; sites are multiplied in increasing
/// order with `X` before `Z` on each site, matching the string's own convention.
pub fn jw_map(p: &PauliString) -> PQProduct {
    let n = p.num_qubits();
    let mut ops = Vec::new();
    for j in 1..=n {
        if p.x_at(j) {
            for k in 1..j {
                ops.push((k, Majorana::P));
                ops.push((k, Majorana::Q));
            }
            ops.push((j, Majorana::P));
        }
        if p.z_at(j) {
            ops.push((j, Majorana::P));
            ops.push((j, Majorana::Q));
        }
    }
    PQProduct { phase: p.phase(), ops }.canonical()
}

fn permutation_parity(targets: &[usize]) -> usize {
    let mut inv = 0;
    for i in 0..targets.len() {
        for j in i + 1..targets.len() {
            if targets[i] > targets[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

/// The ordered Q rows, P columns and sign for which `<pq> = sign * det G[rows, cols]`.
/// `None` when the P and Q counts differ, where the expectation vanishes.
pub fn wick_submatrix(pq: &PQProduct) -> Result<Option<(f64, Vec<usize>, Vec<usize>)>> {
    let c = pq.canonical();
    let (rows, cols) = (c.sites(Majorana::Q), c.sites(Majorana::P));
    if rows.len() != cols.len() {
        return Ok(None);
    }
    if c.phase % 2 == 1 {
        return Err(Error::Numerical("balanced P/Q product with an imaginary coefficient".into()));
    }
    // move to Q_{r1} P_{c1} Q_{r2} P_{c2} ..., where the expectation is det G[rows, cols]
    let (mut nq, mut np) = (0, 0);
    let targets: Vec<usize> = c
        .ops
        .iter()
        .map(|(_, k)| match k {
            Majorana::Q => {
                nq += 1;
                2 * (nq - 1)
            }
            Majorana::P => {
                np += 1;
                2 * np - 1
            }
        })
        .collect();
    let mut sign = if c.phase == 2 { -1.0 } else { 1.0 };
    if permutation_parity(&targets) == 1 {
        sign = -sign;
    }
    Ok(Some((sign, rows, cols)))
}

/// `<pq>` by Wick's theorem on the correlation matrix.
pub fn wick_expectation(pq: &PQProduct, g: &CorrelationMatrix) -> Result<f64> {
    let Some((sign, rows, cols)) = wick_submatrix(pq)? else {
        return Ok(0.0);
    };
    if let Some(&s) = rows.iter().chain(&cols).find(|&&s| s == 0 || s > g.g.nrows()) {
        return Err(Error::SiteOutOfRange { site: s, n: g.g.nrows() });
    }
    if rows.is_empty() {
        return Ok(sign);
    }
    let sub = DMatrix::from_fn(rows.len(), cols.len(), |i, j| g.g[(rows[i] - 1, cols[j] - 1)]);
    Ok(sign * sub.determinant())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    ZZ,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "X",
            Axis::ZZ => "ZZ",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "X" | "JX" | "J_X" => Ok(Axis::X),
            "ZZ" | "JZZ" | "J_ZZ" => Ok(Axis::ZZ),
            _ => Err(Error::param(format!("unknown axis {s:?}, expected X or ZZ"))),
        }
    }
}

/// `Tr(F e^{-beta H} O) / Tr(e^{-beta H})` for the parity `F = prod_j Z_j` of the rotated frame.
///
/// With `G^F` the contraction matrix of `F e^{-beta H}` (where `tanh` becomes `coth`),
/// `(G^F)^{-1} = G^T` and `<F> = det G`, so Jacobi's complementary-minor identity gives
/// `sign (-1)^{sum I + sum J} det G[I^c, J^c]` for the rows `I` and columns `J` of `pq`.
pub fn parity_weighted_expectation(pq: &PQProduct, g: &CorrelationMatrix) -> Result<f64> {
    let Some((sign, rows, cols)) = wick_submatrix(pq)? else {
        return Ok(0.0);
    };
    let n = g.g.nrows();
    let complement = |used: &[usize]| -> Vec<usize> { (1..=n).filter(|s| !used.contains(s)).collect() };
    let (rc, cc) = (complement(&rows), complement(&cols));
    let flip = (rows.iter().sum::<usize>() + cols.iter().sum::<usize>()) % 2 == 1;
    let minor = if rc.is_empty() {
        1.0
    } else {
        DMatrix::from_fn(rc.len(), cc.len(), |i, j| g.g[(rc[i] - 1, cc[j] - 1)]).determinant()
    };
    Ok(if flip { -sign * minor } else { sign * minor })
}

/// How the periodic spin chain maps onto fermions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Projection {
    /// Both parity sectors with their own boundary condition; exact for the spin chain.
    Exact,
    /// A single quadratic form on all states, dropping the parity-dependent wrap sign.
    Sector(Boundary),
}

/// Imaginary-time scale standing in for `beta = inf` in the rotated units.
const GROUND_BETA: f64 = 1e4;

fn log_two_cosh(y: f64) -> f64 {
    let a = y.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// Per-sector data at one temperature.
#[derive(Debug, Clone)]
pub struct SectorCorrelations {
    pub boundary: Boundary,
    pub g: CorrelationMatrix,
    /// `ln Tr e^{-beta H_s}` up to a constant shared by both sectors.
    pub log_z: f64,
    /// `<F>_s = det G`.
    pub parity: f64,
}

/// Thermal contraction data of the periodic chain at one temperature.
#[derive(Debug, Clone)]
pub struct ThermalCorrelations {
    pub projection: Projection,
    pub even: SectorCorrelations,
    pub odd: SectorCorrelations,
}

impl ThermalCorrelations {
    pub fn sector(&self, boundary: Boundary) -> &SectorCorrelations {
        match boundary {
            Boundary::Antiperiodic => &self.even,
            Boundary::Periodic => &self.odd,
        }
    }

    /// `<pq>` in the spin-chain Gibbs state.
    ///
    /// With projectors `(1 + s F)/2` onto the sector each boundary condition is exact in,
    /// `Tr(e^{-beta H} O) = sum_s Z_s [<O>_s + s Tr_s(F O)] / 2`.
    pub fn expectation(&self, pq: &PQProduct) -> Result<f64> {
        match self.projection {
            Projection::Sector(b) => wick_expectation(pq, &self.sector(b).g),
            Projection::Exact => {
                let top = self.even.log_z.max(self.odd.log_z);
                let mut num = 0.0;
                let mut den = 0.0;
                for (sec, s) in [(&self.even, 1.0), (&self.odd, -1.0)] {
                    let w = (sec.log_z - top).exp();
                    num += w * (wick_expectation(pq, &sec.g)? + s * parity_weighted_expectation(pq, &sec.g)?);
                    den += w * (1.0 + s * sec.parity);
                }
                if !(den > 0.0) {
                    return Err(Error::Numerical(format!("parity-projected partition function {den}")));
                }
                Ok(num / den)
            }
        }
    }
}

/// Free-fermion solver for one point `J` on an axis. Modes are computed once per boundary
/// condition and shared across temperatures.
#[derive(Debug, Clone)]
pub struct AxisSolver {
    pub axis: Axis,
    pub j: f64,
    pub n: usize,
    pub delta: f64,
    pub projection: Projection,
    even: ModeBasis,
    odd: ModeBasis,
}

impl AxisSolver {
    /// Exact solver. The `J_ZZ` axis reuses the `J_X` solution at the same coupling.
    pub fn new(axis: Axis, j: f64, n: usize, delta: f64) -> Result<Self> {
        Self::with_projection(axis, j, n, delta, Projection::Exact)
    }

    pub fn with_projection(axis: Axis, j: f64, n: usize, delta: f64, projection: Projection) -> Result<Self> {
        if !j.is_finite() {
            return Err(Error::param("coupling must be finite"));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::param(format!("delta must be positive, got {delta}")));
        }
        Ok(AxisSolver {
            axis,
            j,
            n,
            delta,
            projection,
            even: analytic_modes(j, n, Boundary::Antiperiodic)?,
            odd: analytic_modes(j, n, Boundary::Periodic)?,
        })
    }

    pub fn modes(&self, boundary: Boundary) -> &ModeBasis {
        match boundary {
            Boundary::Antiperiodic => &self.even,
            Boundary::Periodic => &self.odd,
        }
    }

    /// Contraction data at temperature `t`; `t = 0` uses a large finite `beta`.
    pub fn correlation(&self, t: f64) -> Result<ThermalCorrelations> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::param(format!("temperature must be finite and non-negative, got {t}")));
        }
        let beta = if t == 0.0 { GROUND_BETA } else { 0.5 * self.delta / t };
        let sector = |boundary: Boundary| -> Result<SectorCorrelations> {
            let modes = self.modes(boundary);
            let g = correlation_matrix(modes, beta)?;
            let log_z = modes.lambda.iter().map(|l| log_two_cosh(0.5 * beta * l)).sum();
            let parity = g.g.determinant();
            Ok(SectorCorrelations { boundary, g, log_z, parity })
        };
        Ok(ThermalCorrelations { projection: self.projection, even: sector(Boundary::Antiperiodic)?, odd: sector(Boundary::Periodic)? })
    }

    /// `<P>` for a Pauli string in the original frame.
    pub fn expectation(&self, p: &PauliString, c: &ThermalCorrelations) -> Result<f64> {
        if p.num_qubits() != self.n {
            return Err(Error::SizeMismatch { left: p.num_qubits(), right: self.n });
        }
        if !p.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        c.expectation(&jw_map(&p.hadamard_conjugate()))
    }

    pub fn expectation_set(
        &self,
        c: &ThermalCorrelations,
        pair: (GroupElement, GroupElement),
        blocks: (usize, usize),
    ) -> Result<ExpectationSet> {
        let (g, h) = pair;
        let n = self.n;
        let ug = symmetry(g, n)?;
        let t = twisted_sop(g, h, blocks.0, blocks.1, n)?;
        Ok(ExpectationSet {
            u_g: self.expectation(&ug, c)?,
            u_h: self.expectation(&symmetry(h, n)?, c)?,
            u_gh: self.expectation(&symmetry(g.compose(h), n)?, c)?,
            twisted: self.expectation(&t, c)?,
            ug_twisted: self.expectation(&(&ug * &t), c)?,
        })
    }

    /// Minimum of the winning probability over the six pairs for one twisted interval.
    pub fn min_win(&self, c: &ThermalCorrelations, blocks: (usize, usize)) -> Result<PairMinimum> {
        min_over_pairs(|a, b| Ok(quantum_win_prob(&self.expectation_set(c, (a, b), blocks)?)))
    }
}

/// The five expectations on an axis at temperature `t`.
#[allow(clippy::too_many_arguments)]
pub fn axis_expectations(
    j: f64,
    axis: Axis,
    n: usize,
    t: f64,
    delta: f64,
    pair: (GroupElement, GroupElement),
    blocks: (usize, usize),
) -> Result<ExpectationSet> {
    let solver = AxisSolver::new(axis, j, n, delta)?;
    let g = solver.correlation(t)?;
    solver.expectation_set(&g, pair, blocks)
}

/// Block `q = N - p + 1` mirroring `p` about the centre of the chain.
pub fn mirrored_block(n: usize, p: usize) -> Result<usize> {
    let blocks = n / 2;
    if p == 0 || 2 * p > blocks {
        return Err(Error::param(format!("block {p} has no mirror partner above it on {blocks} blocks")));
    }
    Ok(blocks - p + 1)
}
