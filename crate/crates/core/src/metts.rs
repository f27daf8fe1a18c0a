//! Minimally entangled typical thermal states on the dense backend.
//!
//! One iteration evolves a product state `|j>` to `|phi_j> ∝ e^{-beta H/2}|j>`, records
//! `<phi_j|A|phi_j>` and collapses `|phi_j>` onto a new product state `|k>` with
//! probability `|<k|phi_j>|^2`. The visited states are distributed as
//! `<j|e^{-beta H}|j> / Z`, so sample means of the recorded values converge to Gibbs
//! expectations.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{win_operator, GameSpec};
use crate::model::{
    hamiltonian, imaginary_time_evolve, ModelParams, PauliSum, Spectrum, StateVector, C64,
    DEFAULT_TROTTER_STEP,
};
use crate::pauli::{symmetry, twisted_sop, GroupElement, Pauli, PauliString};

/// How each iteration chooses the per-site collapse basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CollapsePolicy {
    ZOnly,
    /// Z on even iterations, X on odd ones, for every site at once.
    AlternatingZX,
    /// Each site gets an independent uniformly random axis.
    RandomBloch,
    Fixed(FixedBasis),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FixedBasis {
    X,
    Y,
}

impl fmt::Display for CollapsePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CollapsePolicy::ZOnly => "z",
            CollapsePolicy::AlternatingZX => "zx",
            CollapsePolicy::RandomBloch => "bloch",
            CollapsePolicy::Fixed(FixedBasis::X) => "x",
            CollapsePolicy::Fixed(FixedBasis::Y) => "y",
        })
    }
}

impl FromStr for CollapsePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" | "z_only" | "zonly" => Ok(CollapsePolicy::ZOnly),
            "zx" | "alternating_zx" | "alternating" => Ok(CollapsePolicy::AlternatingZX),
            "bloch" | "random_bloch" | "random" => Ok(CollapsePolicy::RandomBloch),
            "x" | "fixed_x" => Ok(CollapsePolicy::Fixed(FixedBasis::X)),
            "y" | "fixed_y" => Ok(CollapsePolicy::Fixed(FixedBasis::Y)),
            _ => Err(Error::param(format!("unknown collapse policy {s:?}, expected z, zx, bloch, x or y"))),
        }
    }
}

/// Orthonormal single-qubit basis; outcome 0 is `up`, outcome 1 is `down`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteBasis {
    pub up: [C64; 2],
    pub down: [C64; 2],
}

impl SiteBasis {
    pub fn of(p: Pauli) -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
        match p {
            Pauli::I | Pauli::Z => SiteBasis { up: [o, z], down: [z, o] },
            Pauli::X => SiteBasis { up: [o * r, o * r], down: [o * r, -o * r] },
            Pauli::Y => SiteBasis { up: [o * r, i * r], down: [o * r, -i * r] },
        }
    }

    /// Eigenbasis of `n . sigma` for a uniformly random unit vector `n`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let cos_theta: f64 = 1.0 - 2.0 * rng.gen::<f64>();
        let phi = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
        let half = 0.5 * cos_theta.clamp(-1.0, 1.0).acos();
        let (c, s) = (half.cos(), half.sin());
        let e = C64::from_polar(1.0, phi);
        SiteBasis { up: [C64::new(c, 0.0), e * s], down: [-e.conj() * s, C64::new(c, 0.0)] }
    }

    fn is_computational(&self) -> bool {
        *self == SiteBasis::of(Pauli::Z)
    }

    /// Whether the Pauli `p` is diagonal in this basis.
    pub fn diagonalizes(&self, p: Pauli) -> bool {
        let v = PauliString::single(1, 1, p).expect("one site");
        let sv = StateVector::from_amplitudes(1, self.up.to_vec()).expect("one site");
        let image = sv.apply(&v).expect("one site");
        let overlap = sv.inner(&image).expect("one site").norm();
        (overlap - 1.0).abs() < 1e-12
    }
}

impl CollapsePolicy {
    /// Bases used to collapse after iteration `iteration`.
    pub fn bases<R: Rng + ?Sized>(&self, iteration: usize, n: usize, rng: &mut R) -> Vec<SiteBasis> {
        match self {
            CollapsePolicy::ZOnly => vec![SiteBasis::of(Pauli::Z); n],
            CollapsePolicy::AlternatingZX => {
                let p = if iteration % 2 == 0 { Pauli::Z } else { Pauli::X };
                vec![SiteBasis::of(p); n]
            }
            CollapsePolicy::RandomBloch => (0..n).map(|_| SiteBasis::random(rng)).collect(),
            CollapsePolicy::Fixed(FixedBasis::X) => vec![SiteBasis::of(Pauli::X); n],
            CollapsePolicy::Fixed(FixedBasis::Y) => vec![SiteBasis::of(Pauli::Y); n],
        }
    }

    /// Nontrivial symmetries `U(g)` that every collapse basis of this policy diagonalizes.
    /// Each one commutes with `H`, so its eigenvalue never changes along the chain.
    pub fn conserved_symmetries(&self, n: usize) -> Result<Vec<GroupElement>> {
        let axes: &[Pauli] = match self {
            CollapsePolicy::ZOnly => &[Pauli::Z],
            CollapsePolicy::AlternatingZX => &[Pauli::Z, Pauli::X],
            CollapsePolicy::RandomBloch => return Ok(Vec::new()),
            CollapsePolicy::Fixed(FixedBasis::X) => &[Pauli::X],
            CollapsePolicy::Fixed(FixedBasis::Y) => &[Pauli::Y],
        };
        let mut out = Vec::new();
        for g in GroupElement::NONTRIVIAL {
            let u = symmetry(g, n)?;
            if axes.iter().all(|&a| (1..=n).all(|j| SiteBasis::of(a).diagonalizes(u.pauli_at(j)))) {
                out.push(g);
            }
        }
        Ok(out)
    }

    pub fn is_ergodic(&self, n: usize) -> Result<bool> {
        Ok(self.conserved_symmetries(n)?.is_empty())
    }
}

/// `|k>` for the label `k` (bit `j-1` is the outcome on site `j`).
pub fn product_state(label: usize, bases: &[SiteBasis]) -> Result<StateVector> {
    let sites: Vec<[C64; 2]> =
        bases.iter().enumerate().map(|(j, b)| if (label >> j) & 1 == 0 { b.up } else { b.down }).collect();
    StateVector::product(&sites)
}

/// `|<k|psi>|^2` over all product labels `k` in the given bases.
pub fn transition_probabilities(psi: &StateVector, bases: &[SiteBasis]) -> Result<Vec<f64>> {
    let n = psi.num_qubits();
    if bases.len() != n {
        return Err(Error::SizeMismatch { left: bases.len(), right: n });
    }
    let mut amps = psi.amplitudes().to_vec();
    for (j, b) in bases.iter().enumerate() {
        if b.is_computational() {
            continue;
        }
        let bit = 1usize << j;
        for s in 0..amps.len() {
            if s & bit == 0 {
                let (a0, a1) = (amps[s], amps[s | bit]);
                amps[s] = b.up[0].conj() * a0 + b.up[1].conj() * a1;
                amps[s | bit] = b.down[0].conj() * a0 + b.down[1].conj() * a1;
            }
        }
    }
    Ok(amps.iter().map(|a| a.norm_sqr()).collect())
}

/// Outcome of one collapse.
#[derive(Debug, Clone)]
pub struct Collapse {
    pub label: usize,
    pub bases: Vec<SiteBasis>,
    pub state: StateVector,
}

/// Collapses a normalized `state` onto a product state in the bases chosen by `policy`.
pub fn collapse_step<R: Rng + ?Sized>(
    state: &StateVector,
    policy: CollapsePolicy,
    iteration: usize,
    rng: &mut R,
) -> Result<Collapse> {
    let bases = policy.bases(iteration, state.num_qubits(), rng);
    let probs = transition_probabilities(state, &bases)?;
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::Numerical(format!("collapse probabilities sum to {total}")));
    }
    let r = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut label = probs.len() - 1;
    for (k, p) in probs.iter().enumerate() {
        acc += p;
        if r < acc {
            label = k;
            break;
        }
    }
    let state = product_state(label, &bases)?;
    Ok(Collapse { label, bases, state })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MettsConfig {
    /// Recorded iterations.
    pub n_i: usize,
    /// Iterations evolved and collapsed but not recorded.
    pub warmup: usize,
    pub policy: CollapsePolicy,
    pub beta: f64,
    pub seed: u64,
    pub trotter_step: f64,
}

impl MettsConfig {
    pub fn new(beta: f64, seed: u64) -> Self {
        MettsConfig { n_i: 110, warmup: 10, policy: CollapsePolicy::ZOnly, beta, seed, trotter_step: DEFAULT_TROTTER_STEP }
    }

    pub fn at_temperature(t: f64, seed: u64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::param(format!("METTS needs a positive finite temperature, got {t}")));
        }
        Ok(Self::new(1.0 / t, seed))
    }

    pub fn with_policy(mut self, policy: CollapsePolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_i < 2 {
            return Err(Error::param(format!("N_I must be at least 2, got {}", self.n_i)));
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return Err(Error::param(format!("beta must be finite and non-negative, got {}", self.beta)));
        }
        if !(self.trotter_step > 0.0) {
            return Err(Error::param("Trotter step must be positive"));
        }
        Ok(())
    }
}

/// A real linear combination of Pauli strings with a display name.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub name: String,
    pub terms: Vec<(f64, PauliString)>,
}

impl Observable {
    pub fn pauli(name: impl Into<String>, p: PauliString) -> Self {
        Observable { name: name.into(), terms: vec![(1.0, p)] }
    }

    /// The winning-probability operator of a game.
    pub fn win_probability(spec: &GameSpec) -> Result<Self> {
        Ok(Observable { name: format!("P({},{})", spec.g, spec.h), terms: win_operator(spec)? })
    }

    pub fn evaluate(&self, psi: &StateVector) -> Result<f64> {
        self.terms.iter().map(|(c, p)| Ok(c * psi.expectation(p)?)).sum()
    }

    pub fn num_qubits(&self) -> Option<usize> {
        self.terms.first().map(|(_, p)| p.num_qubits())
    }
}

/// Every expectation entering the winning probability on the given corners, followed
/// by the six winning probabilities themselves.
pub fn theorem1_observables(n: usize, corners: [usize; 3]) -> Result<Vec<Observable>> {
    let mut out = Vec::new();
    for g in GroupElement::NONTRIVIAL {
        out.push(Observable::pauli(format!("U({g})"), symmetry(g, n)?));
    }
    let mut wins = Vec::new();
    for (g, h) in GroupElement::ordered_pairs() {
        let spec = GameSpec::with_corners(n, g, h, corners)?;
        let ug = symmetry(g, n)?;
        for (p, q) in spec.edges() {
            let t = twisted_sop(g, h, p, q, n)?;
            out.push(Observable::pauli(format!("U({g})T({g},{h})[{p},{q}]"), &ug * &t));
            out.push(Observable::pauli(format!("T({g},{h})[{p},{q}]"), t));
        }
        wins.push(Observable::win_probability(&spec)?);
    }
    out.extend(wins);
    Ok(out)
}

/// Mean and autocorrelation-aware standard error of one recorded series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub mean: f64,
    /// Sample variance with `N - 1` normalization.
    pub variance: f64,
    pub tau: f64,
    pub stderr: f64,
    pub relative_error: f64,
    pub series: Vec<f64>,
}

/// `C(t) = (<A_j A_{j+t}> - <A>^2) / (<A^2> - <A>^2)` with lag averages over the
/// `N - t` available pairs.
pub fn autocorrelation(series: &[f64], lag: usize) -> Option<f64> {
    let n = series.len();
    if lag >= n {
        return None;
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let second = series.iter().map(|x| x * x).sum::<f64>() / n as f64;
    let denom = second - mean * mean;
    if !(denom > 0.0) {
        return None;
    }
    let lagged = series.iter().zip(&series[lag..]).map(|(a, b)| a * b).sum::<f64>() / (n - lag) as f64;
    Some((lagged - mean * mean) / denom)
}

/// `s = sigma sqrt(tau / N)` with `tau = 1 + 2 sum_{t < M} C(t)`, where `M` is the first
/// lag with `C(M) <= 0`. A constant series has `tau = 1` and `s = 0`.
pub fn error_report(series: &[f64]) -> Result<EstimateReport> {
    let n = series.len();
    if n < 2 {
        return Err(Error::param(format!("an error estimate needs at least 2 samples, got {n}")));
    }
    if series.iter().all(|&x| x == series[0]) {
        let mean = series[0];
        return Ok(EstimateReport { mean, variance: 0.0, tau: 1.0, stderr: 0.0, relative_error: 0.0, series: series.to_vec() });
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let variance = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let mut tau = 1.0;
    for lag in 1..n {
        match autocorrelation(series, lag) {
            Some(c) if c > 0.0 => tau += 2.0 * c,
            _ => break,
        }
    }
    let stderr = (variance * tau / n as f64).sqrt();
    let relative_error = if stderr == 0.0 { 0.0 } else { stderr / mean.abs() };
    Ok(EstimateReport { mean, variance, tau, stderr, relative_error, series: series.to_vec() })
}

/// Combined estimate from independent chains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergedEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub chains: usize,
}

/// Inverse-variance weighting by `1/s^2`. If any chain reports `s = 0` the weights are
/// equal and `s = sqrt(sum s_c^2) / chains`.
pub fn merge_reports(reports: &[&EstimateReport]) -> Result<MergedEstimate> {
    if reports.is_empty() {
        return Err(Error::param("nothing to merge"));
    }
    let k = reports.len();
    if reports.iter().any(|r| r.stderr == 0.0) {
        let mean = reports.iter().map(|r| r.mean).sum::<f64>() / k as f64;
        let stderr = reports.iter().map(|r| r.stderr * r.stderr).sum::<f64>().sqrt() / k as f64;
        return Ok(MergedEstimate { mean, stderr, chains: k });
    }
    let weights: Vec<f64> = reports.iter().map(|r| 1.0 / (r.stderr * r.stderr)).collect();
    let total: f64 = weights.iter().sum();
    let mean = reports.iter().zip(&weights).map(|(r, w)| w * r.mean).sum::<f64>() / total;
    Ok(MergedEstimate { mean, stderr: total.sqrt().recip(), chains: k })
}

/// The Markov chain itself: product state, iteration counter and random stream.
pub struct Chain {
    config: MettsConfig,
    h: Arc<PauliSum>,
    state: StateVector,
    label: usize,
    iteration: usize,
    rng: ChaCha8Rng,
}

impl Chain {
    pub fn new(config: MettsConfig, params: &ModelParams) -> Result<Self> {
        Self::with_stream(config, params, 0)
    }

    /// Chain on random stream `stream` of `config.seed`; distinct streams are independent.
    pub fn with_stream(config: MettsConfig, params: &ModelParams, stream: u64) -> Result<Self> {
        config.validate()?;
        let h = Arc::new(hamiltonian(params)?);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(stream);
        let n = params.n;
        let bases = config.policy.bases(0, n, &mut rng);
        let label = rng.gen_range(0..1usize << n);
        let state = product_state(label, &bases)?;
        Ok(Chain { config, h, state, label, iteration: 0, rng })
    }

    /// Current product-state label.
    pub fn label(&self) -> usize {
        self.label
    }

    /// Evolves the current product state, hands `|phi>` to `record`, then collapses.
    pub fn step<F>(&mut self, mut record: F) -> Result<()>
    where
        F: FnMut(&StateVector) -> Result<()>,
    {
        let phi = imaginary_time_evolve(&self.h, &self.state, 0.5 * self.config.beta, self.config.trotter_step)?.state;
        record(&phi)?;
        self.iteration += 1;
        let c = collapse_step(&phi, self.config.policy, self.iteration, &mut self.rng)?;
        self.label = c.label;
        self.state = c.state;
        Ok(())
    }
}

/// Per-observable reports of one chain.
#[derive(Debug, Clone)]
pub struct MettsRun {
    pub names: Vec<String>,
    pub reports: Vec<EstimateReport>,
    /// Symmetries the collapse policy cannot change; non-empty means the chain is stuck
    /// in one symmetry sector.
    pub conserved: Vec<GroupElement>,
}

impl MettsRun {
    pub fn non_ergodic(&self) -> bool {
        !self.conserved.is_empty()
    }

    pub fn report(&self, name: &str) -> Option<&EstimateReport> {
        self.names.iter().position(|n| n == name).map(|i| &self.reports[i])
    }
}

fn check_observables(n: usize, observables: &[Observable]) -> Result<()> {
    for o in observables {
        for (c, p) in &o.terms {
            if p.num_qubits() != n {
                return Err(Error::SizeMismatch { left: p.num_qubits(), right: n });
            }
            if !p.is_hermitian() || !c.is_finite() {
                return Err(Error::NotHermitian);
            }
        }
    }
    Ok(())
}

pub fn run_metts(config: &MettsConfig, params: &ModelParams, observables: &[Observable]) -> Result<MettsRun> {
    run_chain(config, params, observables, 0)
}

fn run_chain(config: &MettsConfig, params: &ModelParams, observables: &[Observable], stream: u64) -> Result<MettsRun> {
    check_observables(params.n, observables)?;
    let mut chain = Chain::with_stream(*config, params, stream)?;
    let mut series = vec![Vec::with_capacity(config.n_i); observables.len()];
    for it in 0..config.warmup + config.n_i {
        chain.step(|phi| {
            if it >= config.warmup {
                for (o, s) in observables.iter().zip(series.iter_mut()) {
                    s.push(o.evaluate(phi)?);
                }
            }
            Ok(())
        })?;
    }
    Ok(MettsRun {
        names: observables.iter().map(|o| o.name.clone()).collect(),
        reports: series.iter().map(|s| error_report(s)).collect::<Result<_>>()?,
        conserved: config.policy.conserved_symmetries(params.n)?,
    })
}

/// Runs `chains` independent chains in parallel on streams `0..chains` of `config.seed`.
pub fn run_chains(
    config: &MettsConfig,
    params: &ModelParams,
    observables: &[Observable],
    chains: usize,
) -> Result<Vec<MettsRun>> {
    (0..chains as u64).into_par_iter().map(|c| run_chain(config, params, observables, c)).collect()
}

/// Exact METTS transition data in one fixed product basis: stationary weights
/// `p_j = <j|e^{-beta H}|j> / Z` and `T[j, k] = |<k|e^{-beta H/2}|j>|^2 / <j|e^{-beta H}|j>`.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    pub stationary: Vec<f64>,
    pub transitions: DMatrix<f64>,
}

impl TransitionMatrix {
    pub fn exact(params: &ModelParams, beta: f64, basis: Pauli) -> Result<Self> {
        if params.n > 8 {
            return Err(Error::ResourceGuard { what: "exact METTS transition matrix", n: params.n, max: 8 });
        }
        let spectrum = Spectrum::of(&hamiltonian(params)?)?;
        let n = params.n;
        let dim = 1usize << n;
        let bases = vec![SiteBasis::of(basis); n];
        let mut log_w = Vec::with_capacity(dim);
        let mut transitions = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let (phi, log_norm_sq) = spectrum.evolve(&product_state(j, &bases)?, 0.5 * beta)?;
            log_w.push(log_norm_sq);
            for (k, p) in transition_probabilities(&phi, &bases)?.into_iter().enumerate() {
                transitions[(j, k)] = p;
            }
        }
        let top = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = log_w.iter().map(|l| (l - top).exp()).collect();
        let z: f64 = w.iter().sum();
        Ok(TransitionMatrix { stationary: w.iter().map(|x| x / z).collect(), transitions })
    }

    /// `max_{j,k} |p_j T(j->k) - p_k T(k->j)|`.
    pub fn detailed_balance_residual(&self) -> f64 {
        let p = &self.stationary;
        let t = &self.transitions;
        let mut worst = 0.0f64;
        for j in 0..p.len() {
            for k in 0..p.len() {
                worst = worst.max((p[j] * t[(j, k)] - p[k] * t[(k, j)]).abs());
            }
        }
        worst
    }
}

/// Long-chain label histogram against the exact stationary weights.
#[derive(Debug, Clone)]
pub struct StationarityReport {
    pub empirical: Vec<f64>,
    pub exact: Vec<f64>,
    pub tv_distance: f64,
    pub steps: usize,
}

pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Runs one chain for `steps` collapses after the configured warmup and compares the
/// visited labels with `p_j / Z`. Only fixed-basis policies have a label distribution.
pub fn stationarity_test(config: &MettsConfig, params: &ModelParams, steps: usize) -> Result<StationarityReport> {
    let basis = match config.policy {
        CollapsePolicy::ZOnly => Pauli::Z,
        CollapsePolicy::Fixed(FixedBasis::X) => Pauli::X,
        CollapsePolicy::Fixed(FixedBasis::Y) => Pauli::Y,
        other => return Err(Error::param(format!("policy {other} has no fixed label basis"))),
    };
    if steps == 0 {
        return Err(Error::param("at least one step is needed"));
    }
    let exact = TransitionMatrix::exact(params, config.beta, basis)?.stationary;
    let mut chain = Chain::new(*config, params)?;
    for _ in 0..config.warmup {
        chain.step(|_| Ok(()))?;
    }
    let mut counts = vec![0usize; exact.len()];
    for _ in 0..steps {
        chain.step(|_| Ok(()))?;
        counts[chain.label()] += 1;
    }
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / steps as f64).collect();
    let tv_distance = total_variation(&empirical, &exact);
    Ok(StationarityReport { empirical, exact, tv_distance, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_round_trip() {
        for p in [
            CollapsePolicy::ZOnly,
            CollapsePolicy::AlternatingZX,
            CollapsePolicy::RandomBloch,
            CollapsePolicy::Fixed(FixedBasis::X),
            CollapsePolicy::Fixed(FixedBasis::Y),
        ] {
            assert_eq!(p.to_string().parse::<CollapsePolicy>().unwrap(), p);
        }
    }

    #[test]
    fn random_bloch_basis_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let b = SiteBasis::random(&mut rng);
            let dot: C64 = b.up.iter().zip(&b.down).map(|(x, y)| x.conj() * y).sum();
            let nu: f64 = b.up.iter().map(|x| x.norm_sqr()).sum();
            let nd: f64 = b.down.iter().map(|x| x.norm_sqr()).sum();
            assert!(dot.norm() < 1e-14 && (nu - 1.0).abs() < 1e-14 && (nd - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_series_has_zero_error() {
        let r = error_report(&[0.3; 20]).unwrap();
        assert_eq!(r.stderr, 0.0);
        assert_eq!(r.tau, 1.0);
        assert_eq!(r.variance, 0.0);
        assert!(error_report(&[1.0]).is_err());
    }

    #[test]
    fn autocorrelation_at_lag_zero_is_one() {
        let s = [1.0, -2.0, 0.5, 3.0, 0.0];
        assert!((autocorrelation(&s, 0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn conserved_symmetries_per_policy() {
        use CollapsePolicy as P;
        assert!(P::ZOnly.is_ergodic(8).unwrap());
        assert!(P::AlternatingZX.is_ergodic(8).unwrap());
        assert!(P::RandomBloch.is_ergodic(8).unwrap());
        assert!(P::Fixed(FixedBasis::Y).is_ergodic(8).unwrap());
        assert_eq!(P::Fixed(FixedBasis::X).conserved_symmetries(8).unwrap(), GroupElement::NONTRIVIAL.to_vec());
    }
}
