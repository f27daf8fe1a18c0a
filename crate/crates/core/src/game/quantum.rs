use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::QuantumState;
use crate::pauli::{kappa_decompose, sop, symmetry, twisted_sop, GroupElement, PauliString};

use super::spec::{all_inputs, win_check, GameSpec, Transcript};

/// The five expectation values that fix the winning probability of the measurement
/// strategy on a translation-invariant state with equidistant corners.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectationSet {
    pub u_g: f64,
    pub u_h: f64,
    pub u_gh: f64,
    pub twisted: f64,
    pub ug_twisted: f64,
}

/// `(1/32) [12 (1 + <U(g)>) + <U(h)> + <U(gh)> - 3 (<T> + <U(g) T>)]`.
pub fn quantum_win_prob(e: &ExpectationSet) -> f64 {
    (12.0 * (1.0 + e.u_g) + e.u_h + e.u_gh - 3.0 * (e.twisted + e.ug_twisted)) / 32.0
}

/// Same as [`quantum_win_prob`] with a separate twisted pair `(<T_e>, <U(g) T_e>)` per edge.
pub fn quantum_win_prob_edges(u_g: f64, u_h: f64, u_gh: f64, edges: &[(f64, f64); 3]) -> f64 {
    let twisted: f64 = edges.iter().map(|(t, ut)| t + ut).sum();
    (12.0 * (1.0 + u_g) + u_h + u_gh - twisted) / 32.0
}

/// `P = sum_k c_k <O_k>`: the winning probability as a linear combination of Pauli
/// observables. The first term is the identity.
pub fn win_operator(spec: &GameSpec) -> Result<Vec<(f64, PauliString)>> {
    let n = spec.n;
    let ug = symmetry(spec.g, n)?;
    let mut terms = vec![
        (12.0 / 32.0, PauliString::identity(n)),
        (12.0 / 32.0, ug.clone()),
        (1.0 / 32.0, symmetry(spec.h, n)?),
        (1.0 / 32.0, symmetry(spec.g.compose(spec.h), n)?),
    ];
    for (p, q) in spec.edges() {
        let t = twisted_sop(spec.g, spec.h, p, q, n)?;
        let ut = &ug * &t;
        terms.push((-1.0 / 32.0, t));
        terms.push((-1.0 / 32.0, ut));
    }
    Ok(terms)
}

/// Exact winning probability of the measurement strategy on `state`.
pub fn exact_win_prob<S: QuantumState>(spec: &GameSpec, state: &S) -> Result<f64> {
    win_operator(spec)?.iter().map(|(c, o)| Ok(c * state.expectation(o)?)).sum()
}

/// The five inputs of [`quantum_win_prob`] for `T = T^{(g,h)}_[p,q]`.
pub fn expectation_set<S: QuantumState>(
    state: &S,
    g: GroupElement,
    h: GroupElement,
    p: usize,
    q: usize,
) -> Result<ExpectationSet> {
    let n = state.num_qubits();
    let ug = symmetry(g, n)?;
    let t = twisted_sop(g, h, p, q, n)?;
    Ok(ExpectationSet {
        u_g: state.expectation(&ug)?,
        u_h: state.expectation(&symmetry(h, n)?)?,
        u_gh: state.expectation(&symmetry(g.compose(h), n)?)?,
        twisted: state.expectation(&t)?,
        ug_twisted: state.expectation(&(&ug * &t))?,
    })
}

/// Minimum over the six ordered pairs and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairMinimum {
    pub value: f64,
    pub g: GroupElement,
    pub h: GroupElement,
}

/// `min_{(g,h)} P(g,h)` with `P` supplied per pair. Ties keep the first pair in
/// [`GroupElement::ordered_pairs`] order.
pub fn min_over_pairs<F>(mut value: F) -> Result<PairMinimum>
where
    F: FnMut(GroupElement, GroupElement) -> Result<f64>,
{
    let mut best: Option<PairMinimum> = None;
    for (g, h) in GroupElement::ordered_pairs() {
        let v = value(g, h)?;
        if best.map_or(true, |b| v < b.value) {
            best = Some(PairMinimum { value: v, g, h });
        }
    }
    Ok(best.expect("six pairs"))
}

/// [`min_over_pairs`] applied to [`quantum_win_prob`] of a per-pair expectation provider.
pub fn min_win_prob<F>(mut provider: F) -> Result<PairMinimum>
where
    F: FnMut(GroupElement, GroupElement) -> Result<ExpectationSet>,
{
    min_over_pairs(|g, h| Ok(quantum_win_prob(&provider(g, h)?)))
}

/// Winning probability on the graph state `|G_r>`, with `r` as a bit mask.
pub fn graph_state_win_prob(spec: &GameSpec, r: u64) -> Result<f64> {
    let table = eigen_table(spec)?;
    Ok(table.iter().map(|&(c, sign, mask)| c * sign * parity_sign(r & mask)).sum())
}

fn parity_sign(x: u64) -> f64 {
    if x.count_ones() % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

fn eigen_table(spec: &GameSpec) -> Result<Vec<(f64, f64, u64)>> {
    if spec.n > 64 {
        return Err(Error::ResourceGuard { what: "graph-basis evaluation", n: spec.n, max: 64 });
    }
    win_operator(spec)?
        .into_iter()
        .map(|(c, o)| {
            let form = kappa_decompose(&o)?
                .ok_or_else(|| Error::Numerical("win operator term outside the stabilizer group".into()))?;
            Ok((c, f64::from(form.sign), form.index.mask()))
        })
        .collect()
}

/// `P(rho) = sum_r c_r P(|G_r>)` from the graph-basis diagonal of `rho`.
pub fn win_prob_from_graph_diagonal(spec: &GameSpec, diag: &crate::model::GraphDiagonal) -> Result<f64> {
    if diag.num_qubits() != spec.n {
        return Err(Error::SizeMismatch { left: diag.num_qubits(), right: spec.n });
    }
    let table = eigen_table(spec)?;
    Ok(diag
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(r, c)| c * table.iter().map(|&(k, s, m)| k * s * parity_sign(r as u64 & m)).sum::<f64>())
        .sum())
}

/// Cluster-state fidelity `f_n = c_0` next to `P_min`, which bounds it from above.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityBound {
    pub fidelity: f64,
    pub p_min: PairMinimum,
}

/// Evaluates `f_n` and `P_min` (over the six pairs, same corners) from the graph diagonal.
pub fn cluster_fidelity_bound<S: QuantumState>(state: &S, corners: [usize; 3]) -> Result<FidelityBound> {
    let n = state.num_qubits();
    let diag = state.graph_diagonal()?;
    let p_min = min_over_pairs(|g, h| {
        win_prob_from_graph_diagonal(&GameSpec::with_corners(n, g, h, corners)?, &diag)
    })?;
    Ok(FidelityBound { fidelity: diag.fidelity(), p_min })
}

/// Smallest string-order parameter `<S_[p,q](g)>` over nontrivial `g` and the three edges,
/// next to `P_min` for the same corners.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SopCriterion {
    pub min_sop: f64,
    pub p_min: PairMinimum,
}

impl SopCriterion {
    pub fn sop_above_third(&self) -> bool {
        self.min_sop > 1.0 / 3.0
    }

    pub fn beats_classical(&self) -> bool {
        self.p_min.value > 7.0 / 8.0
    }
}

pub fn sop_criterion<S: QuantumState>(state: &S, corners: [usize; 3]) -> Result<SopCriterion> {
    let n = state.num_qubits();
    let probe = GameSpec::with_corners(n, GroupElement::X, GroupElement::Y, corners)?;
    let mut min_sop = f64::INFINITY;
    for g in GroupElement::NONTRIVIAL {
        for (p, q) in probe.edges() {
            min_sop = min_sop.min(state.expectation(&sop(g, p, q, n)?)?);
        }
    }
    let p_min = min_over_pairs(|g, h| exact_win_prob(&GameSpec::with_corners(n, g, h, corners)?, state))?;
    Ok(SopCriterion { min_sop, p_min })
}

/// Monte Carlo estimate of a winning rate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampledRate {
    pub wins: u64,
    pub trials: u64,
    pub rate: f64,
    pub sigma: f64,
}

impl SampledRate {
    pub fn from_counts(wins: u64, trials: u64) -> Self {
        let rate = wins as f64 / trials as f64;
        SampledRate { wins, trials, rate, sigma: (rate * (1.0 - rate) / trials as f64).sqrt() }
    }
}

const CHUNK: u64 = 256;

/// One round: uniform corner inputs, then every player measures its context on a
/// pure state drawn from `state`.
pub fn play_once<S: QuantumState, R: Rng + ?Sized>(
    spec: &GameSpec,
    state: &S,
    contexts: &[[[PauliString; 3]; 2]],
    rng: &mut R,
) -> Result<(Transcript, bool)> {
    let inputs = all_inputs()[rng.gen_range(0..8)];
    let per_player = spec.player_inputs(inputs);
    let mut psi = state.sample_pure(rng);
    let mut outputs = Vec::with_capacity(per_player.len());
    for (k, &x) in per_player.iter().enumerate() {
        let ctx = &contexts[k][x as usize];
        let mut out = [0u8; 3];
        for (slot, op) in out.iter_mut().zip(ctx) {
            *slot = psi.measure(op, rng)?;
        }
        outputs.push(out);
    }
    let t = Transcript { inputs, outputs };
    let won = win_check(spec, &t)?;
    Ok((t, won))
}

/// Plays `trials` rounds. Rounds are split into fixed chunks with their own ChaCha
/// stream, so the result depends only on `seed`, not on the thread count.
pub fn play_sampled<S: QuantumState>(spec: &GameSpec, state: &S, trials: u64, seed: u64) -> Result<SampledRate> {
    if state.num_qubits() != spec.n {
        return Err(Error::SizeMismatch { left: state.num_qubits(), right: spec.n });
    }
    if trials == 0 {
        return Err(Error::param("at least one trial is needed"));
    }
    let contexts: Vec<[[PauliString; 3]; 2]> = (1..=spec.players())
        .map(|p| Ok([spec.player_context(p, 0)?, spec.player_context(p, 1)?]))
        .collect::<Result<_>>()?;
    let chunks = trials.div_ceil(CHUNK);
    let wins = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let len = CHUNK.min(trials - c * CHUNK);
            let mut wins = 0u64;
            for _ in 0..len {
                if play_once(spec, state, &contexts, &mut rng)?.1 {
                    wins += 1;
                }
            }
            Ok(wins)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    Ok(SampledRate::from_counts(wins, trials))
}
