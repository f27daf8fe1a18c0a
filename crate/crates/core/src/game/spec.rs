use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{
    block_site, boundary_left, boundary_right, check_pair, local_symmetry, GroupElement,
    PauliString,
};

/// Game on `N = n/2` players; player `p` holds qubits `2p-1, 2p`. Three corner players
/// receive input bits, everyone else always receives 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSpec {
    pub n: usize,
    pub g: GroupElement,
    pub h: GroupElement,
    /// Corner blocks, 1-indexed and strictly increasing.
    pub corners: [usize; 3],
}

impl GameSpec {
    /// Equidistant corners `1, 1 + N/3, 1 + 2N/3`; needs `3 | N`.
    pub fn new(n: usize, g: GroupElement, h: GroupElement) -> Result<Self> {
        if n % 2 == 1 || n < 6 {
            return Err(Error::InvalidQubitCount { n, min: 6 });
        }
        let players = n / 2;
        if players % 3 != 0 {
            return Err(Error::param(format!(
                "equidistant corners need the player count to be a multiple of 3, got {players}"
            )));
        }
        Self::with_corners(n, g, h, [1, 1 + players / 3, 1 + 2 * players / 3])
    }

    pub fn with_corners(n: usize, g: GroupElement, h: GroupElement, corners: [usize; 3]) -> Result<Self> {
        check_pair(g, h)?;
        if n % 2 == 1 || n < 6 {
            return Err(Error::InvalidQubitCount { n, min: 6 });
        }
        let players = n / 2;
        if corners[0] == 0 || corners[0] >= corners[1] || corners[1] >= corners[2] || corners[2] > players {
            return Err(Error::param(format!("corners {corners:?} must increase within 1..={players}")));
        }
        Ok(GameSpec { n, g, h, corners })
    }

    /// Corners spread as evenly as `N` allows: `1, 1 + floor(N/3), 1 + floor(2N/3)`.
    pub fn spread(n: usize, g: GroupElement, h: GroupElement) -> Result<Self> {
        let players = n / 2;
        Self::with_corners(n, g, h, [1, 1 + players / 3, 1 + 2 * players / 3])
    }

    pub fn players(&self) -> usize {
        self.n / 2
    }

    pub fn is_equidistant(&self) -> bool {
        let lens = self.edges().map(|(p, q)| q - p);
        lens[0] == lens[1] && lens[1] == lens[2]
    }

    /// Block intervals `[p, q]` spanned by the twisted operator of each two-ones input,
    /// ordered as inputs `110`, `011`, `101`. The last one wraps, so `q > N`.
    pub fn edges(&self) -> [(usize, usize); 3] {
        let [a, b, c] = self.corners;
        [(a, b), (b, c), (c, a + self.players())]
    }

    /// Per-player input bits for the corner inputs `x`.
    pub fn player_inputs(&self, x: [u8; 3]) -> Vec<u8> {
        let mut inputs = vec![0; self.players()];
        for (k, &c) in self.corners.iter().enumerate() {
            inputs[c - 1] = x[k];
        }
        inputs
    }

    /// Context of player `p` (1-indexed) embedded in the full register.
    pub fn player_context(&self, p: usize, input: u8) -> Result<[PauliString; 3]> {
        let local = measurement_context(input, self.g, self.h)?;
        let site = block_site(p, self.n);
        Ok([local[0].embed(self.n, site)?, local[1].embed(self.n, site)?, local[2].embed(self.n, site)?])
    }
}

/// The two-qubit observables a player measures on input 0 or 1.
///
/// Input 0 gives `(u(h), u(g), u(gh))` with outputs `(a, b, c)`; input 1 gives
/// `(u(h) V^L(g), u(g), V^R(g) u(h))` with outputs `(d, b, e)`. The first operator of
/// input 1 is fixed to `+1` times a Pauli product; the third carries the inverse phase,
/// so the three multiply to the identity and the corner factors multiply exactly to the
/// twisted string-order parameter.
pub fn measurement_context(input: u8, g: GroupElement, h: GroupElement) -> Result<[PauliString; 3]> {
    check_pair(g, h)?;
    let ug = local_symmetry(g);
    let uh = local_symmetry(h);
    match input {
        0 => Ok([uh, ug, local_symmetry(g.compose(h))]),
        1 => {
            let left_raw = &uh * &boundary_left(g);
            let left = left_raw.hermitian_normalized();
            let fix = (left.phase() + 4 - left_raw.phase()) % 4;
            let right = (&boundary_right(g) * &uh).times_phase((4 - fix) % 4);
            if !right.is_hermitian() {
                return Err(Error::NotHermitian);
            }
            Ok([left, ug, right])
        }
        _ => Err(Error::param(format!("input must be 0 or 1, got {input}"))),
    }
}

/// Corner inputs and every player's three output bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub inputs: [u8; 3],
    pub outputs: Vec<[u8; 3]>,
}

/// All eight corner inputs in lexicographic order.
pub fn all_inputs() -> [[u8; 3]; 8] {
    let mut out = [[0u8; 3]; 8];
    for (i, x) in out.iter_mut().enumerate() {
        *x = [(i >> 2) as u8 & 1, (i >> 1) as u8 & 1, i as u8 & 1];
    }
    out
}

/// Index into [`GameSpec::edges`] for two-ones inputs.
pub fn edge_of(x: [u8; 3]) -> Option<usize> {
    match x {
        [1, 1, 0] => Some(0),
        [0, 1, 1] => Some(1),
        [1, 0, 1] => Some(2),
        _ => None,
    }
}

/// Winning predicate.
///
/// Always: the total output parity is even and the `b` bits sum to 0. On input `000`
/// the `a` bits sum to 0. On a two-ones input with edge from corner `mu` to corner
/// `nu`: `d_mu + (c on the players strictly between) + e_nu + (a on everyone else) = 1`.
pub fn win_check(spec: &GameSpec, t: &Transcript) -> Result<bool> {
    let players = spec.players();
    if t.outputs.len() != players {
        return Err(Error::param(format!("expected {players} outputs, got {}", t.outputs.len())));
    }
    let bit = |v: u8| v & 1;
    let parity = t.outputs.iter().flatten().fold(0, |acc, &v| acc ^ bit(v));
    let b_sum = t.outputs.iter().fold(0, |acc, o| acc ^ bit(o[1]));
    if parity != 0 || b_sum != 0 {
        return Ok(false);
    }
    let ones: u8 = t.inputs.iter().sum();
    if ones == 0 {
        return Ok(t.outputs.iter().fold(0, |acc, o| acc ^ bit(o[0])) == 0);
    }
    let Some(e) = edge_of(t.inputs) else {
        return Ok(true);
    };
    let (mu, nu) = spec.edges()[e];
    let idx = |block: usize| (block - 1) % players;
    let mut sum = bit(t.outputs[idx(mu)][0]) ^ bit(t.outputs[idx(nu)][2]);
    let mut inside = vec![false; players];
    inside[idx(mu)] = true;
    inside[idx(nu)] = true;
    for block in mu + 1..nu {
        sum ^= bit(t.outputs[idx(block)][2]);
        inside[idx(block)] = true;
    }
    for (k, o) in t.outputs.iter().enumerate() {
        if !inside[k] {
            sum ^= bit(o[0]);
        }
    }
    Ok(sum == 1)
}
