use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::GroupElement;

use super::spec::{all_inputs, win_check, GameSpec, Transcript};

/// Deterministic three-player strategy: `responses[player][input]` is the output triple,
/// read as `(a, b, c)` on input 0 and `(d, b, e)` on input 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalStrategy {
    pub responses: [[[u8; 3]; 2]; 3],
}

impl ClassicalStrategy {
    fn from_code(code: u32) -> Self {
        let mut responses = [[[0u8; 3]; 2]; 3];
        for (p, resp) in responses.iter_mut().enumerate() {
            let bits = (code >> (6 * p)) & 0x3f;
            for (input, out) in resp.iter_mut().enumerate() {
                for (k, o) in out.iter_mut().enumerate() {
                    *o = ((bits >> (3 * input + k)) & 1) as u8;
                }
            }
        }
        ClassicalStrategy { responses }
    }

    /// `b` is the same on both inputs for every player.
    pub fn has_input_independent_b(&self) -> bool {
        self.responses.iter().all(|r| r[0][1] == r[1][1])
    }

    /// Inputs won, as a bit set over [`all_inputs`] order.
    pub fn won_inputs(&self) -> u8 {
        let spec = three_player_spec();
        let mut won = 0u8;
        for (i, x) in all_inputs().into_iter().enumerate() {
            let outputs = (0..3).map(|p| self.responses[p][x[p] as usize]).collect();
            if win_check(&spec, &Transcript { inputs: x, outputs }).expect("three outputs") {
                won |= 1 << i;
            }
        }
        won
    }

    pub fn win_probability(&self) -> f64 {
        self.won_inputs().count_ones() as f64 / 8.0
    }
}

fn three_player_spec() -> GameSpec {
    GameSpec::new(6, GroupElement::X, GroupElement::Y).expect("valid three-player game")
}

/// Result of enumerating every deterministic three-player strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalOptimum {
    /// Best value when `b` may depend on the input (`2^18` strategies).
    pub value: f64,
    /// Best value when each player's `b` ignores the input (`2^15` strategies).
    pub value_fixed_b: f64,
    pub strategies: u64,
    pub witness: ClassicalStrategy,
    /// Strategies that win all seven inputs other than `111`.
    pub perfect_off_111: u64,
    /// Strategies that win all eight inputs.
    pub perfect: u64,
}

/// Exhaustive search over deterministic classical strategies for three players.
pub fn classical_optimum_3player() -> ClassicalOptimum {
    let all_but_111 = 0x7fu8;
    let mut best = (0u32, 0u32);
    let mut best_fixed = 0u32;
    let (mut perfect_off, mut perfect) = (0u64, 0u64);
    for code in 0..1u32 << 18 {
        let s = ClassicalStrategy::from_code(code);
        let won = s.won_inputs();
        let count = won.count_ones();
        if count > best.0 {
            best = (count, code);
        }
        if s.has_input_independent_b() {
            best_fixed = best_fixed.max(count);
        }
        if won & all_but_111 == all_but_111 {
            perfect_off += 1;
            if won == 0xff {
                perfect += 1;
            }
        }
    }
    ClassicalOptimum {
        value: best.0 as f64 / 8.0,
        value_fixed_b: best_fixed as f64 / 8.0,
        strategies: 1 << 18,
        witness: ClassicalStrategy::from_code(best.1),
        perfect_off_111: perfect_off,
        perfect,
    }
}

/// A classical strategy on the full player ring: player `p` (1-indexed) maps the input
/// vector of all players to its output triple.
pub trait LocalStrategy: Sync {
    fn respond(&self, player: usize, inputs: &[u8]) -> [u8; 3];
}

impl<F> LocalStrategy for F
where
    F: Fn(usize, &[u8]) -> [u8; 3] + Sync,
{
    fn respond(&self, player: usize, inputs: &[u8]) -> [u8; 3] {
        self(player, inputs)
    }
}

pub fn cyclic_distance(a: usize, b: usize, players: usize) -> usize {
    let d = a.abs_diff(b) % players;
    d.min(players - d)
}

/// Exact winning probability of a strategy after `rounds` rounds of nearest-neighbour
/// communication, so each player may read inputs of players within distance `rounds`.
///
/// Every response is probed by flipping each corner input outside the light cone; a
/// change in output is reported as [`Error::LightConeViolation`].
pub fn evaluate_lightcone_strategy<S: LocalStrategy + ?Sized>(
    spec: &GameSpec,
    rounds: usize,
    strategy: &S,
) -> Result<f64> {
    let players = spec.players();
    let mut wins = 0;
    for x in all_inputs() {
        let inputs = spec.player_inputs(x);
        let mut outputs = Vec::with_capacity(players);
        for p in 1..=players {
            let out = strategy.respond(p, &inputs);
            for &c in &spec.corners {
                if cyclic_distance(p, c, players) > rounds {
                    let mut probe = inputs.clone();
                    probe[c - 1] ^= 1;
                    if strategy.respond(p, &probe) != out {
                        return Err(Error::LightConeViolation { player: p, corner: c });
                    }
                }
            }
            outputs.push(out);
        }
        if win_check(spec, &Transcript { inputs: x, outputs })? {
            wins += 1;
        }
    }
    Ok(wins as f64 / 8.0)
}

/// Corners play a three-player strategy on their own input; everyone else outputs zeros.
#[derive(Debug, Clone, Copy)]
pub struct CornerEmbedding {
    pub spec: GameSpec,
    pub strategy: ClassicalStrategy,
}

impl LocalStrategy for CornerEmbedding {
    fn respond(&self, player: usize, inputs: &[u8]) -> [u8; 3] {
        match self.spec.corners.iter().position(|&c| c == player) {
            Some(k) => self.strategy.responses[k][inputs[player - 1] as usize],
            None => [0; 3],
        }
    }
}

/// Corners that can see the other two corners' inputs answer perfectly: on a two-ones
/// input the corner at the start of the active edge outputs `(d, b, e) = (1, 0, 1)` and
/// all else is zero. Corners that cannot see both fall back to `fallback`.
#[derive(Debug, Clone, Copy)]
pub struct InputForwarding {
    pub spec: GameSpec,
    pub rounds: usize,
    pub fallback: ClassicalStrategy,
}

impl LocalStrategy for InputForwarding {
    fn respond(&self, player: usize, inputs: &[u8]) -> [u8; 3] {
        let Some(k) = self.spec.corners.iter().position(|&c| c == player) else {
            return [0; 3];
        };
        let players = self.spec.players();
        let sees_all = self
            .spec
            .corners
            .iter()
            .all(|&c| cyclic_distance(player, c, players) <= self.rounds);
        if !sees_all {
            return self.fallback.responses[k][inputs[player - 1] as usize];
        }
        let x = self.spec.corners.map(|c| inputs[c - 1]);
        let ones: u8 = x.iter().sum();
        if ones == 2 && x[k] == 1 && x[(k + 1) % 3] == 1 {
            [1, 0, 1]
        } else {
            [0; 3]
        }
    }
}

/// Every player always outputs the same triple.
#[derive(Debug, Clone, Copy)]
pub struct ConstantOutput(pub [u8; 3]);

impl LocalStrategy for ConstantOutput {
    fn respond(&self, _player: usize, _inputs: &[u8]) -> [u8; 3] {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_code_round_trip() {
        let s = ClassicalStrategy::from_code(0b101_011 << 6);
        assert_eq!(s.responses[1][0], [1, 1, 0]);
        assert_eq!(s.responses[1][1], [1, 0, 1]);
        assert_eq!(s.responses[0], [[0; 3]; 2]);
    }

    #[test]
    fn all_zero_strategy_loses_two_ones_inputs() {
        let s = ClassicalStrategy::from_code(0);
        assert_eq!(s.win_probability(), 5.0 / 8.0);
    }

    #[test]
    fn distance_on_ring() {
        assert_eq!(cyclic_distance(1, 6, 6), 1);
        assert_eq!(cyclic_distance(2, 5, 6), 3);
        assert_eq!(cyclic_distance(3, 3, 6), 0);
    }
}
