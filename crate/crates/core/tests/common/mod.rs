#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sptgame::game::GameSpec;
use sptgame::model::*;
use sptgame::pauli::{symmetry, twisted_sop, GroupElement as G, Pauli, PauliString};

/// Single-site Pauli anticommuting with `t` and commuting with `u`.
pub fn killer(t: &PauliString, u: &PauliString) -> PauliString {
    let n = t.num_qubits();
    for j in 1..=n {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            let w = PauliString::single(n, j, p).unwrap();
            if !w.commutes_with(t).unwrap() && w.commutes_with(u).unwrap() {
                return w;
            }
        }
    }
    panic!("no single-site twirl kills {t}");
}

/// Twirls away `<T_e>` and `<U(g) T_e>` on every edge while keeping all `<U>`.
pub fn trivialize(rho: &DensityMatrix, spec: &GameSpec) -> DensityMatrix {
    let n = spec.n;
    let ug = symmetry(spec.g, n).unwrap();
    let mut out = rho.clone();
    for (p, q) in spec.edges() {
        let t = twisted_sop(spec.g, spec.h, p, q, n).unwrap();
        // prefer a twirl that keeps every <U(k)>, else only <U(g)>
        let w = killer_all(&t, n).unwrap_or_else(|| killer(&t, &ug));
        out = out.twirl(&w).unwrap();
    }
    out
}

pub fn killer_all(t: &PauliString, n: usize) -> Option<PauliString> {
    let us: Vec<PauliString> = G::NONTRIVIAL.iter().map(|&g| symmetry(g, n).unwrap()).collect();
    for j in 1..n {
        for a in [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z] {
            for b in [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z] {
                let mut f = vec![];
                if a != Pauli::I {
                    f.push((j, a));
                }
                if b != Pauli::I {
                    f.push((j + 1, b));
                }
                if f.is_empty() {
                    continue;
                }
                let w = PauliString::from_sites(n, &f).unwrap();
                if !w.commutes_with(t).unwrap() && us.iter().all(|u| w.commutes_with(u).unwrap()) {
                    return Some(w);
                }
            }
        }
    }
    None
}

pub fn random_density(n: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    match rng.gen_range(0..3) {
        0 => DensityMatrix::from_pure(&StateVector::random(n, rng).unwrap()).unwrap(),
        1 => {
            let p = ModelParams::new(n, rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0), 2.0).unwrap();
            gibbs_density(&p, rng.gen_range(0.05..2.0)).unwrap().to_density().unwrap()
        }
        _ => {
            let c = DensityMatrix::from_pure(&cluster_state(n).unwrap()).unwrap();
            let noise = DensityMatrix::from_pure(&StateVector::random(n, rng).unwrap()).unwrap();
            c.mix(&noise, rng.gen_range(0.0..0.5)).unwrap().dephase_z(rng.gen_range(0.0..0.2))
        }
    }
}
