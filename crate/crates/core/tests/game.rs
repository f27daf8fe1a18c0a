mod common;

use common::{random_density, trivialize};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sptgame::game::*;
use sptgame::model::*;
use sptgame::pauli::{symmetry, GroupElement};
use sptgame::thermal::{self, ThermalPoint};

use GroupElement as G;

#[test]
fn theorem1_formula_matches_the_win_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..10 {
        let rho = random_density(6, &mut rng);
        for (g, h) in G::ordered_pairs() {
            let spec = GameSpec::new(6, g, h).unwrap();
            let edges = spec.edges().map(|(p, q)| {
                let e = expectation_set(&rho, g, h, p, q).unwrap();
                (e.twisted, e.ug_twisted)
            });
            let e = expectation_set(&rho, g, h, 1, 2).unwrap();
            let direct = exact_win_prob(&spec, &rho).unwrap();
            assert!((quantum_win_prob_edges(e.u_g, e.u_h, e.u_gh, &edges) - direct).abs() < 1e-12, "state {k}");
        }
    }
    // translation-invariant states need only one edge
    let gibbs = gibbs_density(&ModelParams::new(6, 0.4, 0.9, 2.0).unwrap(), 0.5).unwrap();
    for (g, h) in G::ordered_pairs() {
        let e = expectation_set(&gibbs, g, h, 1, 2).unwrap();
        let direct = exact_win_prob(&GameSpec::new(6, g, h).unwrap(), &gibbs).unwrap();
        assert!((quantum_win_prob(&e) - direct).abs() < 1e-12);
    }
}

#[test]
fn sampled_play_converges_to_theorem1() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in [6, 8] {
        let params = ModelParams::new(n, rng.gen_range(0.0..1.5), rng.gen_range(0.0..1.5), 2.0).unwrap();
        let gibbs = gibbs_density(&params, rng.gen_range(0.2..1.0)).unwrap();
        for (g, h) in [(G::Z, G::X), (G::X, G::Y)] {
            let spec = GameSpec::spread(n, g, h).unwrap();
            let exact = exact_win_prob(&spec, &gibbs).unwrap();
            let s = play_sampled(&spec, &gibbs, 4000, 77).unwrap();
            let sigma = (exact * (1.0 - exact) / 4000.0).sqrt();
            assert!((s.rate - exact).abs() <= 3.0 * sigma, "n={n} {g}{h}: {} vs {exact}", s.rate);
        }
    }
}

#[test]
fn theorem2_graph_diagonal_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for n in [6, 8, 10] {
        let params = ModelParams::new(n, rng.gen_range(0.0..1.5), rng.gen_range(0.0..1.5), 2.0).unwrap();
        let gibbs = gibbs_density(&params, rng.gen_range(0.2..1.5)).unwrap();
        let diag = gibbs.graph_diagonal().unwrap();
        for (g, h) in G::ordered_pairs() {
            let spec = GameSpec::spread(n, g, h).unwrap();
            let a = win_prob_from_graph_diagonal(&spec, &diag).unwrap();
            let b = exact_win_prob(&spec, &gibbs).unwrap();
            assert!((a - b).abs() < 1e-10, "n={n} {g}{h}: {a} vs {b}");
        }
    }
}

#[test]
fn trivial_states_never_beat_13_16() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let rho = random_density(6, &mut rng);
        let (g, h) = G::ordered_pairs()[rng.gen_range(0..6)];
        let spec = GameSpec::new(6, g, h).unwrap();
        let trivial = trivialize(&rho, &spec);
        let e = expectation_set(&trivial, g, h, 1, 2).unwrap();
        assert!(e.twisted.abs() < 1e-12 && e.ug_twisted.abs() < 1e-12);
        assert!(exact_win_prob(&spec, &trivial).unwrap() <= 13.0 / 16.0 + 1e-10);
    }
}

#[test]
fn symmetric_trivial_state_reaches_13_16() {
    let spec = GameSpec::new(6, G::Z, G::X).unwrap();
    let c = DensityMatrix::from_pure(&cluster_state(6).unwrap()).unwrap();
    let trivial = trivialize(&c, &spec);
    for g in G::NONTRIVIAL {
        assert!((trivial.expectation(&symmetry(g, 6).unwrap()).unwrap() - 1.0).abs() < 1e-12);
    }
    assert!((exact_win_prob(&spec, &trivial).unwrap() - 13.0 / 16.0).abs() < 1e-12);
}

#[test]
fn sop_at_one_third_sits_on_the_classical_bound() {
    let e = ExpectationSet { u_g: 1.0, u_h: 1.0, u_gh: 1.0, twisted: -1.0 / 3.0, ug_twisted: -1.0 / 3.0 };
    assert!((quantum_win_prob(&e) - 7.0 / 8.0).abs() < 1e-15);
}

#[test]
fn cluster_fidelity_bounds_p_min_from_below() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let rho = random_density(6, &mut rng);
        let b = cluster_fidelity_bound(&rho, [1, 2, 3]).unwrap();
        assert!(b.fidelity <= b.p_min.value + 1e-12, "{} > {}", b.fidelity, b.p_min.value);
    }
}

#[test]
fn cluster_state_wins_every_sampled_round() {
    let psi = cluster_state(6).unwrap();
    for (g, h) in G::ordered_pairs() {
        let s = play_sampled(&GameSpec::new(6, g, h).unwrap(), &psi, 2000, 1).unwrap();
        assert_eq!(s.wins, 2000);
    }
}

#[test]
fn classical_optimum_is_seven_eighths() {
    let best = classical_optimum_3player();
    assert_eq!(best.value, 7.0 / 8.0);
    assert_eq!(best.value_fixed_b, 7.0 / 8.0);
    assert_eq!(best.strategies, 1 << 18);
    assert_eq!(best.perfect, 0);
    assert_eq!(best.witness.win_probability(), 7.0 / 8.0);
}

#[test]
fn thermal_cluster_minimum_ignores_corner_spacing() {
    for n in [12, 18, 24] {
        let players = n / 2;
        let layouts: Vec<[usize; 3]> = vec![
            [1, 1 + players / 3, 1 + 2 * players / 3],
            [1, 2, 3],
            [1, 2, players],
            [2, 4, players - 1],
        ];
        for t in [0.2, 0.4, 1.0] {
            let tp = ThermalPoint::at_temperature(n, t, 2.0).unwrap();
            let reference = thermal::min_win_over_pairs(&tp, layouts[0]).unwrap();
            assert!((reference.value - thermal::min_win(&tp)).abs() < 1e-12);
            for c in &layouts[1..] {
                assert_eq!(thermal::min_win_over_pairs(&tp, *c).unwrap().value, reference.value, "n={n} T={t} {c:?}");
            }
        }
    }
}
