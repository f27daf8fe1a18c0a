use proptest::prelude::*;
use sptgame::fermion::*;
use sptgame::game::expectation_set;
use sptgame::model::{gibbs_density, ModelParams, QuantumState};
use sptgame::pauli::{twisted_sop, GroupElement, Pauli, PauliString};
use sptgame::thermal::{self, ThermalPoint};

use GroupElement as G;

fn five(e: &sptgame::game::ExpectationSet) -> [f64; 5] {
    [e.u_g, e.u_h, e.u_gh, e.twisted, e.ug_twisted]
}

#[test]
fn n16_twisted_zx_determinant_block() {
    let t = twisted_sop(G::Z, G::X, 3, 6, 16).unwrap();
    let pq = jw_map(&t.hadamard_conjugate());
    let (sign, rows, cols) = wick_submatrix(&pq).unwrap().unwrap();
    assert_eq!(rows, vec![2, 4, 5, 7, 9, 12, 14, 16]);
    assert_eq!(cols, vec![2, 4, 6, 7, 9, 11, 14, 16]);
    assert_eq!(sign, -1.0);
}

#[test]
fn matches_dense_gibbs_on_the_x_axis() {
    for (n, j, t) in [(8, 0.3, 0.4), (8, 1.5, 0.4), (10, 1.0, 0.4), (12, 0.7, 0.25), (12, 2.0, 1.0)] {
        let dense = gibbs_density(&ModelParams::new(n, j, 0.0, 2.0).unwrap(), t).unwrap();
        let solver = AxisSolver::new(Axis::X, j, n, 2.0).unwrap();
        let c = solver.correlation(t).unwrap();
        for (g, h) in G::ordered_pairs() {
            for q in 2..=n / 2 {
                let d = five(&expectation_set(&dense, g, h, 1, q).unwrap());
                let f = five(&solver.expectation_set(&c, (g, h), (1, q)).unwrap());
                for k in 0..5 {
                    assert!((d[k] - f[k]).abs() < 1e-9, "n={n} J={j} T={t} {g}{h} q={q} k={k}: {} vs {}", d[k], f[k]);
                }
            }
        }
    }
}

#[test]
fn cluster_limit_matches_closed_forms_at_n64() {
    let n = 64;
    let solver = AxisSolver::new(Axis::X, 0.0, n, 2.0).unwrap();
    for t in [0.2, 0.327, 0.6] {
        let c = solver.correlation(t).unwrap();
        let tp = ThermalPoint::at_temperature(n, t, 2.0).unwrap();
        for (g, h) in G::ordered_pairs() {
            for q in [2, 12, 31] {
                let f = five(&solver.expectation_set(&c, (g, h), (1, q)).unwrap());
                let e = five(&thermal::expectation_set(g, h, 1, q, &tp).unwrap());
                for k in 0..5 {
                    assert!((f[k] - e[k]).abs() < 1e-10, "T={t} {g}{h} q={q} k={k}");
                }
            }
        }
    }
}

#[test]
fn single_sector_misses_the_parity_projection() {
    // The periodic form alone describes the F = -1 sector, which holds no ground state.
    let n = 16;
    let sector = AxisSolver::with_projection(Axis::X, 0.0, n, 2.0, Projection::Sector(Boundary::Periodic)).unwrap();
    let exact = AxisSolver::new(Axis::X, 0.0, n, 2.0).unwrap();
    let ux = sptgame::pauli::symmetry(G::X, n).unwrap();
    let e = exact.expectation(&ux, &exact.correlation(0.0).unwrap()).unwrap();
    let s = sector.expectation(&ux, &sector.correlation(0.0).unwrap()).unwrap();
    assert!((e - 1.0).abs() < 1e-9);
    assert!((s + 1.0).abs() < 1e-9);
}

#[test]
fn z_expectation_is_minus_the_diagonal() {
    let n = 10;
    let modes = analytic_modes(0.8, n, Boundary::Antiperiodic).unwrap();
    let g = correlation_matrix(&modes, 1.3).unwrap();
    for j in 1..=n {
        let z = PauliString::single(n, j, Pauli::Z).unwrap();
        let v = wick_expectation(&jw_map(&z), &g).unwrap();
        assert!((v + g.g[(j - 1, j - 1)]).abs() < 1e-14);
    }
}

#[test]
fn odd_majorana_counts_vanish() {
    let n = 8;
    let solver = AxisSolver::new(Axis::X, 0.6, n, 2.0).unwrap();
    let c = solver.correlation(0.5).unwrap();
    // Z_1 in the original frame maps to a single X, i.e. an odd Majorana string
    let z = PauliString::single(n, 1, Pauli::Z).unwrap();
    assert_eq!(jw_map(&z.hadamard_conjugate()).ops.len() % 2, 1);
    assert_eq!(solver.expectation(&z, &c).unwrap(), 0.0);
}

#[test]
fn zz_axis_reuses_the_x_axis_solution() {
    let x = axis_expectations(0.4, Axis::X, 12, 0.3, 2.0, (G::Z, G::X), (1, 3)).unwrap();
    let zz = axis_expectations(0.4, Axis::ZZ, 12, 0.3, 2.0, (G::Z, G::X), (1, 3)).unwrap();
    assert_eq!(x, zz);
}

#[test]
fn analytic_and_svd_modes_give_the_same_correlations() {
    for j in [0.0, 0.5, 1.0, 1.7] {
        for boundary in [Boundary::Periodic, Boundary::Antiperiodic] {
            let q = build_quadratic(j, 12, boundary).unwrap();
            let a = correlation_matrix(&analytic_modes(j, 12, boundary).unwrap(), 0.9).unwrap();
            let s = correlation_matrix(&svd_modes(&q).unwrap(), 0.9).unwrap();
            assert!((a.g - s.g).abs().max() < 1e-12, "J={j} {boundary:?}");
        }
    }
}

fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliString> {
    proptest::collection::vec(0u8..4, n).prop_map(move |ops| {
        let factors: Vec<(usize, Pauli)> = ops
            .iter()
            .enumerate()
            .filter(|(_, &o)| o != 0)
            .map(|(i, &o)| (i + 1, [Pauli::X, Pauli::Y, Pauli::Z][o as usize - 1]))
            .collect();
        PauliString::from_sites(n, &factors).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jw_map_is_multiplicative(a in pauli_strategy(7), b in pauli_strategy(7)) {
        let prod = jw_map(&(&a * &b));
        let mut cat = jw_map(&a);
        let rhs = jw_map(&b);
        cat.phase = (cat.phase + rhs.phase) % 4;
        cat.ops.extend(rhs.ops);
        prop_assert_eq!(prod, cat.canonical());
    }

    #[test]
    fn canonical_form_ignores_adjacent_swaps(p in pauli_strategy(6), i in 0usize..64) {
        let mut raw = jw_map(&p);
        prop_assume!(raw.ops.len() >= 2);
        let k = i % (raw.ops.len() - 1);
        let before = raw.canonical();
        raw.swap(k);
        raw.swap(k);
        prop_assert_eq!(raw.canonical(), before.clone());
        raw.swap(k);
        prop_assert_ne!(&raw, &before);
        prop_assert_eq!(raw.canonical(), before);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn any_pauli_string_matches_dense(p in pauli_strategy(6), j in 0.0f64..2.0, t in 0.1f64..2.0) {
        let p = p.hermitian_normalized();
        let dense = gibbs_density(&ModelParams::new(6, j, 0.0, 2.0).unwrap(), t).unwrap();
        let solver = AxisSolver::new(Axis::X, j, 6, 2.0).unwrap();
        let c = solver.correlation(t).unwrap();
        let d = dense.expectation(&p).unwrap();
        let f = solver.expectation(&p, &c).unwrap();
        prop_assert!((d - f).abs() < 1e-9, "{} vs {}", d, f);
    }
}
