use proptest::prelude::*;
use sptgame::pauli::*;

use GroupElement as G;

fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliString> {
    (proptest::collection::vec(0u8..4, n), 0u8..4).prop_map(move |(ops, phase)| {
        let factors: Vec<(usize, Pauli)> = ops
            .iter()
            .enumerate()
            .filter(|(_, &o)| o != 0)
            .map(|(i, &o)| (i + 1, [Pauli::X, Pauli::Y, Pauli::Z][o as usize - 1]))
            .collect();
        PauliString::from_sites(n, &factors).unwrap().times_phase(phase)
    })
}

fn index_strategy(n: usize) -> impl Strategy<Value = KappaIndex> {
    proptest::collection::vec(any::<bool>(), n)
        .prop_map(move |bits| KappaIndex::from_sites(n, (1..=n).filter(|&j| bits[j - 1])))
}

fn stabilizer_product(r: &KappaIndex) -> PauliString {
    let n = r.num_sites();
    r.sites().iter().fold(PauliString::identity(n), |acc, &j| &acc * &stabilizer(j, n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn commutation_matches_phase_difference(a in pauli_strategy(9), b in pauli_strategy(9)) {
        let ab = &a * &b;
        let ba = &b * &a;
        let anti = (ab.phase() + 4 - ba.phase()) % 4 == 2;
        prop_assert!(a.commutes_with(&b).unwrap() ^ anti);
        prop_assert!(ab.same_support(&ba));
    }

    #[test]
    fn kappa_is_a_homomorphism(r1 in index_strategy(10), r2 in index_strategy(10)) {
        let prod = &kappa(&r1).unwrap() * &kappa(&r2).unwrap();
        let form = kappa_decompose(&prod).unwrap().unwrap();
        prop_assert_eq!(form.index, r1.xor(&r2));
        prop_assert_eq!(form.sign, 1);
    }

    #[test]
    fn kappa_form_expands_back(r in index_strategy(12), negate in any::<bool>()) {
        let mut p = stabilizer_product(&r);
        if negate {
            p = p.negated();
        }
        let form = kappa_decompose(&p).unwrap().unwrap();
        let mut back = stabilizer_product(&form.index);
        if form.sign < 0 {
            back = back.negated();
        }
        prop_assert_eq!(back, p);
    }

    #[test]
    fn multiplication_is_associative(a in pauli_strategy(5), b in pauli_strategy(5), c in pauli_strategy(5)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }
}

#[test]
fn symmetries_square_to_identity() {
    for n in [2, 6, 12, 64, 130] {
        for g in [G::E, G::X, G::Y, G::Z] {
            let u = symmetry(g, n).unwrap();
            assert_eq!(&u * &u, PauliString::identity(n));
        }
    }
}

#[test]
fn twisted_sops_are_hermitian_involutions() {
    for n in [6, 8, 16, 64] {
        let blocks = n / 2;
        for (g, h) in G::ordered_pairs() {
            for (p, q) in [(1, 2), (1, blocks - 1), (blocks, blocks + 1), (2, blocks / 2 + 1)] {
                if q <= p {
                    continue;
                }
                let t = twisted_sop(g, h, p, q, n).unwrap();
                assert!(t.is_hermitian(), "n={n} {g}{h} [{p},{q}]");
                assert_eq!(&t * &t, PauliString::identity(n));
                let s = sop(g, p, q, n).unwrap();
                assert!(s.is_hermitian());
                assert!(kappa_decompose(&s).unwrap().is_some(), "SOP stabilizes the cluster state");
            }
        }
    }
}

#[test]
fn boundary_operators_recombine_to_the_local_symmetry() {
    for g in G::NONTRIVIAL {
        assert_eq!(&boundary_right(g) * &boundary_left(g), local_symmetry(g));
    }
}

#[test]
fn trivial_element_is_rejected() {
    assert!(sop(G::E, 1, 2, 8).is_err());
    assert!(twisted_sop(G::X, G::E, 1, 2, 8).is_err());
    assert!(twisted_sop(G::X, G::X, 1, 2, 8).is_err());
}
