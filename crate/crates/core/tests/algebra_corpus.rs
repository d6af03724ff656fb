use num_bigint::BigUint;
use quasilab::identity::{builtin, check_identity, n1_equivalence_report};
use quasilab::latin::{enumerate_latin_squares, sample_latin_squares, to_quasigroup};
use quasilab::measure::solve_quasi_invariant;
use quasilab::perm_group::{lmlt, mlt, rmlt, DEFAULT_ELEMENT_CAP};
use quasilab::{FiniteQuasigroup, Perm, PermGroup, Rational};

fn perm(images: &[usize]) -> Perm {
    Perm::from_images(images.to_vec()).unwrap()
}

fn group_table(degree: usize, gens: &[Perm]) -> FiniteQuasigroup {
    let g = PermGroup::generate(degree, gens).unwrap();
    FiniteQuasigroup::from_group_elements(&g.elements(DEFAULT_ELEMENT_CAP).unwrap())
}

fn small_groups() -> Vec<(&'static str, FiniteQuasigroup)> {
    let mut out: Vec<_> = (1..=8)
        .map(|n| ("cyclic", FiniteQuasigroup::cyclic(n)))
        .collect();
    out.push((
        "klein",
        group_table(4, &[perm(&[1, 0, 3, 2]), perm(&[2, 3, 0, 1])]),
    ));
    out.push(("s3", group_table(3, &[perm(&[1, 2, 0]), perm(&[1, 0, 2])])));
    out.push((
        "d4",
        group_table(4, &[perm(&[1, 2, 3, 0]), perm(&[0, 3, 2, 1])]),
    ));
    out.push((
        "z2_cubed",
        group_table(
            6,
            &[
                perm(&[1, 0, 2, 3, 4, 5]),
                perm(&[0, 1, 3, 2, 4, 5]),
                perm(&[0, 1, 2, 3, 5, 4]),
            ],
        ),
    ));
    out.push((
        "z2_z4",
        group_table(6, &[perm(&[1, 0, 2, 3, 4, 5]), perm(&[0, 1, 3, 4, 5, 2])]),
    ));
    // i = (0 2 1 3)(4 6 5 7), j = (0 4 1 5)(2 7 3 6)
    out.push((
        "q8",
        group_table(
            8,
            &[
                perm(&[2, 3, 1, 0, 6, 7, 5, 4]),
                perm(&[4, 5, 7, 6, 1, 0, 2, 3]),
            ],
        ),
    ));
    out
}

#[test]
fn group_tables_have_regular_multiplication_groups() {
    let expected_orders = [1, 2, 3, 4, 5, 6, 7, 8, 4, 6, 8, 8, 8, 8];
    for ((name, q), n) in small_groups().iter().zip(expected_orders) {
        assert_eq!(q.order(), n, "{name}");
        assert!(q.is_loop() && q.is_associative(), "{name}");
        assert_eq!(lmlt(q).order(), &BigUint::from(n), "{name}");
        assert_eq!(rmlt(q).order(), &BigUint::from(n), "{name}");
        assert!(lmlt(q).is_transitive());
    }
}

#[test]
fn mlt_of_groups_is_inner_times_regular() {
    // |Mlt(G)| = |G|·|Inn(G)| = |G|²/|Z(G)|
    let expected = [("s3", 36u32), ("d4", 32), ("q8", 32), ("klein", 4)];
    let groups = small_groups();
    for (name, order) in expected {
        let q = &groups.iter().find(|(n, _)| *n == name).unwrap().1;
        assert_eq!(mlt(q).order(), &BigUint::from(order), "{name}");
    }
}

#[test]
fn groups_satisfy_every_builtin_identity_but_commutativity_is_selective() {
    for (name, q) in small_groups() {
        for id in ["N1", "moufang_left", "associativity"] {
            assert!(
                check_identity(&q, &builtin(id).unwrap()).unwrap().holds,
                "{name} {id}"
            );
        }
        let abelian = check_identity(&q, &builtin("commutativity").unwrap())
            .unwrap()
            .holds;
        assert_eq!(abelian, !matches!(name, "s3" | "d4" | "q8"), "{name}");
    }
}

#[test]
fn translation_form_agrees_exhaustively_through_order_five() {
    for n in 1..=5 {
        let mut satisfiers = 0u64;
        enumerate_latin_squares(n, |sq| {
            let q = to_quasigroup(n, sq);
            let r = n1_equivalence_report(&q);
            assert!(r.agree, "{}", q.to_table_text());
            if r.pointwise {
                satisfiers += 1;
                assert!(q.is_loop());
            }
        })
        .unwrap();
        assert!(satisfiers > 0);
    }
}

#[test]
fn translation_form_agrees_on_random_order_six() {
    for sq in sample_latin_squares(6, 2000, 11).unwrap() {
        assert!(n1_equivalence_report(&to_quasigroup(6, &sq)).agree);
    }
}

#[test]
fn associativity_identity_matches_direct_check() {
    let associativity = builtin("associativity").unwrap();
    for n in 1..=4 {
        enumerate_latin_squares(n, |sq| {
            let q = to_quasigroup(n, sq);
            let holds = check_identity(&q, &associativity).unwrap().holds;
            assert_eq!(holds, q.is_associative());
            // an associative quasigroup is a group, hence a loop
            if holds {
                assert!(q.is_loop());
                assert_eq!(lmlt(&q).order(), &BigUint::from(n));
            }
        })
        .unwrap();
    }
}

#[test]
fn quasi_invariant_solutions_are_counting_measures() {
    for sq in sample_latin_squares(7, 50, 3).unwrap() {
        let q = to_quasigroup(7, &sq);
        let sol = solve_quasi_invariant::<Rational>(&q).unwrap();
        assert_eq!(sol.dimension, 1);
        assert!(sol.left_cocycle.is_trivial() && sol.right_cocycle.is_trivial());
        assert!(sol.lmlt_transitive);
        assert!(sol
            .measure
            .weights()
            .iter()
            .all(|w| *w == Rational::from_integer(1.into())));
    }
}
