//! Action oracles, conjugate collection and Stallings automata.

use proptest::prelude::*;
use qtower::seqsets::{bump, Seq};
use qtower::verify::{
    collect_conjugates, d_action, kappa_action, kappa_example_u, kappa_example_v, stallings, truncated_pair_intersection_rank,
    uncollect, xi_evaluate, xi_witness, SplitWord,
};
use qtower::words::{abc, b_i, GenId, Word};

fn seven() -> Vec<GenId> {
    ["z", "m", "n", "u", "p", "q", "v"].iter().map(|n| GenId::named(n)).collect()
}

fn word_over(gens: Vec<GenId>, max_len: usize) -> impl Strategy<Value = Word> {
    let k = gens.len();
    prop::collection::vec((0..k, -2i64..=2), 0..max_len).prop_map(move |letters| {
        let mut w = Word::identity();
        for (g, e) in letters {
            w.push(gens[g], e);
        }
        w
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn d_action_bumps_a_f(values in prop::collection::vec(-5i64..=5, 0..19), j in 0i64..19, s in prop_oneof![Just(1i64), Just(-1i64)]) {
        let f = Seq::from_values(&values);
        prop_assert_eq!(d_action(&SplitWord::a_f(&f), j, s), SplitWord::a_f(&bump(&f, j, s)));
    }

    #[test]
    fn kappa_action_is_a_homomorphism(u in word_over(seven(), 8), v in word_over(seven(), 8), which in 1u8..=2, s in prop_oneof![Just(1i64), Just(-1i64)]) {
        prop_assert_eq!(kappa_action(&u.multiply(&v), which, s), kappa_action(&u, which, s).multiply(&kappa_action(&v, which, s)));
        prop_assert_eq!(kappa_action(&kappa_action(&u, which, s), which, -s), u);
    }

    #[test]
    fn collect_then_uncollect_is_identity(w in word_over(vec![GenId::named("x"), GenId::named("y")], 14)) {
        let (x, y) = (GenId::named("x"), GenId::named("y"));
        let (factors, k) = collect_conjugates(&w, x, y).unwrap();
        prop_assert!(factors.iter().all(|&(e, _)| e.abs() == 1));
        prop_assert_eq!(uncollect(&factors, k, x, y), w);
    }

    #[test]
    fn stallings_membership_of_products(choices in prop::collection::vec((0usize..3, prop_oneof![Just(1i64), Just(-1i64)]), 0..10)) {
        let (a, b, c) = abc();
        let gens = vec![Word::parse("a b a^-1").unwrap(), Word::parse("b c^2").unwrap(), Word::parse("c a c").unwrap()];
        let aut = stallings(&gens, &[a, b, c]);
        let mut w = Word::identity();
        for (i, s) in choices {
            w.append(&gens[i].pow(s));
        }
        prop_assert!(aut.membership(&w));
        prop_assert_eq!(aut.rank(), 3);
    }
}

#[test]
fn kappa_examples() {
    let (got, expected) = kappa_example_u();
    assert_eq!(got, expected);
    let (got, expected) = kappa_example_v();
    assert_eq!(got, expected);
}

#[test]
fn xi_witnesses_evaluate_to_shifted_b() {
    for m in 1..=3 {
        for k in 0..=12u64 {
            assert_eq!(xi_evaluate(&xi_witness(m, k), m), Some(b_i(m + k as i64)), "m = {m}, k = {k}");
        }
    }
}

#[test]
fn truncated_pairs_intersect_trivially() {
    for n in 1..=8 {
        assert_eq!(truncated_pair_intersection_rank(n), 0, "n = {n}");
    }
}

#[test]
fn stallings_rejects_non_members() {
    let (a, b, c) = abc();
    let aut = stallings(&[Word::parse("a^2").unwrap(), Word::parse("b").unwrap()], &[a, b, c]);
    assert!(aut.membership(&Word::parse("a^2 b^-3 a^-2").unwrap()));
    assert!(!aut.membership(&Word::parse("a").unwrap()));
    assert!(!aut.membership(&Word::parse("c").unwrap()));
    assert_eq!(aut.rank(), 2);
}
