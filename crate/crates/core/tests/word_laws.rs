//! Algebraic laws of reduced words and substitution.

use proptest::prelude::*;
use qtower::seqsets::{higman_code, shift, Seq};
use qtower::words::{a_f, abc, b_f, b_i, seq_of_word, substitute, w_f, GenId, Morphism, Word};

fn alphabet() -> Vec<GenId> {
    ["a", "b", "c", "x"].iter().map(|n| GenId::named(n)).collect()
}

/// Words as unreduced letter lists, so that reduction itself is exercised.
fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0usize..4, prop_oneof![Just(-1i64), Just(1i64), -3i64..=3]), 0..max_len).prop_map(
        |letters| {
            let gens = alphabet();
            let mut w = Word::identity();
            for (g, e) in letters {
                w.push(gens[g], e);
            }
            w
        },
    )
}

/// Independent reduction oracle over a flat letter list.
fn reduce_letters(letters: &[(GenId, i64)]) -> Vec<(GenId, i64)> {
    let mut stack: Vec<(GenId, i64)> = Vec::new();
    for &(g, s) in letters {
        if stack.last() == Some(&(g, -s)) {
            stack.pop();
        } else {
            stack.push((g, s));
        }
    }
    stack
}

fn seq_strategy() -> impl Strategy<Value = Seq> {
    (-4i64..4, prop::collection::vec(-3i64..=3, 0..6)).prop_map(|(o, c)| Seq::new(o, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn multiplication_is_associative(u in word_strategy(12), v in word_strategy(12), w in word_strategy(12)) {
        prop_assert_eq!(u.multiply(&v).multiply(&w), u.multiply(&v.multiply(&w)));
    }

    #[test]
    fn inverse_cancels(u in word_strategy(16)) {
        prop_assert!(u.multiply(&u.inverse()).is_identity());
        prop_assert!(u.inverse().multiply(&u).is_identity());
        prop_assert_eq!(u.inverse().inverse(), u);
    }

    #[test]
    fn product_matches_reduction_oracle(u in word_strategy(12), v in word_strategy(12)) {
        let flat: Vec<(GenId, i64)> = u.letters().chain(v.letters()).collect();
        let expected: Vec<(GenId, i64)> = reduce_letters(&flat);
        let got: Vec<(GenId, i64)> = u.multiply(&v).letters().collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn display_parse_round_trip(u in word_strategy(16)) {
        prop_assert_eq!(Word::parse(&u.to_string()).unwrap(), u);
    }

    #[test]
    fn substitution_is_a_homomorphism(
        u in word_strategy(8),
        v in word_strategy(8),
        images in prop::collection::vec(word_strategy(5), 4),
    ) {
        let m = Morphism::new("F", "F", alphabet().into_iter().zip(images));
        let lhs = substitute(&u.multiply(&v), &m).unwrap();
        let rhs = substitute(&u, &m).unwrap().multiply(&substitute(&v, &m).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(substitute(&u.inverse(), &m).unwrap(), substitute(&u, &m).unwrap().inverse());
    }

    #[test]
    fn conjugating_b_f_by_c_shifts(f in seq_strategy()) {
        let (_, _, c) = abc();
        prop_assert_eq!(b_f(&f).conjugate(&c.word()), b_f(&shift(&f, 1)));
        prop_assert_eq!(a_f(&f), abc().0.word().conjugate(&b_f(&f)));
    }

    #[test]
    fn b_f_is_a_product_of_b_i(f in seq_strategy()) {
        let expected = Word::product(f.entries().map(|(i, e)| b_i(i).pow(e)).collect::<Vec<_>>().iter());
        prop_assert_eq!(b_f(&f), expected);
    }

    #[test]
    fn code_round_trip_on_even_windows(values in prop::collection::vec(-4i64..=4, 0..10)) {
        let (x, y) = (GenId::named("x"), GenId::named("y"));
        let f = Seq::from_values(&values);
        // w_f merges nothing when no interior coefficient vanishes.
        if values.iter().all(|&v| v != 0) {
            prop_assert_eq!(seq_of_word(&w_f(&f, x, y), x, y).unwrap(), f);
        }
    }
}

#[test]
fn code_of_relator_for_small_indices() {
    let (x, y) = (GenId::named("x"), GenId::named("y"));
    for k in 2..=40 {
        let code = higman_code(k).unwrap();
        let w = w_f(&code, x, y);
        assert_eq!(seq_of_word(&w, x, y).unwrap(), code, "k = {k}");
    }
}

#[test]
fn substitute_example_with_ordinal_generator() {
    // x is sent to a conjugate of y by a power of x; substituting into the
    // commutator [x, y] must be reduced and equal to the product of images.
    let (x, y) = (GenId::named("x"), GenId::named("y"));
    let gx = y.word().conjugate(&x.pow(95));
    let m = Morphism::new("S", "T", [(x, gx.clone()), (y, y.word())]);
    let got = substitute(&x.word().commutator(&y.word()), &m).unwrap();
    assert_eq!(got, gx.commutator(&y.word()));
    assert_eq!(got.to_string(), "x^-95 y^-1 x^95 y^-1 x^-95 y x^95 y");
}
