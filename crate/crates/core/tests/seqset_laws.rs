//! Sequence-set identities, checked against brute force over small boxes.

use proptest::prelude::*;
use qtower::seqsets::{bump, code_template, enumerate, h_member, higman_code, member, shift, Seq, SetId};

fn seq_strategy() -> impl Strategy<Value = Seq> {
    (-6i64..6, prop::collection::vec(-3i64..=3, 0..7)).prop_map(|(o, c)| Seq::new(o, c))
}

/// Every sequence with support in `[lo, hi]` and entries in `[-abs, abs]`.
fn box_sequences(lo: i64, hi: i64, abs: i64) -> Vec<Seq> {
    let width = (hi - lo + 1) as usize;
    let mut out = Vec::new();
    let mut values = vec![-abs; width];
    loop {
        out.push(Seq::new(lo, values.clone()));
        let mut pos = 0;
        loop {
            if pos == width {
                return out;
            }
            if values[pos] < abs {
                values[pos] += 1;
                break;
            }
            values[pos] = -abs;
            pos += 1;
        }
    }
}

/// Membership written directly from the set descriptions, without using
/// any helper of the library.
fn oracle(set: SetId, f: &Seq) -> bool {
    let in_b = |x: i64, y: i64| x == 0 || x == y + 1;
    let omega = |g: &dyn Fn(i64) -> i64, lo: i64, hi: i64| {
        (lo..0).all(|i| g(i) == 0) && (0..=hi / 2 + 1).all(|i| in_b(g(2 * i), g(2 * i + 1)))
    };
    let (lo, hi) = f.support().unwrap_or((0, 0));
    let lo = lo.min(0) - 2;
    let hi = hi.max(0) + 2;
    match set {
        SetId::B => (lo..=hi).all(|i| i == 0 || i == 1 || f.eval(i) == 0) && in_b(f.eval(0), f.eval(1)),
        SetId::Omega2B => omega(&|i| f.eval(i), lo, hi),
        SetId::SigmaOmega2B => omega(&|i| f.eval(i - 1), lo, hi + 1),
        SetId::C => oracle(SetId::Omega2B, f) && oracle(SetId::SigmaOmega2B, f),
        SetId::D => (lo..=hi).all(|i| i == 5 || i == 6 || f.eval(i) == 0) && f.eval(5) == f.eval(6) - 2,
        SetId::F => (lo..=hi).all(|i| (0..=18).contains(&i) || f.eval(i) == 0) && f.eval(5) >= 2,
        SetId::H => (-20..=20).any(|n| *f == code_template(2 + n)),
        SetId::T => oracle(SetId::F, f) && oracle(SetId::H, f),
    }
}

proptest! {
    #[test]
    fn bump_and_shift_commute(f in seq_strategy(), j in -8i64..8, k in -5i64..5, s in prop_oneof![Just(1i64), Just(-1i64)]) {
        prop_assert_eq!(shift(&bump(&f, j, s), k), bump(&shift(&f, k), j + k, s));
        prop_assert_eq!(bump(&bump(&f, j, s), j, -s), f.clone());
        prop_assert_eq!(shift(&shift(&f, k), -k), f);
    }

    #[test]
    fn render_parse_round_trip(f in seq_strategy()) {
        prop_assert_eq!(f.to_string().parse::<Seq>().unwrap(), f);
    }

    #[test]
    fn omega2b_is_closed_under_appending_pairs(n in -4i64..4, choice in any::<bool>(), m in -3i64..3) {
        let start = Seq::from_values(&[m + 1, m, 0, m]);
        prop_assert!(member(SetId::Omega2B, &start));
        let pair = if choice { [0, n] } else { [n + 1, n] };
        let mut values = vec![m + 1, m, 0, m];
        values.extend(pair);
        prop_assert!(member(SetId::Omega2B, &Seq::from_values(&values)));
    }

    #[test]
    fn membership_matches_oracle(f in seq_strategy()) {
        for set in [SetId::B, SetId::Omega2B, SetId::SigmaOmega2B, SetId::C, SetId::D, SetId::F] {
            prop_assert_eq!(member(set, &f), oracle(set, &f), "{} {}", set.name(), f);
        }
    }
}

#[test]
fn enumeration_agrees_with_brute_force() {
    let (len, abs) = (3, 2);
    let all = box_sequences(-len, len, abs);
    for set in [SetId::B, SetId::Omega2B, SetId::SigmaOmega2B, SetId::C, SetId::D] {
        let mut expected: Vec<Seq> = all.iter().filter(|f| oracle(set, f)).cloned().collect();
        expected.sort();
        assert_eq!(enumerate(set, len, abs), expected, "set {}", set.name());
    }
}

#[test]
fn f_enumeration_agrees_with_brute_force() {
    let (len, abs) = (6, 2);
    let mut expected: Vec<Seq> = box_sequences(0, len, abs).into_iter().filter(|f| oracle(SetId::F, f)).collect();
    expected.sort();
    assert_eq!(enumerate(SetId::F, len, abs), expected);
}

#[test]
fn members_of_c_are_nonnegative() {
    for f in enumerate(SetId::C, 6, 4) {
        assert!(f.coeffs().iter().all(|&v| v >= 0), "{f}");
    }
}

#[test]
fn template_lies_in_t_exactly_for_nonnegative_parameters() {
    for n in -10..=10 {
        let h = h_member(n);
        assert!(member(SetId::H, &h));
        assert_eq!(member(SetId::T, &h), n >= 0, "n = {n}");
        if n >= 0 {
            assert_eq!(h, higman_code(2 + n).unwrap());
        }
    }
}
