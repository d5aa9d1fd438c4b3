//! Property tests for the structural invariants.

use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

use riffle_core::general::{
    bd_full_deck, poisson_estimate, poisson_exact, poisson_multi, poisson_multi_exact,
    rot_eta_bound, rot_eta_exact, sep_direct, sep_genfun,
};
use riffle_core::redblack::{redblack_sep, two_shuffle_report, two_shuffle_word_prob, word_prob};
use riffle_core::simulate::{
    enumerate_words, lump, lump_by_pushforward, GroupMeasure, DEFAULT_ENUM_BUDGET,
};
use riffle_core::single_card::{transition_entry, CardMatrix};
use riffle_core::transpose::{
    gelfand_spectrum, transposition_power_entry, transposition_step_matrix,
};
use riffle_core::{binomial, DeckSpec, ExactQ, Word};

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// A two-colour word with `r` reds and `b` blacks in random order.
fn rb_word(max: usize) -> impl Strategy<Value = (usize, usize, Word)> {
    (1..=max, 1..=max).prop_flat_map(|(r, b)| {
        let labels: Vec<u8> = std::iter::repeat_n(0, r)
            .chain(std::iter::repeat_n(1, b))
            .collect();
        Just(labels)
            .prop_shuffle()
            .prop_map(move |l| (r, b, Word::from_labels(l).unwrap()))
    })
}

/// Multiplicities with `parts` types, each in `lo..=hi`, total at most `max_n`.
fn deck(
    parts: std::ops::RangeInclusive<usize>,
    lo: usize,
    hi: usize,
    max_n: usize,
) -> impl Strategy<Value = DeckSpec> {
    parts
        .prop_flat_map(move |m| prop::collection::vec(lo..=hi, m))
        .prop_filter("deck too large", move |d| d.iter().sum::<usize>() <= max_n)
        .prop_map(|d| DeckSpec::new(d).unwrap())
}

fn half_steps() -> impl Strategy<Value = ExactQ> {
    prop_oneof![
        Just(ExactQ::zero()),
        Just(ExactQ::new(1, 2)),
        Just(ExactQ::one())
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn two_colour_law_sums_to_one(r in 1..=5usize, b in 1..=5usize, a in 1..=6u64) {
        let spec = DeckSpec::red_black(r, b).unwrap();
        let total: ExactQ = Word::all(&spec).iter().map(|w| word_prob(r, b, &big(a), w).unwrap()).sum();
        prop_assert_eq!(total, ExactQ::one());
    }

    #[test]
    fn two_shuffle_words_match_general_law((r, b, w) in rb_word(6)) {
        prop_assert_eq!(two_shuffle_word_prob(r, b, &w).unwrap(), word_prob(r, b, &big(2), &w).unwrap());
    }

    #[test]
    fn one_black_card_is_the_bottom_card(n in 2..=20usize, a in 1..=8u64, j in 1..=20usize) {
        let j = 1 + (j - 1) % n;
        let mut labels = vec![0u8; n];
        labels[j - 1] = 1;
        let w = Word::from_labels(labels).unwrap();
        prop_assert_eq!(word_prob(n - 1, 1, &big(a), &w).unwrap(), transition_entry(n, &big(a), n, j).unwrap());
    }

    #[test]
    fn generating_function_equals_direct_sum(spec in deck(1..=4, 1, 5, 10), a in 1..=12u64) {
        let direct = sep_direct(&spec, &big(a), DEFAULT_ENUM_BUDGET).unwrap().sep;
        prop_assert_eq!(sep_genfun(&spec, &big(a)).unwrap().sep, direct);
    }

    #[test]
    fn generating_function_on_distinct_cards(n in 1..=10usize, a in 1..=64u64) {
        let spec = DeckSpec::distinct(n).unwrap();
        prop_assert_eq!(sep_genfun(&spec, &big(a)).unwrap().sep, bd_full_deck(n, &big(a)).unwrap().sep);
    }

    #[test]
    fn generating_function_on_two_colours(r in 1..=13usize, b in 1..=13usize, a in 1..=40u64) {
        let spec = DeckSpec::red_black(r, b).unwrap();
        prop_assert_eq!(sep_genfun(&spec, &big(a)).unwrap().sep, redblack_sep(r, b, &big(a)).unwrap());
    }

    #[test]
    fn extreme_words_are_reverse_and_sorted(spec in deck(2..=3, 1, 3, 7), a in 2..=3u64) {
        let law = enumerate_words(&spec, a, DEFAULT_ENUM_BUDGET).unwrap();
        let lo = law.prob(&Word::reversed(&spec));
        let hi = law.prob(&Word::sorted(&spec));
        for w in Word::all(&spec) {
            let p = law.prob(&w);
            prop_assert!(lo <= p && p <= hi, "{} at a={}", w, a);
        }
    }

    #[test]
    fn two_colour_extremes(r in 1..=4usize, b in 1..=4usize, a in 2..=20u64) {
        let spec = DeckSpec::red_black(r, b).unwrap();
        let lo = word_prob(r, b, &big(a), &Word::reversed(&spec)).unwrap();
        let hi = word_prob(r, b, &big(a), &Word::sorted(&spec)).unwrap();
        for w in Word::all(&spec) {
            let p = word_prob(r, b, &big(a), &w).unwrap();
            prop_assert!(lo <= p && p <= hi);
        }
    }

    #[test]
    fn separation_decreases_over_doublings(spec in deck(1..=6, 1, 8, 30), k in 0..=10u32) {
        let a = BigInt::one() << k;
        let s1 = sep_genfun(&spec, &a).unwrap().sep;
        let s2 = sep_genfun(&spec, &(a * 2)).unwrap().sep;
        prop_assert!(s1 >= ExactQ::zero() && s1 <= ExactQ::one());
        prop_assert!(s2 <= s1);
    }

    #[test]
    fn rule_of_thumb_error_within_bound(spec in deck(2..=6, 3, 12, 30), extra in 0..=200u64) {
        let a = big(2 * spec.types() as u64 + extra);
        let eta = rot_eta_exact(&spec, &a).unwrap();
        prop_assert!(eta.abs() <= rot_eta_bound(&spec, &a).unwrap());
    }

    #[test]
    fn distance_ordering(r in 1..=8usize, b in 1..=8usize) {
        let d = two_shuffle_report(r, b).unwrap();
        prop_assert!(ExactQ::zero() <= d.tv && d.tv <= d.sep && d.sep <= d.linf);
    }

    #[test]
    fn two_factor_sums_within_radius(a in 5..=100i64, xi in half_steps(), r in 2..=6usize, s in 2..=6usize) {
        let a = ExactQ::from(a);
        let est = poisson_estimate(&a, &xi, r, s).unwrap();
        prop_assert!(est.contains(&poisson_exact(&a, &xi, r, s).unwrap()));
    }

    #[test]
    fn multi_factor_sums_within_radius(
        a in 4..=12u64,
        parts in prop::collection::vec((2..=4usize, half_steps()), 2..=3),
    ) {
        let rs: Vec<usize> = parts.iter().map(|p| p.0).collect();
        let xis: Vec<ExactQ> = parts.into_iter().map(|p| p.1).collect();
        let est = poisson_multi(a, &xis, &rs).unwrap();
        prop_assert!(est.contains(&poisson_multi_exact(a, &xis, &rs).unwrap()));
    }

    #[test]
    fn transposition_closed_form_equals_matrix_power(n in 2..=12usize, l in 0..=30u32) {
        let p = transposition_step_matrix(n).unwrap().pow(l).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(p.get(i, j), &transposition_power_entry(n, l, i == j));
            }
        }
    }

    #[test]
    fn multiplicities_count_all_words(n in 1..=200usize) {
        let total: BigInt = gelfand_spectrum(n).unwrap().multiplicities.iter().sum();
        prop_assert_eq!(total, binomial(2 * n as u64, n as i64));
    }

    #[test]
    fn packet_counts_multiply(n in 2..=9usize, a in 1..=6u64, b in 1..=6u64) {
        let pa = CardMatrix::new(n, &big(a)).unwrap();
        let pb = CardMatrix::new(n, &big(b)).unwrap();
        let pab = CardMatrix::new(n, &big(a * b)).unwrap();
        prop_assert_eq!(&pa.matrix().mul(pb.matrix()).unwrap(), pab.matrix());
        prop_assert!(pa.is_cross_symmetric());
        prop_assert!(pa.matrix().is_doubly_stochastic());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lumped_powers_are_kernel_powers(spec in deck(2..=3, 1, 2, 4), a in 2..=3u64, l in 1..=3u32) {
        let q = GroupMeasure::gsr(spec.n(), a).unwrap();
        let k = lump(&q, &spec).unwrap();
        prop_assert_eq!(&k, &lump_by_pushforward(&q, &spec).unwrap());
        let kl = lump(&q.convolution_power(l).unwrap(), &spec).unwrap().kernel;
        prop_assert_eq!(k.kernel.pow(l).unwrap(), kl);
    }
}
