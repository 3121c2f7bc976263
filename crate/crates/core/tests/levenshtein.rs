//! Edit distance against a plain full-matrix DP written here from the
//! textbook recurrence.

mod common;

use common::oracles::{dp_levenshtein as dp, random_string, ALPHABET};
use encyc::segmenter::{levenshtein, relative_levenshtein};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn ten_thousand_random_pairs_match_dp() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10_000 {
        let a = random_string(&mut rng, 20);
        let b = random_string(&mut rng, 20);
        let d = dp(&a, &b);
        assert_eq!(levenshtein(&a, &b), d, "{a:?} {b:?}");
        if !a.is_empty() {
            assert_eq!(
                relative_levenshtein(&a, &b).unwrap(),
                d as f64 / a.chars().count() as f64
            );
        }
    }
}

#[test]
fn published_examples() {
    assert_eq!(
        relative_levenshtein("Bajasid", "Bajesid").unwrap(),
        1.0 / 7.0
    );
    assert_eq!(
        relative_levenshtein("Qvenneberga", "Kvenneberga").unwrap(),
        1.0 / 11.0
    );
}

fn small() -> impl Strategy<Value = String> {
    proptest::collection::vec(proptest::sample::select(ALPHABET), 0..=20)
        .prop_map(|v| v.into_iter().collect())
}

proptest! {
    #[test]
    fn identity_and_nonnegativity(a in small(), b in small()) {
        if !a.is_empty() {
            prop_assert_eq!(relative_levenshtein(&a, &a).unwrap(), 0.0);
            prop_assert!(relative_levenshtein(&a, &b).unwrap() >= 0.0);
        }
    }

    #[test]
    fn symmetric(a in small(), b in small()) {
        prop_assert_eq!(levenshtein(&a, &b), levenshtein(&b, &a));
    }

    #[test]
    fn triangle_inequality(a in small(), b in small(), c in small()) {
        prop_assert!(dp(&a, &c) <= dp(&a, &b) + dp(&b, &c));
        prop_assert!(levenshtein(&a, &c) <= levenshtein(&a, &b) + levenshtein(&b, &c));
    }
}
