//! Entry and location classifiers on the synthetic separable fixtures.

mod common;

use encyc::embedder::{Embedder, MockEmbedder};
use encyc::location::{train_location_model, LabeledText, LocationConfig};
use encyc::metrics::Prf;
use encyc::segmenter::{
    train_entry_classifier, truncate_chars, EntryClassifierConfig, TrainingSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn labeled(rel: &str) -> Vec<LabeledText> {
    common::read_jsonl(&common::fixture(rel))
}

fn training_set(rows: &[LabeledText]) -> TrainingSet {
    let mut set = TrainingSet::default();
    for r in rows {
        if r.label {
            set.positives.push(r.text.clone());
        } else {
            set.negatives.push(r.text.clone());
        }
    }
    set
}

fn f1(pred: &[bool], gold: &[bool]) -> Prf {
    let correct = pred.iter().zip(gold).filter(|(p, g)| **p && **g).count();
    Prf::from_counts(
        correct,
        pred.iter().filter(|p| **p).count(),
        gold.iter().filter(|g| **g).count(),
    )
}

fn entry_probs() -> (Vec<f64>, Vec<bool>) {
    let train = labeled("classifiers/entry_train.jsonl");
    let test = labeled("classifiers/entry_test.jsonl");
    let clf =
        train_entry_classifier(&training_set(&train), &EntryClassifierConfig::default()).unwrap();
    let probs = test
        .iter()
        .map(|r| clf.predict_text(&r.text).unwrap().probability)
        .collect();
    (probs, test.iter().map(|r| r.label).collect())
}

fn location_probs() -> (Vec<f64>, Vec<bool>) {
    let train = labeled("classifiers/location_train.jsonl");
    let test = labeled("classifiers/location_test.jsonl");
    let e = MockEmbedder::new(256, 0);
    let (model, _) = train_location_model(&train, &e, &LocationConfig::default()).unwrap();
    let probs = test
        .iter()
        .map(|r| {
            model
                .probability(&e.embed_one(&truncate_chars(&r.text, 200)).unwrap())
                .unwrap()
        })
        .collect();
    (probs, test.iter().map(|r| r.label).collect())
}

fn check_monotone(probs: &[f64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let mut thresholds: Vec<f64> = (0..50).map(|_| rng.gen_range(0.0..1.0)).collect();
    thresholds.sort_by(f64::total_cmp);
    let counts: Vec<usize> = thresholds
        .iter()
        .map(|t| probs.iter().filter(|&&p| p >= *t).count())
        .collect();
    for w in counts.windows(2) {
        assert!(w[1] <= w[0], "{counts:?}");
    }
}

#[test]
fn entry_classifier_held_out_f1() {
    let (probs, gold) = entry_probs();
    let pred: Vec<bool> = probs.iter().map(|&p| p >= 0.5).collect();
    let prf = f1(&pred, &gold);
    assert!(prf.f1 >= 0.95, "{prf:?}");
    assert!(probs.iter().all(|&p| p > 0.0 && p < 1.0));
    check_monotone(&probs);
}

#[test]
fn location_classifier_held_out_f1() {
    let (probs, gold) = location_probs();
    let pred: Vec<bool> = probs.iter().map(|&p| p >= 0.5).collect();
    let prf = f1(&pred, &gold);
    assert!(prf.f1 >= 0.95, "{prf:?}");
    assert!(probs.iter().all(|&p| p > 0.0 && p < 1.0));
    check_monotone(&probs);
}

#[test]
fn location_training_is_deterministic() {
    let train = labeled("classifiers/location_train.jsonl");
    let e = MockEmbedder::new(256, 0);
    let a = train_location_model(&train, &e, &LocationConfig::default())
        .unwrap()
        .0;
    let b = train_location_model(&train, &e, &LocationConfig::default())
        .unwrap()
        .0;
    assert_eq!(a, b);
}
