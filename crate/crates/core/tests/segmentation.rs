//! Segmentation of the twelve-page fixture corpus against its hand-written
//! gold list, plus cascade invariants on generated pages.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use encyc::corpus::{normalize_text, parse_page, EditionId, Paragraph};
use encyc::pipeline::Stage;
use encyc::segmenter::{
    match_bold, segment, Entry, SegmentConfig, SegmentationStats, Strategy as Cascade,
};
use proptest::prelude::*;
use serde::Deserialize;

#[derive(Debug, Deserialize, PartialEq)]
struct Expected {
    id: String,
    headword: String,
    strategy: Cascade,
    text: String,
}

#[derive(Debug, Deserialize, PartialEq)]
struct Counts {
    bold: usize,
    index: usize,
    classifier: usize,
    continuation: usize,
    orphan: usize,
    subentry: usize,
}

#[test]
fn fixture_corpus_segments_to_gold() {
    let (_dir, p) = common::fixture_pipeline();
    let start = Instant::now();
    common::run_through(&p, Stage::Segment);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "{elapsed:?}");

    let entries: Vec<Entry> = common::read_jsonl(&p.artifact("entries.jsonl"));
    let expected: Vec<Expected> =
        common::read_jsonl(&common::fixture("segment/expected_entries.jsonl"));
    let got: Vec<Expected> = entries
        .iter()
        .map(|e| Expected {
            id: e.id.clone(),
            headword: e.headword.clone(),
            strategy: e.strategy,
            text: e.text.clone(),
        })
        .collect();
    for (g, x) in got.iter().zip(&expected) {
        assert_eq!(g, x);
    }
    assert_eq!(got.len(), expected.len());

    let stats: Vec<SegmentationStats> =
        serde_json::from_str(&std::fs::read_to_string(p.artifact("segment_stats.json")).unwrap())
            .unwrap();
    let counts: BTreeMap<String, Counts> = serde_json::from_str(
        &std::fs::read_to_string(common::fixture("segment/expected_counts.json")).unwrap(),
    )
    .unwrap();
    for s in &stats {
        let want = &counts[s.edition.unwrap().as_str()];
        let have = Counts {
            bold: s.bold_count,
            index: s.index_count,
            classifier: s.classifier_count,
            continuation: s.continuation_count,
            orphan: s.orphan_count,
            subentry: s.subentry_count,
        };
        assert_eq!(&have, want, "{:?}", s.edition);
        assert_eq!(
            s.bold_count + s.index_count + s.classifier_count,
            s.total_entries
        );
        assert!((s.bold_share + s.index_share + s.classifier_share - 1.0).abs() < 1e-9);
    }
}

#[test]
fn fixture_pages_round_trip_and_stay_markup_free() {
    let store = encyc::corpus::PageStore::open(common::fixture("corpus")).unwrap();
    let pages = store
        .load_all(encyc::corpus::NormalizationTable::builtin())
        .unwrap();
    assert_eq!(pages.len(), 12);
    assert!(pages.iter().map(|p| p.paragraphs.len()).sum::<usize>() >= 30);
    for page in &pages {
        for para in &page.paragraphs {
            assert!(!para.text.contains(['<', '>']));
            assert_eq!(normalize_text(&para.text), para.text);
        }
    }
}

fn word() -> impl Strategy<Value = String> {
    "[A-ZÅÄÖ][a-zåäö]{2,8}"
}

#[derive(Debug, Clone)]
enum Para {
    Bold(String, String),
    Plain(String),
    Sub(String),
}

fn para() -> impl Strategy<Value = Para> {
    prop_oneof![
        (word(), "[a-zåäö ,.]{0,40}").prop_map(|(h, t)| Para::Bold(h, t)),
        "[A-Za-zåäöÅÄÖ ,.]{1,60}".prop_map(Para::Plain),
        "[a-z ]{1,20}".prop_map(Para::Sub),
    ]
}

fn html(paras: &[Para], index: &[String]) -> String {
    let mut out = String::from("<!-- index --><ul>");
    for w in index {
        out.push_str(&format!("<li>{w}</li>"));
    }
    out.push_str("</ul><!-- /index --><!-- mode=normal -->");
    for p in paras {
        match p {
            Para::Bold(h, t) => out.push_str(&format!("<p><b>{h}.</b> {t}</p>")),
            Para::Plain(t) => out.push_str(&format!("<p>{t}</p>")),
            Para::Sub(t) => out.push_str(&format!("<p>2. {t}</p>")),
        }
    }
    out.push_str("<!-- NEWIMAGE2 -->");
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cascade_invariants(
        pages in proptest::collection::vec(
            (proptest::collection::vec(para(), 0..12), proptest::collection::vec(word(), 0..5)),
            1..4,
        )
    ) {
        let parsed: Vec<_> = pages
            .iter()
            .enumerate()
            .map(|(i, (paras, index))| {
                parse_page(&html(paras, index), EditionId::First, "a", &format!("{i:04}")).unwrap()
            })
            .collect();
        let (entries, stats) = segment(&parsed, None, &SegmentConfig::default()).unwrap();
        prop_assert_eq!(stats.bold_count + stats.index_count + stats.classifier_count, stats.total_entries);
        prop_assert_eq!(entries.len(), stats.total_entries);
        let total_paras: usize = parsed.iter().map(|p| p.paragraphs.len()).sum();
        prop_assert_eq!(stats.total_entries + stats.continuation_count + stats.orphan_count, total_paras);
        for e in &entries {
            prop_assert!(e.truncated_text.chars().count() <= 200);
            let page = parsed.iter().find(|p| p.page_id == e.page_id).unwrap();
            let idx: usize = e.id.rsplit(':').next().unwrap().parse().unwrap();
            let first: &Paragraph = &page.paragraphs[idx];
            match e.strategy {
                Cascade::Bold => prop_assert!(match_bold(first).is_some()),
                Cascade::Index => prop_assert!(match_bold(first).is_none()),
                Cascade::Classifier => prop_assert!(false, "no classifier given"),
            }
        }
    }
}
