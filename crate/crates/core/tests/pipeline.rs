//! Whole-pipeline runs over the fixture corpus.

mod common;

use std::collections::{BTreeMap, HashSet};

use encyc::matcher::{AddedRecord, MatchRecord};
use encyc::pipeline::{read_jsonl, PipelineError, Stage};
use encyc::segmenter::Entry;
use encyc::wikilinker::LinkedLocation;

fn checksums(records: &[(Stage, encyc::pipeline::StageRecord)]) -> BTreeMap<String, String> {
    records
        .iter()
        .flat_map(|(s, r)| {
            r.outputs
                .iter()
                .map(move |(name, sum)| (format!("{s}/{name}"), sum.clone()))
        })
        .collect()
}

#[test]
fn run_all_twice_gives_identical_artifacts() {
    let (_d1, p1) = common::fixture_pipeline();
    let (_d2, p2) = common::fixture_pipeline();
    let a = p1.run_all().unwrap();
    let b = p2.run_all().unwrap();
    assert_eq!(a.len(), 7);
    let (ca, cb) = (checksums(&a), checksums(&b));
    assert_eq!(ca, cb);
    for stage in Stage::ALL {
        assert!(
            ca.contains_key(&format!("{stage}/{}", stage.primary_output())),
            "{stage}"
        );
    }
    // Checksums describe the files actually on disk.
    let links = std::fs::read(p1.artifact("links.jsonl")).unwrap();
    assert_eq!(ca["link/links.jsonl"], encyc::pipeline::sha256_hex(&links));

    // Rerunning in place changes nothing either.
    let c = p1.run_all().unwrap();
    assert_eq!(checksums(&c), ca);
    let manifest = p1.manifest().unwrap();
    assert_eq!(manifest.stages.len(), 7);
}

#[test]
fn stage_without_upstream_artifact_fails() {
    let (_d, p) = common::fixture_pipeline();
    for stage in [
        Stage::Segment,
        Stage::Crossref,
        Stage::Match,
        Stage::Link,
        Stage::Stats,
    ] {
        match p.run_stage(stage) {
            Err(PipelineError::MissingUpstream { stage: s, .. }) => assert_eq!(s, stage),
            other => panic!("{stage}: {other:?}"),
        }
    }
    let gold = common::fixture("segment/gold.jsonl");
    assert!(matches!(
        p.evaluate(Stage::Segment, &gold),
        Err(PipelineError::MissingUpstream { .. })
    ));
}

#[test]
fn crossrefs_never_become_locations_or_matches() {
    let (_d, p) = common::fixture_pipeline();
    common::run_through(&p, Stage::Link);
    let classified: Vec<Entry> = read_jsonl(&p.artifact("classified.jsonl")).unwrap();
    let crossrefs: HashSet<&str> = classified
        .iter()
        .filter(|e| e.flags.is_crossref)
        .map(|e| e.id.as_str())
        .collect();
    assert!(crossrefs.len() >= 3, "{crossrefs:?}");
    assert!(classified
        .iter()
        .all(|e| !(e.flags.is_crossref && e.flags.is_location)));

    let matches: Vec<MatchRecord> = read_jsonl(&p.artifact("matches.jsonl")).unwrap();
    let added: Vec<AddedRecord> = read_jsonl(&p.artifact("added.jsonl")).unwrap();
    assert!(!matches.is_empty());
    for m in &matches {
        assert!(!crossrefs.contains(m.e1_id.as_str()), "{}", m.e1_id);
        if let Some(e2) = &m.e2_id {
            assert!(!crossrefs.contains(e2.as_str()), "{e2}");
        }
    }
    assert!(added.iter().all(|a| !crossrefs.contains(a.e2_id.as_str())));
    let links: Vec<LinkedLocation> = read_jsonl(&p.artifact("links.jsonl")).unwrap();
    assert!(links
        .iter()
        .all(|l| !crossrefs.contains(l.entry_id.as_str())));
}

#[test]
fn every_stage_scores_against_its_gold_file() {
    let (_d, p) = common::fixture_pipeline();
    p.run_all().unwrap();
    for (stage, gold, floor) in [
        (Stage::Segment, "segment/gold.jsonl", 1.0),
        (Stage::Crossref, "gold/crossref.jsonl", 1.0),
        (Stage::ClassifyLocations, "gold/locations.jsonl", 0.8),
        (Stage::Match, "gold/match.jsonl", 0.3),
        (Stage::Link, "gold/links.jsonl", 0.5),
    ] {
        let summary = p.evaluate(stage, &common::fixture(gold)).unwrap();
        assert!(!summary.rows.is_empty(), "{stage}");
        for row in &summary.rows {
            assert!(
                row.prf.f1 >= floor,
                "{stage} {} {}: {}",
                row.task,
                row.edition,
                row.prf.f1
            );
        }
        assert!(p.artifact(&format!("eval_{stage}.csv")).is_file());
        let text = std::fs::read_to_string(p.artifact(&format!("eval_{stage}.txt"))).unwrap();
        assert_eq!(text, summary.to_text());
    }
    assert!(p
        .evaluate(Stage::Stats, &common::fixture("gold/links.jsonl"))
        .is_err());
}

#[test]
fn gold_with_unknown_ids_is_rejected() {
    let (dir, p) = common::fixture_pipeline();
    common::run_through(&p, Stage::Crossref);
    let bad = dir.path().join("bad_gold.jsonl");
    std::fs::write(&bad, "{\"entry_id\":\"9:z:0001:0\",\"label\":true}\n").unwrap();
    assert!(matches!(
        p.evaluate(Stage::Crossref, &bad),
        Err(PipelineError::SchemaMismatch { .. })
    ));
}
