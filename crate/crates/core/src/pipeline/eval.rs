//! Scoring stage outputs against gold files.
//!
//! Gold schemas, one JSON object per line:
//!
//! - segment: `{id, headword}` for every true entry on the annotated pages
//! - crossref, classify-locations: `{entry_id, label}`
//! - match: `{e1_id, e2_id}` with `e2_id` null for removed entries
//! - link: `{entry_id, qid, lat, lon}`

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_jsonl, Pipeline, PipelineError, Result, Stage};
use crate::crossref::CrossReference;
use crate::http::write_atomic;
use crate::matcher::{evaluate_matching, AddedRecord, MatchGold, MatchRecord, MatchResult};
use crate::metrics::Prf;
use crate::segmenter::Entry;
use crate::wikilinker::{evaluate_linking, LinkGold, LinkedLocation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub task: String,
    pub edition: String,
    pub prf: Prf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub stage: Stage,
    pub rows: Vec<EvalRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentGold {
    id: String,
    headword: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelGold {
    entry_id: String,
    label: bool,
}

/// `1:...` → `first`.
fn edition_of(id: &str) -> &'static str {
    match id.split(':').next() {
        Some("1") => "first",
        Some("2") => "second",
        _ => "unknown",
    }
}

/// Page key of an entry id: everything before the paragraph index.
fn page_of(id: &str) -> &str {
    id.rsplit_once(':').map_or(id, |(p, _)| p)
}

fn mismatch(path: &Path, message: impl Into<String>) -> PipelineError {
    PipelineError::SchemaMismatch {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn load_gold<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let gold: Vec<T> = read_jsonl(path)?;
    if gold.is_empty() {
        return Err(mismatch(path, "gold file is empty"));
    }
    Ok(gold)
}

fn editions<'a>(ids: impl Iterator<Item = &'a str>) -> BTreeSet<&'static str> {
    ids.map(edition_of).collect()
}

/// Segmentation scored on the pages that appear in the gold file.
fn score_segments(entries: &[Entry], gold: &[SegmentGold], edition: &str) -> Prf {
    let gold: Vec<&SegmentGold> = gold
        .iter()
        .filter(|g| edition_of(&g.id) == edition)
        .collect();
    let pages: HashSet<&str> = gold.iter().map(|g| page_of(&g.id)).collect();
    let truth: HashSet<(&str, &str)> = gold
        .iter()
        .map(|g| (g.id.as_str(), g.headword.as_str()))
        .collect();
    let predicted: Vec<&Entry> = entries
        .iter()
        .filter(|e| pages.contains(page_of(&e.id)))
        .collect();
    let correct = predicted
        .iter()
        .filter(|e| truth.contains(&(e.id.as_str(), e.headword.as_str())))
        .count();
    Prf::from_counts(correct, predicted.len(), gold.len())
}

/// Binary labels scored on the gold sample only.
fn score_labels(positive: &HashSet<&str>, gold: &[LabelGold], edition: &str) -> Prf {
    let sample: Vec<&LabelGold> = gold
        .iter()
        .filter(|g| edition_of(&g.entry_id) == edition)
        .collect();
    let predicted = sample
        .iter()
        .filter(|g| positive.contains(g.entry_id.as_str()))
        .count();
    let correct = sample
        .iter()
        .filter(|g| g.label && positive.contains(g.entry_id.as_str()))
        .count();
    let gold_pos = sample.iter().filter(|g| g.label).count();
    Prf::from_counts(correct, predicted, gold_pos)
}

impl Pipeline {
    fn eval_input(&self, stage: Stage, name: &str) -> Result<std::path::PathBuf> {
        let path = self.artifact(name);
        if !path.is_file() {
            return Err(PipelineError::MissingUpstream {
                stage,
                artifact: name.to_string(),
            });
        }
        Ok(path)
    }

    fn eval_artifact<T: serde::de::DeserializeOwned>(
        &self,
        stage: Stage,
        name: &str,
    ) -> Result<Vec<T>> {
        read_jsonl(&self.eval_input(stage, name)?)
    }

    /// Scores a stage against a gold file and writes `eval_<stage>.csv` and
    /// `eval_<stage>.txt` into the work directory.
    pub fn evaluate(&self, stage: Stage, gold_path: &Path) -> Result<EvalSummary> {
        let mut rows = Vec::new();
        let mut row = |task: &str, edition: &str, prf: Prf| {
            rows.push(EvalRow {
                task: task.to_string(),
                edition: edition.to_string(),
                prf,
            })
        };
        match stage {
            Stage::Segment => {
                let gold: Vec<SegmentGold> = load_gold(gold_path)?;
                let entries: Vec<Entry> = self.eval_artifact(stage, "entries.jsonl")?;
                for ed in editions(gold.iter().map(|g| g.id.as_str())) {
                    row(
                        "entry segmentation",
                        ed,
                        score_segments(&entries, &gold, ed),
                    );
                }
            }
            Stage::Crossref | Stage::ClassifyLocations => {
                let gold: Vec<LabelGold> = load_gold(gold_path)?;
                let (entries_file, task) = match stage {
                    Stage::Crossref => ("entries.jsonl", "cross-references"),
                    _ => ("classified.jsonl", "location classification"),
                };
                let entries: Vec<Entry> = self.eval_artifact(stage, entries_file)?;
                let known: HashSet<&str> = entries.iter().map(|e| e.id.as_str()).collect();
                if let Some(g) = gold.iter().find(|g| !known.contains(g.entry_id.as_str())) {
                    return Err(mismatch(gold_path, format!("unknown entry {}", g.entry_id)));
                }
                let refs: Vec<CrossReference>;
                let positive: HashSet<&str> = if stage == Stage::Crossref {
                    refs = self.eval_artifact(stage, "crossrefs.jsonl")?;
                    refs.iter().map(|r| r.source_id.as_str()).collect()
                } else {
                    entries
                        .iter()
                        .filter(|e| e.flags.is_location)
                        .map(|e| e.id.as_str())
                        .collect()
                };
                for ed in editions(gold.iter().map(|g| g.entry_id.as_str())) {
                    row(task, ed, score_labels(&positive, &gold, ed));
                }
            }
            Stage::Match => {
                let gold: Vec<MatchGold> = load_gold(gold_path)?;
                let threshold = self.config.matching.threshold;
                for (task, matches, added) in [
                    ("entry matching", "matches.jsonl", "added.jsonl"),
                    (
                        "headword baseline",
                        "baseline_matches.jsonl",
                        "baseline_added.jsonl",
                    ),
                ] {
                    let records: Vec<MatchRecord> = self.eval_artifact(stage, matches)?;
                    let added: Vec<AddedRecord> = self.eval_artifact(stage, added)?;
                    let result = MatchResult::from_records(&records, &added, threshold);
                    let prf = evaluate_matching(&result, &gold)
                        .map_err(|e| mismatch(gold_path, e.to_string()))?;
                    row(task, "first-second", prf);
                }
            }
            Stage::Link => {
                let gold: Vec<LinkGold> = load_gold(gold_path)?;
                let entries: Vec<Entry> = self.eval_artifact(stage, "classified.jsonl")?;
                let links: Vec<LinkedLocation> = self.eval_artifact(stage, "links.jsonl")?;
                let radius = self.config.link.radius_km;
                for ed in editions(gold.iter().map(|g| g.entry_id.as_str())) {
                    let attempted: HashSet<&str> = entries
                        .iter()
                        .map(|e| e.id.as_str())
                        .filter(|id| edition_of(id) == ed)
                        .collect();
                    let g: Vec<LinkGold> = gold
                        .iter()
                        .filter(|g| edition_of(&g.entry_id) == ed)
                        .cloned()
                        .collect();
                    let p: Vec<LinkedLocation> = links
                        .iter()
                        .filter(|l| edition_of(&l.entry_id) == ed)
                        .cloned()
                        .collect();
                    let ev = evaluate_linking(&p, &g, &attempted, radius)
                        .map_err(|e| mismatch(gold_path, e.to_string()))?;
                    row("QID match", ed, ev.qid_match);
                    row(&format!("within {radius} km"), ed, ev.within_radius);
                }
            }
            Stage::Ingest | Stage::Stats => {
                return Err(PipelineError::ConfigError(format!(
                    "stage {stage} has no evaluation"
                )))
            }
        }
        let summary = EvalSummary { stage, rows };
        let csv_path = self.artifact(&format!("eval_{stage}.csv"));
        write_atomic(&csv_path, summary.to_csv().as_bytes()).map_err(super::io_err(&csv_path))?;
        let txt_path = self.artifact(&format!("eval_{stage}.txt"));
        write_atomic(&txt_path, summary.to_text().as_bytes()).map_err(super::io_err(&txt_path))?;
        Ok(summary)
    }
}

impl EvalSummary {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "task",
            "edition",
            "correct",
            "predicted",
            "gold",
            "precision",
            "recall",
            "f1",
        ])
        .expect("in-memory");
        for r in &self.rows {
            let p = &r.prf;
            w.write_record([
                r.task.clone(),
                r.edition.clone(),
                p.correct.to_string(),
                p.predicted.to_string(),
                p.gold.to_string(),
                format!("{:.6}", p.precision),
                format!("{:.6}", p.recall),
                format!("{:.6}", p.f1),
            ])
            .expect("in-memory");
        }
        String::from_utf8(w.into_inner().expect("in-memory")).expect("utf8")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self
            .rows
            .iter()
            .map(|r| r.task.len())
            .max()
            .unwrap_or(4)
            .max(4);
        let _ = writeln!(
            out,
            "{:width$}  {:13}  {:>9}  {:>6}  {:>6}",
            "task", "edition", "precision", "recall", "F1"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:width$}  {:13}  {:>9.2}  {:>6.2}  {:>6.2}",
                r.task, r.edition, r.prf.precision, r.prf.recall, r.prf.f1
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_helpers() {
        assert_eq!(edition_of("2:a:3:4"), "second");
        assert_eq!(page_of("2:a:3:4"), "2:a:3");
    }

    #[test]
    fn label_scoring() {
        // 20 gold: 10 positive. Predicted 10 positives of which 8 are right.
        let gold: Vec<LabelGold> = (0..20)
            .map(|i| LabelGold {
                entry_id: format!("1:a:1:{i}"),
                label: i < 10,
            })
            .collect();
        let ids: Vec<String> = (2..12).map(|i| format!("1:a:1:{i}")).collect();
        let positive: HashSet<&str> = ids.iter().map(String::as_str).collect();
        let prf = score_labels(&positive, &gold, "first");
        assert_eq!((prf.correct, prf.predicted, prf.gold), (8, 10, 10));
        assert_eq!(prf.precision, 0.8);
        assert_eq!(prf.recall, 0.8);
    }
}
