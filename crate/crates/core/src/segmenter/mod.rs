//! Turns page paragraphs into entries.
//!
//! Each paragraph goes through bold matching, then index matching, then the
//! entry classifier; the first step that recognizes an entry start wins.
//! Anything else is continuation text and is appended to the previous entry,
//! across page breaks but never across volumes.

mod classifier;
mod features;
mod levenshtein;

pub use classifier::{
    build_entry_training_set, classifier_headword, train_entry_classifier, training_set_by_volume,
    volume_letters, EntryClassifier, EntryClassifierConfig, EntryPrediction, TrainingSet,
};
pub(crate) use features::fnv1a as fnv1a_seeded;
pub use features::{ngram_featurize, NgramFeaturizer, DEFAULT_DIMS, DEFAULT_HASH_SEED};
pub use levenshtein::{levenshtein, relative_levenshtein};

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{EditionId, Page, Paragraph};
use crate::logreg::TrainError;

pub const TRUNCATION: usize = 200;
pub const INDEX_THRESHOLD: f64 = 0.15;

#[derive(Debug, thiserror::Error)]
pub enum SegmentError {
    #[error("relative Levenshtein needs a non-empty reference word")]
    EmptyReference,
    #[error("cannot featurize empty text")]
    EmptyText,
    #[error("training data needs both classes (positives: {positives}, negatives: {negatives})")]
    SingleClassTraining { positives: usize, negatives: usize },
    #[error("feature dimension mismatch: model has {expected}, input has {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("bad classifier model file: {0}")]
    ModelFormat(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl From<TrainError> for SegmentError {
    fn from(e: TrainError) -> Self {
        match e {
            TrainError::SingleClassTraining {
                positives,
                negatives,
            } => SegmentError::SingleClassTraining {
                positives,
                negatives,
            },
            TrainError::DimMismatch { expected, got } => {
                SegmentError::DimMismatch { expected, got }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Bold,
    Index,
    Classifier,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EntryFlags {
    pub is_crossref: bool,
    pub crossref_target: Option<String>,
    pub is_location: bool,
    /// Set by the location classifier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location_prob: Option<f64>,
}

/// One line of `entries.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    /// `{edition number}:{volume}:{page}:{paragraph index}` of the first
    /// paragraph.
    pub id: String,
    pub edition: EditionId,
    pub volume_id: String,
    pub page_id: String,
    pub headword: String,
    pub text: String,
    pub truncated_text: String,
    pub strategy: Strategy,
    pub flags: EntryFlags,
}

impl Entry {
    pub fn make_id(edition: EditionId, volume: &str, page: &str, para_idx: usize) -> String {
        format!("{}:{volume}:{page}:{para_idx}", edition.number())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SegmentationStats {
    pub edition: Option<EditionId>,
    pub total_entries: usize,
    pub bold_count: usize,
    pub index_count: usize,
    pub classifier_count: usize,
    pub bold_share: f64,
    pub index_share: f64,
    pub classifier_share: f64,
    pub continuation_count: usize,
    /// Continuations at the start of a volume, with no entry to attach to.
    pub orphan_count: usize,
    pub subentry_count: usize,
}

impl SegmentationStats {
    fn add(&mut self, other: &SegmentationStats) {
        self.total_entries += other.total_entries;
        self.bold_count += other.bold_count;
        self.index_count += other.index_count;
        self.classifier_count += other.classifier_count;
        self.continuation_count += other.continuation_count;
        self.orphan_count += other.orphan_count;
        self.subentry_count += other.subentry_count;
    }

    fn finish(&mut self) {
        let total = self.total_entries as f64;
        if self.total_entries == 0 {
            return;
        }
        self.bold_share = self.bold_count as f64 / total;
        self.index_share = self.index_count as f64 / total;
        self.classifier_share = self.classifier_count as f64 / total;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentConfig {
    pub index_threshold: f64,
    pub truncation: usize,
}

impl Default for SegmentConfig {
    fn default() -> Self {
        Self {
            index_threshold: INDEX_THRESHOLD,
            truncation: TRUNCATION,
        }
    }
}

const TRAILING: [char; 4] = ['.', ',', ':', ';'];

pub fn strip_trailing_punctuation(s: &str) -> &str {
    s.trim_end_matches(|c: char| TRAILING.contains(&c) || c.is_whitespace())
}

/// First `n` Unicode scalar values of `s`.
pub fn truncate_chars(s: &str, n: usize) -> String {
    s.chars().take(n).collect()
}

/// Headword from a bold span at offset 0.
pub fn match_bold(paragraph: &Paragraph) -> Option<String> {
    let &(start, end) = paragraph.bold_spans.first()?;
    if start != 0 {
        return None;
    }
    let span = paragraph.span_text((start, end));
    let hw = strip_trailing_punctuation(span.trim());
    (!hw.is_empty()).then(|| hw.to_string())
}

/// Tries index words longest first (ties lexicographic) against a prefix of
/// the same length; returns the first word within `threshold`.
pub fn match_index(
    paragraph: &Paragraph,
    index_words: &[String],
    threshold: f64,
) -> Option<String> {
    let mut words: Vec<(usize, &str)> = index_words
        .iter()
        .map(|w| (w.chars().count(), w.as_str()))
        .filter(|(n, _)| *n > 0)
        .collect();
    words.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    words.into_iter().find_map(|(n, w)| {
        let prefix = truncate_chars(&paragraph.text, n);
        let score = relative_levenshtein(w, &prefix).ok()?;
        if score > threshold {
            return None;
        }
        let hw = strip_trailing_punctuation(w);
        (!hw.is_empty()).then(|| hw.to_string())
    })
}

/// `1.`, `12.` and so on at the start of a paragraph.
fn is_subentry(text: &str) -> bool {
    let digits = text.chars().take_while(char::is_ascii_digit).count();
    digits > 0 && text[digits..].starts_with('.')
}

/// Segments pages of one edition. Volumes are processed in parallel; pages
/// within a volume in order.
pub fn segment(
    pages: &[Page],
    classifier: Option<&EntryClassifier>,
    config: &SegmentConfig,
) -> Result<(Vec<Entry>, SegmentationStats), SegmentError> {
    let mut volumes: Vec<&[Page]> = Vec::new();
    let mut start = 0;
    for i in 1..=pages.len() {
        if i == pages.len()
            || pages[i].volume_id != pages[start].volume_id
            || pages[i].edition != pages[start].edition
        {
            if i > start {
                volumes.push(&pages[start..i]);
            }
            start = i;
        }
    }

    let results: Vec<(Vec<Entry>, SegmentationStats)> = volumes
        .par_iter()
        .map(|vol| segment_volume(vol, classifier, config))
        .collect::<Result<_, _>>()?;

    let mut entries = Vec::new();
    let mut stats = SegmentationStats {
        edition: pages.first().map(|p| p.edition),
        ..Default::default()
    };
    for (e, s) in results {
        entries.extend(e);
        stats.add(&s);
    }
    stats.finish();
    Ok((entries, stats))
}

fn segment_volume(
    pages: &[Page],
    classifier: Option<&EntryClassifier>,
    config: &SegmentConfig,
) -> Result<(Vec<Entry>, SegmentationStats), SegmentError> {
    let mut entries: Vec<Entry> = Vec::new();
    let mut stats = SegmentationStats::default();

    for page in pages {
        for (idx, para) in page.paragraphs.iter().enumerate() {
            if para.text.is_empty() {
                continue;
            }
            let start = if is_subentry(&para.text) {
                log::debug!(
                    "subentry marker kept with parent: {}/{}/{} #{idx}",
                    page.edition,
                    page.volume_id,
                    page.page_id
                );
                stats.subentry_count += 1;
                None
            } else if let Some(hw) = match_bold(para) {
                Some((hw, Strategy::Bold))
            } else if let Some(hw) = match_index(para, &page.index_words, config.index_threshold) {
                Some((hw, Strategy::Index))
            } else if let Some(clf) = classifier {
                let pred = clf.predict_entry(para)?;
                pred.is_entry
                    .then(|| classifier_headword(&para.text))
                    .flatten()
                    .map(|hw| (hw, Strategy::Classifier))
            } else {
                None
            };

            match start {
                Some((headword, strategy)) => {
                    match strategy {
                        Strategy::Bold => stats.bold_count += 1,
                        Strategy::Index => stats.index_count += 1,
                        Strategy::Classifier => stats.classifier_count += 1,
                    }
                    stats.total_entries += 1;
                    entries.push(Entry {
                        id: Entry::make_id(page.edition, &page.volume_id, &page.page_id, idx),
                        edition: page.edition,
                        volume_id: page.volume_id.clone(),
                        page_id: page.page_id.clone(),
                        headword,
                        truncated_text: truncate_chars(&para.text, config.truncation),
                        text: para.text.clone(),
                        strategy,
                        flags: EntryFlags::default(),
                    });
                }
                None => match entries.last_mut() {
                    Some(last) => {
                        last.text.push(' ');
                        last.text.push_str(&para.text);
                        last.truncated_text = truncate_chars(&last.text, config.truncation);
                        stats.continuation_count += 1;
                    }
                    None => {
                        log::warn!(
                            "continuation with no entry to attach to: {}/{}/{} #{idx}",
                            page.edition,
                            page.volume_id,
                            page.page_id
                        );
                        stats.orphan_count += 1;
                    }
                },
            }
        }
    }
    Ok((entries, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn page(volume: &str, page_id: &str, paragraphs: Vec<Paragraph>, index: &[&str]) -> Page {
        Page {
            edition: EditionId::First,
            volume_id: volume.into(),
            page_id: page_id.into(),
            paragraphs,
            index_words: index.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn bold_at_start() {
        let p = Paragraph::with_bold_prefix("Abo. stad i Finland", 4);
        assert_eq!(match_bold(&p).as_deref(), Some("Abo"));
        let nerv = Paragraph::with_bold_prefix("Nervtumör. Se Nervsjukdomar.", 10);
        assert_eq!(match_bold(&nerv).as_deref(), Some("Nervtumör"));
    }

    #[test]
    fn bold_not_at_start() {
        let p = Paragraph {
            text: "stad Abo. i Finland".into(),
            bold_spans: vec![(5, 9)],
        };
        assert_eq!(match_bold(&p), None);
        assert_eq!(match_bold(&Paragraph::plain("Abo")), None);
    }

    #[test]
    fn index_match_examples() {
        let words = |w: &[&str]| w.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let p = Paragraph::plain("Bajesid, turkiska sultaner.");
        assert_eq!(
            match_index(&p, &words(&["Bajasid"]), INDEX_THRESHOLD).as_deref(),
            Some("Bajasid")
        );
        let p = Paragraph::plain("Zzzz, socken i Skåne.");
        assert_eq!(match_index(&p, &words(&["Öved"]), INDEX_THRESHOLD), None);
        let p = Paragraph::plain("Åsenhöga, socken i Jönköpings län.");
        assert_eq!(
            match_index(&p, &words(&["Åker", "Åsenhöga"]), INDEX_THRESHOLD).as_deref(),
            Some("Åsenhöga")
        );
    }

    #[test]
    fn index_ties_break_lexicographically() {
        // Both 3-letter words are within threshold? No: only exact ones are
        // (1/3 > 0.15). Use a loose threshold so both qualify.
        let p = Paragraph::plain("Abc text");
        let words = vec!["Abd".to_string(), "Abb".to_string()];
        assert_eq!(match_index(&p, &words, 0.5).as_deref(), Some("Abb"));
    }

    #[test]
    fn index_match_is_case_sensitive() {
        let p = Paragraph::plain("ask, socken");
        assert_eq!(match_index(&p, &["Ask".to_string()], INDEX_THRESHOLD), None);
    }

    #[test]
    fn subentry_markers() {
        assert!(is_subentry("1. Kalmar"));
        assert!(is_subentry("12. x"));
        assert!(!is_subentry("1 x"));
        assert!(!is_subentry("Kalmar. 1."));
    }

    #[test]
    fn continuation_spans_pages_but_not_volumes() {
        let pages = vec![
            page(
                "a",
                "1",
                vec![
                    Paragraph::plain("orphan text"),
                    Paragraph::with_bold_prefix("Abo, stad.", 3),
                ],
                &[],
            ),
            page("a", "2", vec![Paragraph::plain("mer om Abo.")], &[]),
            page("b", "1", vec![Paragraph::plain("another orphan")], &[]),
        ];
        let (entries, stats) = segment(&pages, None, &SegmentConfig::default()).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].id, "1:a:1:1");
        assert_eq!(entries[0].text, "Abo, stad. mer om Abo.");
        assert_eq!(stats.orphan_count, 2);
        assert_eq!(stats.continuation_count, 1);
        assert_eq!(stats.bold_share, 1.0);
    }

    #[test]
    fn truncated_text_follows_appends() {
        let long = "x".repeat(150);
        let pages = vec![page(
            "a",
            "1",
            vec![
                Paragraph::with_bold_prefix(format!("Abo, {long}"), 3),
                Paragraph::plain(long.clone()),
            ],
            &[],
        )];
        let (entries, _) = segment(&pages, None, &SegmentConfig::default()).unwrap();
        assert_eq!(entries[0].truncated_text.chars().count(), 200);
        assert_eq!(
            entries[0].truncated_text,
            truncate_chars(&entries[0].text, 200)
        );
    }

    #[test]
    fn strip_punctuation_set() {
        assert_eq!(strip_trailing_punctuation("Abo.,;: "), "Abo");
        assert_eq!(strip_trailing_punctuation("A.B."), "A.B");
        assert_eq!(strip_trailing_punctuation("Rom!"), "Rom!");
    }
}
