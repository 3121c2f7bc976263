//! Cross-reference entries ("Nervtumör. Se Nervsjukdomar.").
//!
//! A short entry whose text contains ` Se ` redirects to the entry named by
//! the word after it. Resolution picks the first entry in edition order with
//! exactly that headword, which is right most of the time and wrong when two
//! entries share a headword.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::segmenter::{strip_trailing_punctuation, Entry};

pub const CROSSREF_MAX_LEN: usize = 60;
const MARKER: &str = " Se";

/// One line of `crossrefs.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossReference {
    pub source_id: String,
    pub source_headword: String,
    pub target_word: String,
    pub resolved_id: Option<String>,
    /// More targets follow ("Se X och Y"); only the first is resolved.
    #[serde(default)]
    pub partial: bool,
}

fn is_word_char(c: char) -> bool {
    c.is_alphabetic() || c == '-'
}

/// Target word and whether further targets follow it.
fn detect(text: &str, max_len: usize) -> Option<(String, bool)> {
    if text.chars().count() >= max_len {
        return None;
    }
    text.match_indices(MARKER).find_map(|(at, _)| {
        let rest = text[at + MARKER.len()..].strip_prefix(' ')?;
        let end = rest.find(|c: char| !is_word_char(c)).unwrap_or(rest.len());
        let word = strip_trailing_punctuation(&rest[..end]);
        if word.is_empty() {
            return None;
        }
        let partial = rest[end..]
            .trim_start_matches(['.', ','])
            .starts_with(" och ");
        Some((word.to_string(), partial))
    })
}

/// Word after ` Se ` in a text shorter than `max_len` characters.
pub fn detect_crossref(text: &str, max_len: usize) -> Option<String> {
    detect(text, max_len).map(|(w, _)| w)
}

/// Id of the first entry whose headword equals `target_word`.
pub fn resolve_crossref<'a>(target_word: &str, entries: &'a [Entry]) -> Option<&'a str> {
    entries
        .iter()
        .find(|e| e.headword == target_word)
        .map(|e| e.id.as_str())
}

/// Detects and resolves cross-references among entries of one edition and
/// sets the crossref flags on the entries.
pub fn link_crossrefs(entries: &mut [Entry], max_len: usize) -> Vec<CrossReference> {
    let mut first_by_headword: HashMap<&str, &str> = HashMap::new();
    for e in entries.iter() {
        first_by_headword
            .entry(e.headword.as_str())
            .or_insert(e.id.as_str());
    }

    let refs: Vec<CrossReference> = entries
        .par_iter()
        .filter_map(|e| {
            let (target_word, partial) = detect(&e.text, max_len)?;
            if partial {
                log::info!("{}: only the first of several targets is resolved", e.id);
            }
            Some(CrossReference {
                source_id: e.id.clone(),
                source_headword: e.headword.clone(),
                resolved_id: first_by_headword
                    .get(target_word.as_str())
                    .map(|id| id.to_string()),
                target_word,
                partial,
            })
        })
        .collect();

    let targets: HashMap<&str, &str> = refs
        .iter()
        .map(|r| (r.source_id.as_str(), r.target_word.as_str()))
        .collect();
    for e in entries.iter_mut() {
        match targets.get(e.id.as_str()) {
            Some(t) => {
                e.flags.is_crossref = true;
                e.flags.crossref_target = Some(t.to_string());
            }
            None => {
                e.flags.is_crossref = false;
                e.flags.crossref_target = None;
            }
        }
    }
    refs
}
