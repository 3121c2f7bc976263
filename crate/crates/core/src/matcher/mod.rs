//! Cross-edition alignment of location entries.
//!
//! Edition-2 entries go into a [`VectorIndex`]; each edition-1 entry, in
//! edition order, takes the most similar not-yet-claimed candidate among its
//! top `k` if the similarity reaches the threshold, and is "removed"
//! otherwise. Unclaimed edition-2 entries are "added".

mod hnsw;

pub use hnsw::{Hnsw, HnswParams};

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedder::{dot, EmbedError, Embedder, Embedding};
use crate::metrics::Prf;
use crate::segmenter::Entry;

pub const MATCH_THRESHOLD: f64 = 0.9;
pub const MATCH_K: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum MatchError {
    #[error("index dimension {expected}, vector dimension {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("gold id {0} is not among the matched entries")]
    GoldIdUnknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum IndexMode {
    /// Brute force over all records.
    Exact,
    Hnsw(HnswParams),
}

#[derive(Debug, Clone)]
pub struct VectorIndex {
    dim: usize,
    ids: Vec<String>,
    /// Row-major, `dim` values per record.
    data: Vec<f32>,
    graph: Option<Hnsw>,
}

impl VectorIndex {
    pub fn new(dim: usize, mode: IndexMode) -> Self {
        Self {
            dim,
            ids: Vec::new(),
            data: Vec::new(),
            graph: match mode {
                IndexMode::Exact => None,
                IndexMode::Hnsw(p) => Some(Hnsw::new(dim, p)),
            },
        }
    }

    /// Vectors are expected to be unit length.
    pub fn add(&mut self, id: impl Into<String>, vector: &[f32]) -> Result<(), MatchError> {
        if vector.len() != self.dim {
            return Err(MatchError::DimMismatch {
                expected: self.dim,
                got: vector.len(),
            });
        }
        self.ids.push(id.into());
        self.data.extend_from_slice(vector);
        if let Some(g) = &mut self.graph {
            g.insert(&self.data);
        }
        Ok(())
    }

    pub fn build(
        dim: usize,
        mode: IndexMode,
        records: impl IntoIterator<Item = (String, Embedding)>,
    ) -> Result<Self, MatchError> {
        let mut index = Self::new(dim, mode);
        for (id, v) in records {
            index.add(id, &v)?;
        }
        Ok(index)
    }

    /// Embeds `truncated_text` of every entry and indexes it by entry id.
    pub fn from_entries(
        entries: &[&Entry],
        embedder: &dyn Embedder,
        mode: IndexMode,
    ) -> Result<Self, MatchError> {
        let vectors = embed_entries(entries, embedder)?;
        Self::build(
            embedder.dim(),
            mode,
            entries.iter().map(|e| e.id.clone()).zip(vectors),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn vector(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_exact(&self) -> bool {
        self.graph.is_none()
    }

    /// Top `k` records as (position, similarity), by descending similarity
    /// with ties going to the earlier record.
    pub fn search(&self, query: &[f32], k: usize) -> Result<Vec<(usize, f64)>, MatchError> {
        if query.len() != self.dim {
            return Err(MatchError::DimMismatch {
                expected: self.dim,
                got: query.len(),
            });
        }
        if let Some(g) = &self.graph {
            return Ok(g.search(&self.data, query, k));
        }
        let mut all: Vec<(usize, f64)> = (0..self.len())
            .map(|i| (i, dot(query, self.vector(i))))
            .collect();
        all.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        all.truncate(k);
        Ok(all)
    }
}

pub fn embed_entries(
    entries: &[&Entry],
    embedder: &dyn Embedder,
) -> Result<Vec<Embedding>, EmbedError> {
    if entries.is_empty() {
        return Ok(Vec::new());
    }
    let texts: Vec<&str> = entries.iter().map(|e| e.truncated_text.as_str()).collect();
    embedder.embed(&texts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchPair {
    pub e1_id: String,
    pub e2_id: String,
    pub similarity: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub pairs: Vec<MatchPair>,
    pub removed: Vec<String>,
    pub added: Vec<String>,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchStatus {
    Paired,
    Removed,
}

/// One line of `matches.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub e1_id: String,
    pub e2_id: Option<String>,
    pub similarity: Option<f64>,
    pub status: MatchStatus,
}

/// One line of `added.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddedRecord {
    pub e2_id: String,
}

impl MatchResult {
    /// Edition-1 records in the order given by `e1_order` (pairs and removed
    /// interleaved as in the edition).
    pub fn records(&self, e1_order: &[String]) -> Vec<MatchRecord> {
        let paired: HashMap<&str, &MatchPair> =
            self.pairs.iter().map(|p| (p.e1_id.as_str(), p)).collect();
        let removed: HashSet<&str> = self.removed.iter().map(String::as_str).collect();
        e1_order
            .iter()
            .filter_map(|id| {
                if let Some(p) = paired.get(id.as_str()) {
                    Some(MatchRecord {
                        e1_id: id.clone(),
                        e2_id: Some(p.e2_id.clone()),
                        similarity: Some(p.similarity),
                        status: MatchStatus::Paired,
                    })
                } else if removed.contains(id.as_str()) {
                    Some(MatchRecord {
                        e1_id: id.clone(),
                        e2_id: None,
                        similarity: None,
                        status: MatchStatus::Removed,
                    })
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn from_records(records: &[MatchRecord], added: &[AddedRecord], threshold: f64) -> Self {
        let mut out = MatchResult {
            threshold,
            added: added.iter().map(|a| a.e2_id.clone()).collect(),
            ..Default::default()
        };
        for r in records {
            match (&r.e2_id, r.status) {
                (Some(e2), MatchStatus::Paired) => out.pairs.push(MatchPair {
                    e1_id: r.e1_id.clone(),
                    e2_id: e2.clone(),
                    similarity: r.similarity.unwrap_or(f64::NAN),
                }),
                _ => out.removed.push(r.e1_id.clone()),
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchConfig {
    pub threshold: f64,
    pub k: usize,
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self {
            threshold: MATCH_THRESHOLD,
            k: MATCH_K,
        }
    }
}

/// Greedy first-candidate matching. `e1` is (id, vector) in edition order.
pub fn match_editions(
    e1: &[(String, Embedding)],
    e2_index: &VectorIndex,
    config: &MatchConfig,
) -> Result<MatchResult, MatchError> {
    // Candidate lists do not depend on claims, so they can be computed in
    // parallel; the claiming pass below is sequential.
    let candidates: Vec<Vec<(usize, f64)>> = e1
        .par_iter()
        .map(|(_, v)| e2_index.search(v, config.k))
        .collect::<Result<_, _>>()?;

    let mut taken = vec![false; e2_index.len()];
    let mut result = MatchResult {
        threshold: config.threshold,
        ..Default::default()
    };
    for ((id, _), cands) in e1.iter().zip(&candidates) {
        let pick = cands
            .iter()
            .find(|&&(j, sim)| sim >= config.threshold && !taken[j]);
        match pick {
            Some(&(j, similarity)) => {
                taken[j] = true;
                result.pairs.push(MatchPair {
                    e1_id: id.clone(),
                    e2_id: e2_index.id(j).to_string(),
                    similarity,
                });
            }
            None => result.removed.push(id.clone()),
        }
    }
    result.added = (0..e2_index.len())
        .filter(|&j| !taken[j])
        .map(|j| e2_index.id(j).to_string())
        .collect();
    Ok(result)
}

/// Pairs entries with identical headwords; each edition-1 entry takes the
/// first unclaimed edition-2 entry with its headword. `(id, headword)`.
pub fn baseline_headword_match(e1: &[(String, String)], e2: &[(String, String)]) -> MatchResult {
    let mut by_headword: HashMap<&str, Vec<usize>> = HashMap::new();
    for (j, (_, hw)) in e2.iter().enumerate() {
        by_headword.entry(hw.as_str()).or_default().push(j);
    }
    let mut taken = vec![false; e2.len()];
    let mut result = MatchResult {
        threshold: 1.0,
        ..Default::default()
    };
    for (id, hw) in e1 {
        let pick = by_headword
            .get(hw.as_str())
            .and_then(|js| js.iter().copied().find(|&j| !taken[j]));
        match pick {
            Some(j) => {
                taken[j] = true;
                result.pairs.push(MatchPair {
                    e1_id: id.clone(),
                    e2_id: e2[j].0.clone(),
                    similarity: 1.0,
                });
            }
            None => result.removed.push(id.clone()),
        }
    }
    result.added = (0..e2.len())
        .filter(|&j| !taken[j])
        .map(|j| e2[j].0.clone())
        .collect();
    result
}

/// One line of a matching gold file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchGold {
    pub e1_id: String,
    pub e2_id: Option<String>,
}

/// Precision over predicted pairs whose edition-1 entry is in the gold
/// sample, recall over gold pairs with a non-null partner.
pub fn evaluate_matching(predicted: &MatchResult, gold: &[MatchGold]) -> Result<Prf, MatchError> {
    let known_e1: HashSet<&str> = predicted
        .pairs
        .iter()
        .map(|p| p.e1_id.as_str())
        .chain(predicted.removed.iter().map(String::as_str))
        .collect();
    let known_e2: HashSet<&str> = predicted
        .pairs
        .iter()
        .map(|p| p.e2_id.as_str())
        .chain(predicted.added.iter().map(String::as_str))
        .collect();
    let mut gold_map: HashMap<&str, Option<&str>> = HashMap::new();
    for g in gold {
        if !known_e1.contains(g.e1_id.as_str()) {
            return Err(MatchError::GoldIdUnknown(g.e1_id.clone()));
        }
        if let Some(e2) = &g.e2_id {
            if !known_e2.contains(e2.as_str()) {
                return Err(MatchError::GoldIdUnknown(e2.clone()));
            }
        }
        gold_map.insert(g.e1_id.as_str(), g.e2_id.as_deref());
    }

    let mut predicted_in_sample = 0;
    let mut correct = 0;
    for p in &predicted.pairs {
        if let Some(expected) = gold_map.get(p.e1_id.as_str()) {
            predicted_in_sample += 1;
            if *expected == Some(p.e2_id.as_str()) {
                correct += 1;
            }
        }
    }
    let gold_pairs = gold_map.values().filter(|v| v.is_some()).count();
    Ok(Prf::from_counts(correct, predicted_in_sample, gold_pairs))
}
