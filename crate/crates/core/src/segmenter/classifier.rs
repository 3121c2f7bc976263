//! Entry/non-entry paragraph classifier: hashed n-gram features with a
//! logistic head. Training data comes from the pages themselves: bold-initial
//! paragraphs are entries, and paragraphs starting with a capital letter that
//! cannot begin an entry in that volume are non-entries.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::features::NgramFeaturizer;
use super::{match_bold, strip_trailing_punctuation, truncate_chars, SegmentError, TRUNCATION};
use crate::corpus::{Page, Paragraph};
use crate::logreg::{self, LogisticModel, TrainConfig, TrainReport};

pub const MODEL_FORMAT: &str = "encyc-entry-classifier";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingSet {
    pub positives: Vec<String>,
    pub negatives: Vec<String>,
}

impl TrainingSet {
    pub fn extend(&mut self, other: TrainingSet) {
        self.positives.extend(other.positives);
        self.negatives.extend(other.negatives);
    }

    pub fn len(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Initial letters of the bold headwords found in `pages`, uppercased.
pub fn volume_letters(pages: &[Page]) -> BTreeSet<char> {
    pages
        .iter()
        .flat_map(|p| &p.paragraphs)
        .filter_map(match_bold)
        .filter_map(|hw| hw.chars().next())
        .flat_map(char::to_uppercase)
        .collect()
}

/// Labels paragraphs of one volume. Paragraph text is already free of
/// markup, so positives carry no bold tags.
pub fn build_entry_training_set(pages: &[Page], volume_letters: &BTreeSet<char>) -> TrainingSet {
    let mut set = TrainingSet::default();
    for para in pages.iter().flat_map(|p| &p.paragraphs) {
        if para.text.is_empty() {
            continue;
        }
        if para.starts_bold() {
            set.positives.push(para.text.clone());
        } else if let Some(first) = para.text.chars().next() {
            if first.is_uppercase() && !volume_letters.contains(&first) {
                set.negatives.push(para.text.clone());
            }
        }
    }
    set
}

/// Builds the training set volume by volume, deriving each volume's letters
/// from its own bold headwords unless an override is given.
pub fn training_set_by_volume(
    pages: &[Page],
    overrides: &BTreeMap<String, BTreeSet<char>>,
) -> TrainingSet {
    let mut volumes: Vec<(String, Vec<Page>)> = Vec::new();
    for page in pages {
        let key = format!("{}/{}", page.edition, page.volume_id);
        match volumes.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(page.clone()),
            None => volumes.push((key, vec![page.clone()])),
        }
    }
    let mut set = TrainingSet::default();
    for (key, vol_pages) in &volumes {
        let letters = overrides
            .get(key)
            .or_else(|| overrides.get(&vol_pages[0].volume_id))
            .cloned()
            .unwrap_or_else(|| volume_letters(vol_pages));
        set.extend(build_entry_training_set(vol_pages, &letters));
    }
    set
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntryClassifier {
    pub featurizer: NgramFeaturizer,
    pub model: LogisticModel,
    pub threshold: f64,
    /// Paragraphs are cut to this many characters before featurizing.
    pub truncation: usize,
    pub report: Option<TrainReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryClassifierConfig {
    pub featurizer: NgramFeaturizer,
    pub train: TrainConfig,
    pub threshold: f64,
    pub truncation: usize,
}

impl Default for EntryClassifierConfig {
    fn default() -> Self {
        Self {
            featurizer: NgramFeaturizer::default(),
            train: TrainConfig::default(),
            threshold: 0.5,
            truncation: TRUNCATION,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryPrediction {
    pub is_entry: bool,
    pub probability: f64,
}

pub fn train_entry_classifier(
    training: &TrainingSet,
    config: &EntryClassifierConfig,
) -> Result<EntryClassifier, SegmentError> {
    let featurizer = &config.featurizer;
    let mut samples = Vec::with_capacity(training.len());
    for (texts, label) in [(&training.positives, true), (&training.negatives, false)] {
        for text in texts {
            let x = featurizer.featurize(&truncate_chars(text, config.truncation))?;
            samples.push((x, label));
        }
    }
    let (model, report) = logreg::train(&samples, featurizer.dim(), &config.train)?;
    Ok(EntryClassifier {
        featurizer: featurizer.clone(),
        model,
        threshold: config.threshold,
        truncation: config.truncation,
        report: Some(report),
    })
}

impl EntryClassifier {
    pub fn predict_text(&self, text: &str) -> Result<EntryPrediction, SegmentError> {
        let x = self
            .featurizer
            .featurize(&truncate_chars(text, self.truncation))?;
        let probability = self.model.probability(&x)?;
        Ok(EntryPrediction {
            is_entry: probability >= self.threshold,
            probability,
        })
    }

    pub fn predict_entry(&self, paragraph: &Paragraph) -> Result<EntryPrediction, SegmentError> {
        self.predict_text(&paragraph.text)
    }

    /// Model file contents.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ModelFile::from(self)).expect("model serializes")
    }

    pub fn save(&self, path: &Path) -> Result<(), SegmentError> {
        crate::http::write_atomic(path, self.to_json().as_bytes()).map_err(|source| {
            SegmentError::Io {
                path: path.to_path_buf(),
                source,
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self, SegmentError> {
        let text = std::fs::read_to_string(path).map_err(|source| SegmentError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let file: ModelFile =
            serde_json::from_str(&text).map_err(|e| SegmentError::ModelFormat(e.to_string()))?;
        file.try_into()
    }
}

/// Headword for a paragraph accepted by the classifier: the text up to the
/// first `.`, `,` or `(`, trimmed and without trailing punctuation.
pub fn classifier_headword(text: &str) -> Option<String> {
    let cut = text.find(['.', ',', '(']).unwrap_or(text.len());
    let hw = strip_trailing_punctuation(text[..cut].trim());
    (!hw.is_empty()).then(|| hw.to_string())
}

/// On-disk form. Only non-zero weights are stored.
#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    dims: usize,
    orders: Vec<usize>,
    hash_seed: u64,
    threshold: f64,
    truncation: usize,
    bias: f64,
    weights: Vec<(u32, f64)>,
}

impl From<&EntryClassifier> for ModelFile {
    fn from(c: &EntryClassifier) -> Self {
        Self {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            dims: c.featurizer.dims,
            orders: c.featurizer.orders.clone(),
            hash_seed: c.featurizer.hash_seed,
            threshold: c.threshold,
            truncation: c.truncation,
            bias: c.model.bias,
            weights: c
                .model
                .weights
                .iter()
                .enumerate()
                .filter(|(_, w)| **w != 0.0)
                .map(|(i, w)| (i as u32, *w))
                .collect(),
        }
    }
}

impl TryFrom<ModelFile> for EntryClassifier {
    type Error = SegmentError;

    fn try_from(f: ModelFile) -> Result<Self, Self::Error> {
        if f.format != MODEL_FORMAT || f.version != MODEL_VERSION {
            return Err(SegmentError::ModelFormat(format!(
                "unsupported model {} v{}",
                f.format, f.version
            )));
        }
        let featurizer = NgramFeaturizer {
            orders: f.orders,
            dims: f.dims,
            hash_seed: f.hash_seed,
        };
        let mut model = LogisticModel::zeros(featurizer.dim());
        for (i, w) in f.weights {
            let slot = model.weights.get_mut(i as usize).ok_or_else(|| {
                SegmentError::ModelFormat(format!("weight index {i} out of range"))
            })?;
            *slot = w;
        }
        model.bias = f.bias;
        Ok(Self {
            featurizer,
            model,
            threshold: f.threshold,
            truncation: f.truncation,
            report: None,
        })
    }
}
