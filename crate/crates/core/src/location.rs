//! Location/non-location head over document embeddings.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::embedder::{EmbedError, Embedder};
use crate::logreg::{self, TrainConfig, TrainError, TrainReport};
use crate::segmenter::{truncate_chars, Entry, TRUNCATION};

#[derive(Debug, thiserror::Error)]
pub enum LocationError {
    #[error("training data needs both classes (positives: {positives}, negatives: {negatives})")]
    SingleClassTraining { positives: usize, negatives: usize },
    #[error("model dimension {expected} does not match embedding dimension {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl From<TrainError> for LocationError {
    fn from(e: TrainError) -> Self {
        match e {
            TrainError::SingleClassTraining {
                positives,
                negatives,
            } => Self::SingleClassTraining {
                positives,
                negatives,
            },
            TrainError::DimMismatch { expected, got } => Self::DimMismatch { expected, got },
        }
    }
}

/// One line of a location label file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledText {
    pub text: String,
    pub label: bool,
}

pub fn load_labels(path: &Path) -> Result<Vec<LabeledText>, LocationError> {
    let text = std::fs::read_to_string(path).map_err(|source| LocationError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            serde_json::from_str(l).map_err(|e| LocationError::Format {
                path: path.to_path_buf(),
                message: format!("line {}: {e}", n + 1),
            })
        })
        .collect()
}

/// Model file contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationModel {
    pub dim: usize,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub threshold: f64,
    pub provider_tag: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocationConfig {
    pub train: TrainConfig,
    pub threshold: f64,
    pub truncation: usize,
}

impl Default for LocationConfig {
    fn default() -> Self {
        Self {
            train: TrainConfig::default(),
            threshold: 0.5,
            truncation: TRUNCATION,
        }
    }
}

pub fn train_location_model(
    labeled: &[LabeledText],
    embedder: &dyn Embedder,
    config: &LocationConfig,
) -> Result<(LocationModel, TrainReport), LocationError> {
    let positives = labeled.iter().filter(|l| l.label).count();
    if positives == 0 || positives == labeled.len() {
        return Err(LocationError::SingleClassTraining {
            positives,
            negatives: labeled.len() - positives,
        });
    }
    let texts: Vec<String> = labeled
        .iter()
        .map(|l| truncate_chars(&l.text, config.truncation))
        .collect();
    let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    let vectors = embedder.embed(&refs)?;
    let samples: Vec<(Vec<f32>, bool)> = vectors
        .into_iter()
        .zip(labeled.iter().map(|l| l.label))
        .collect();
    let (model, report) = logreg::train(&samples, embedder.dim(), &config.train)?;
    Ok((
        LocationModel {
            dim: embedder.dim(),
            weights: model.weights,
            bias: model.bias,
            threshold: config.threshold,
            provider_tag: embedder.provider_tag(),
        },
        report,
    ))
}

impl LocationModel {
    fn check_dim(&self, embedder: &dyn Embedder) -> Result<(), LocationError> {
        if embedder.dim() != self.dim {
            return Err(LocationError::DimMismatch {
                expected: self.dim,
                got: embedder.dim(),
            });
        }
        Ok(())
    }

    /// Probability for an already embedded text.
    pub fn probability(&self, vector: &[f32]) -> Result<f64, LocationError> {
        if vector.len() != self.dim {
            return Err(LocationError::DimMismatch {
                expected: self.dim,
                got: vector.len(),
            });
        }
        let z = vector
            .iter()
            .zip(&self.weights)
            .map(|(&x, w)| x as f64 * w)
            .sum::<f64>()
            + self.bias;
        Ok(logreg::sigmoid(z))
    }

    pub fn save(&self, path: &Path) -> Result<(), LocationError> {
        let json = serde_json::to_string(self).expect("model serializes");
        crate::http::write_atomic(path, json.as_bytes()).map_err(|source| LocationError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, LocationError> {
        let text = std::fs::read_to_string(path).map_err(|source| LocationError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let model: Self = serde_json::from_str(&text).map_err(|e| LocationError::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if model.weights.len() != model.dim {
            return Err(LocationError::Format {
                path: path.to_path_buf(),
                message: format!("{} weights for dim {}", model.weights.len(), model.dim),
            });
        }
        Ok(model)
    }
}

/// Cross-references are never locations and are not embedded.
pub fn classify_location(
    model: &LocationModel,
    entry: &Entry,
    embedder: &dyn Embedder,
) -> Result<(bool, f64), LocationError> {
    model.check_dim(embedder)?;
    if entry.flags.is_crossref {
        return Ok((false, 0.0));
    }
    let v = embedder.embed_one(&entry.truncated_text)?;
    let p = model.probability(&v)?;
    Ok((p >= model.threshold, p))
}

/// Classifies every entry, embedding all non-crossref texts in one call, and
/// writes the result into the entry flags.
pub fn classify_entries(
    model: &LocationModel,
    entries: &mut [Entry],
    embedder: &dyn Embedder,
) -> Result<usize, LocationError> {
    model.check_dim(embedder)?;
    let todo: Vec<usize> = (0..entries.len())
        .filter(|&i| !entries[i].flags.is_crossref)
        .collect();
    let texts: Vec<&str> = todo
        .iter()
        .map(|&i| entries[i].truncated_text.as_str())
        .collect();
    let vectors = if texts.is_empty() {
        Vec::new()
    } else {
        embedder.embed(&texts)?
    };
    let mut probs = vec![None; entries.len()];
    for (&i, v) in todo.iter().zip(&vectors) {
        probs[i] = Some(model.probability(v)?);
    }
    let mut positives = 0;
    for (e, p) in entries.iter_mut().zip(probs) {
        let p = p.unwrap_or(0.0);
        e.flags.is_location = p >= model.threshold && !e.flags.is_crossref;
        e.flags.location_prob = Some(p);
        positives += usize::from(e.flags.is_location);
    }
    Ok(positives)
}
