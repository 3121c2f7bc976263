//! Text embeddings behind one trait, with three providers: a deterministic
//! hashing mock, a precomputed file store keyed by content hash, and an
//! external process or HTTP service speaking newline-delimited JSON.
//!
//! Every provider returns L2-normalized `f32` vectors.

mod external;
mod mock;
mod store;

pub use external::{ExternalEmbedder, ExternalRequest, ExternalResponse};
pub use mock::MockEmbedder;
pub use store::{content_hash, EmbeddingStore, FileEmbedder, STORE_MAGIC, STORE_VERSION};

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub type Embedding = Vec<f32>;

pub const DEFAULT_MOCK_DIM: usize = 256;

#[derive(Debug, thiserror::Error)]
pub enum EmbedError {
    #[error("cannot embed empty text")]
    EmptyText,
    #[error("no stored embedding for text with sha256 {hash}")]
    MissingEmbedding { hash: String },
    #[error("embedding provider unavailable: {0}")]
    ProviderUnavailable(String),
    #[error("provider protocol error: {0}")]
    Protocol(String),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("embedding store {path}: {message}")]
    Store { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("bad provider spec: {0}")]
    Spec(String),
}

pub trait Embedder: Send + Sync {
    fn dim(&self) -> usize;
    /// Identifies the provider and its settings in run manifests.
    fn provider_tag(&self) -> String;
    /// One normalized vector per text, in input order.
    fn embed(&self, texts: &[&str]) -> Result<Vec<Embedding>, EmbedError>;

    fn embed_one(&self, text: &str) -> Result<Embedding, EmbedError> {
        Ok(self.embed(&[text])?.pop().expect("one vector per text"))
    }
}

/// Scales `v` to unit length in place; a zero vector stays zero.
pub fn normalize(v: &mut [f32]) {
    let norm = v.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x = (*x as f64 / norm) as f32;
        }
    }
}

/// Plain dot product accumulated in `f64`, left to right. The matcher and
/// its tests rely on this exact summation order.
pub fn dot(a: &[f32], b: &[f32]) -> f64 {
    let mut acc = 0.0f64;
    for (&x, &y) in a.iter().zip(b) {
        acc += x as f64 * y as f64;
    }
    acc
}

pub fn cosine_similarity(a: &[f32], b: &[f32]) -> Result<f64, EmbedError> {
    if a.len() != b.len() {
        return Err(EmbedError::DimMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(EmbedError::ZeroVector);
    }
    Ok((dot(a, b) / (na * nb)).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProviderKind {
    Mock,
    File,
    External,
}

impl FromStr for ProviderKind {
    type Err = EmbedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mock" => Ok(Self::Mock),
            "file" => Ok(Self::File),
            "external" => Ok(Self::External),
            other => Err(EmbedError::Spec(format!("unknown provider kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProviderSpec {
    pub kind: ProviderKind,
    pub dim: usize,
    /// File path for `file`; an `http(s)://` URL or a command line for
    /// `external`. Unused for `mock`.
    pub endpoint_or_path: String,
    pub seed: u64,
    pub batch_size: usize,
}

impl Default for ProviderSpec {
    fn default() -> Self {
        Self {
            kind: ProviderKind::Mock,
            dim: DEFAULT_MOCK_DIM,
            endpoint_or_path: String::new(),
            seed: 0,
            batch_size: 64,
        }
    }
}

impl ProviderSpec {
    pub fn build(&self) -> Result<Box<dyn Embedder>, EmbedError> {
        if self.dim == 0 {
            return Err(EmbedError::Spec("dim must be positive".into()));
        }
        match self.kind {
            ProviderKind::Mock => Ok(Box::new(MockEmbedder::new(self.dim, self.seed))),
            ProviderKind::File => {
                let store = EmbeddingStore::read(std::path::Path::new(&self.endpoint_or_path))?;
                if store.dim() != self.dim {
                    return Err(EmbedError::DimMismatch {
                        expected: self.dim,
                        got: store.dim(),
                    });
                }
                Ok(Box::new(FileEmbedder::new(store)))
            }
            ProviderKind::External => {
                let ep = self.endpoint_or_path.trim();
                let ext = if ep.starts_with("http://") || ep.starts_with("https://") {
                    ExternalEmbedder::http(ep, self.dim)
                } else {
                    let argv: Vec<String> = ep.split_whitespace().map(str::to_string).collect();
                    ExternalEmbedder::spawn(&argv, self.dim)?
                };
                Ok(Box::new(ext.with_batch_size(self.batch_size)))
            }
        }
    }
}
