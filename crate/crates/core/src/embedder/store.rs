//! Precomputed embeddings keyed by the SHA-256 of the embedded text.
//!
//! Binary layout, all integers little-endian:
//!
//! ```text
//! magic     8 bytes  "EMBSTORE"
//! version   u32      1
//! dim       u32
//! tag_len   u32
//! tag       tag_len bytes of UTF-8 (provider tag)
//! count     u64
//! records   count x { sha256: 32 bytes, values: dim x f32 }
//! ```
//!
//! Records are written in ascending hash order. The JSONL debug form has a
//! header line `{"dim":..,"provider_tag":..}` followed by one
//! `{"sha256":"<hex>","vector":[..]}` line per record.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{EmbedError, Embedder, Embedding};
use crate::http::write_atomic;

pub const STORE_MAGIC: &[u8; 8] = b"EMBSTORE";
pub const STORE_VERSION: u32 = 1;

pub fn content_hash(text: &str) -> [u8; 32] {
    Sha256::digest(text.as_bytes()).into()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore {
    dim: usize,
    provider_tag: String,
    vectors: BTreeMap<[u8; 32], Embedding>,
}

#[derive(Serialize, Deserialize)]
struct JsonlHeader {
    dim: usize,
    provider_tag: String,
}

#[derive(Serialize, Deserialize)]
struct JsonlRecord {
    sha256: String,
    vector: Vec<f32>,
}

fn store_err(path: &Path, message: impl Into<String>) -> EmbedError {
    EmbedError::Store {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], EmbedError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| store_err(self.path, format!("truncated at byte {}", self.pos)))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32, EmbedError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, EmbedError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

impl EmbeddingStore {
    pub fn new(dim: usize, provider_tag: impl Into<String>) -> Self {
        Self {
            dim,
            provider_tag: provider_tag.into(),
            vectors: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn provider_tag(&self) -> &str {
        &self.provider_tag
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Adds or replaces the vector for `text`.
    pub fn insert(&mut self, text: &str, vector: Embedding) -> Result<(), EmbedError> {
        self.insert_hash(content_hash(text), vector)
    }

    pub fn insert_hash(&mut self, hash: [u8; 32], vector: Embedding) -> Result<(), EmbedError> {
        if vector.len() != self.dim {
            return Err(EmbedError::DimMismatch {
                expected: self.dim,
                got: vector.len(),
            });
        }
        self.vectors.insert(hash, vector);
        Ok(())
    }

    pub fn get(&self, text: &str) -> Option<&Embedding> {
        self.vectors.get(&content_hash(text))
    }

    /// Embeds every text with `embedder` and stores the results.
    pub fn fill_from(&mut self, embedder: &dyn Embedder, texts: &[&str]) -> Result<(), EmbedError> {
        for (text, v) in texts.iter().zip(embedder.embed(texts)?) {
            self.insert(text, v)?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let tag = self.provider_tag.as_bytes();
        let mut out = Vec::with_capacity(28 + tag.len() + self.len() * (32 + 4 * self.dim));
        out.extend_from_slice(STORE_MAGIC);
        out.extend_from_slice(&STORE_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.dim as u32).to_le_bytes());
        out.extend_from_slice(&(tag.len() as u32).to_le_bytes());
        out.extend_from_slice(tag);
        out.extend_from_slice(&(self.vectors.len() as u64).to_le_bytes());
        for (hash, v) in &self.vectors {
            out.extend_from_slice(hash);
            for x in v {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], path: &Path) -> Result<Self, EmbedError> {
        let mut r = Reader {
            bytes,
            pos: 0,
            path,
        };
        if r.take(8)? != STORE_MAGIC {
            return Err(store_err(path, "bad magic"));
        }
        let version = r.u32()?;
        if version != STORE_VERSION {
            return Err(store_err(path, format!("unsupported version {version}")));
        }
        let dim = r.u32()? as usize;
        if dim == 0 {
            return Err(store_err(path, "dim is zero"));
        }
        let tag_len = r.u32()? as usize;
        let provider_tag = std::str::from_utf8(r.take(tag_len)?)
            .map_err(|_| store_err(path, "provider tag is not UTF-8"))?
            .to_string();
        let count = r.u64()?;
        let mut store = Self::new(dim, provider_tag);
        for _ in 0..count {
            let hash: [u8; 32] = r.take(32)?.try_into().unwrap();
            let v = r
                .take(4 * dim)?
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
                .collect();
            store.vectors.insert(hash, v);
        }
        if r.pos != bytes.len() {
            return Err(store_err(path, "trailing bytes after last record"));
        }
        Ok(store)
    }

    pub fn write(&self, path: &Path) -> Result<(), EmbedError> {
        write_atomic(path, &self.to_bytes()).map_err(|source| EmbedError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<Self, EmbedError> {
        let bytes = std::fs::read(path).map_err(|source| EmbedError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_bytes(&bytes, path)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&JsonlHeader {
            dim: self.dim,
            provider_tag: self.provider_tag.clone(),
        })
        .expect("header serializes");
        out.push('\n');
        for (hash, v) in &self.vectors {
            let rec = JsonlRecord {
                sha256: hex::encode(hash),
                vector: v.clone(),
            };
            out.push_str(&serde_json::to_string(&rec).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str, path: &Path) -> Result<Self, EmbedError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines
            .next()
            .ok_or_else(|| store_err(path, "missing header"))?;
        let header: JsonlHeader =
            serde_json::from_str(first).map_err(|e| store_err(path, format!("header: {e}")))?;
        let mut store = Self::new(header.dim, header.provider_tag);
        for (n, line) in lines {
            let rec: JsonlRecord = serde_json::from_str(line)
                .map_err(|e| store_err(path, format!("line {}: {e}", n + 1)))?;
            let hash: [u8; 32] = hex::decode(&rec.sha256)
                .ok()
                .and_then(|b| b.try_into().ok())
                .ok_or_else(|| store_err(path, format!("line {}: bad sha256", n + 1)))?;
            store.insert_hash(hash, rec.vector)?;
        }
        Ok(store)
    }
}

/// Serves vectors from an [`EmbeddingStore`]; unknown texts are an error.
#[derive(Debug, Clone)]
pub struct FileEmbedder {
    store: EmbeddingStore,
}

impl FileEmbedder {
    pub fn new(store: EmbeddingStore) -> Self {
        Self { store }
    }

    pub fn open(path: &Path) -> Result<Self, EmbedError> {
        EmbeddingStore::read(path).map(Self::new)
    }
}

impl Embedder for FileEmbedder {
    fn dim(&self) -> usize {
        self.store.dim
    }

    fn provider_tag(&self) -> String {
        format!("file:{}", self.store.provider_tag)
    }

    fn embed(&self, texts: &[&str]) -> Result<Vec<Embedding>, EmbedError> {
        texts
            .iter()
            .map(|t| {
                let hash = content_hash(t);
                self.store
                    .vectors
                    .get(&hash)
                    .cloned()
                    .ok_or_else(|| EmbedError::MissingEmbedding {
                        hash: hex::encode(hash),
                    })
            })
            .collect()
    }
}
