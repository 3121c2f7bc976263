//! Deterministic stand-in for a sentence encoder.
//!
//! Lowercased text is padded with spaces and cut into character 3- and
//! 4-grams plus whole words. Each feature is hashed to a bucket and a sign
//! (feature hashing), the counts are summed and the vector is normalized.
//! Texts that share many substrings end up close; there is no semantics.

use super::{normalize, EmbedError, Embedder, Embedding};
use crate::segmenter::fnv1a_seeded;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MockEmbedder {
    dim: usize,
    seed: u64,
}

const ORDERS: [usize; 2] = [3, 4];

impl MockEmbedder {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim > 0, "mock embedder needs a positive dimension");
        Self { dim, seed }
    }

    fn add(&self, v: &mut [f32], kind: u8, feature: &str) {
        let h = fnv1a_seeded(self.seed, &[&[kind], feature.as_bytes()]);
        let bucket = (h % self.dim as u64) as usize;
        let sign = if h >> 63 == 1 { -1.0 } else { 1.0 };
        v[bucket] += sign;
    }

    pub fn embed_text(&self, text: &str) -> Result<Embedding, EmbedError> {
        if text.trim().is_empty() {
            return Err(EmbedError::EmptyText);
        }
        let lower = text.to_lowercase();
        let mut v = vec![0.0f32; self.dim];

        let padded: Vec<char> = std::iter::once(' ')
            .chain(lower.chars())
            .chain(std::iter::once(' '))
            .collect();
        let mut gram = String::new();
        for n in ORDERS {
            for w in padded.windows(n) {
                gram.clear();
                gram.extend(w);
                self.add(&mut v, n as u8, &gram);
            }
        }
        for word in lower
            .split(|c: char| !c.is_alphanumeric())
            .filter(|w| !w.is_empty())
        {
            self.add(&mut v, 0, word);
        }
        normalize(&mut v);
        Ok(v)
    }
}

impl Embedder for MockEmbedder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn provider_tag(&self) -> String {
        format!("mock-ngram-v1:dim={}:seed={}", self.dim, self.seed)
    }

    fn embed(&self, texts: &[&str]) -> Result<Vec<Embedding>, EmbedError> {
        texts.iter().map(|t| self.embed_text(t)).collect()
    }
}
