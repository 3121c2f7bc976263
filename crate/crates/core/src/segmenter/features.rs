//! Hashed character n-gram features.
//!
//! For every order `n`, all character n-grams of the text are hashed into
//! `dims` buckets and counted. Each order's block is L2-normalized on its own
//! and the blocks are concatenated, so block `k` occupies indices
//! `[k * dims, (k + 1) * dims)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SegmentError;
use crate::logreg::SparseVector;

pub const DEFAULT_DIMS: usize = 1 << 16;
pub const DEFAULT_HASH_SEED: u64 = 0x6e67_7261_6d73;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgramFeaturizer {
    pub orders: Vec<usize>,
    pub dims: usize,
    pub hash_seed: u64,
}

impl Default for NgramFeaturizer {
    fn default() -> Self {
        Self {
            orders: vec![1, 2, 3],
            dims: DEFAULT_DIMS,
            hash_seed: DEFAULT_HASH_SEED,
        }
    }
}

/// 64-bit FNV-1a, seeded by folding the seed bytes in first.
pub(crate) fn fnv1a(seed: u64, parts: &[&[u8]]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for &b in seed
        .to_le_bytes()
        .iter()
        .chain(parts.iter().flat_map(|p| p.iter()))
    {
        h ^= b as u64;
        h = h.wrapping_mul(PRIME);
    }
    h
}

impl NgramFeaturizer {
    pub fn new(orders: Vec<usize>, dims: usize) -> Self {
        Self {
            orders,
            dims,
            ..Self::default()
        }
    }

    /// Total feature dimension.
    pub fn dim(&self) -> usize {
        self.dims * self.orders.len()
    }

    pub fn bucket(&self, n: usize, gram: &str) -> u32 {
        let h = fnv1a(
            self.hash_seed,
            &[&(n as u32).to_le_bytes(), gram.as_bytes()],
        );
        (h % self.dims as u64) as u32
    }

    pub fn featurize(&self, text: &str) -> Result<SparseVector, SegmentError> {
        if text.is_empty() {
            return Err(SegmentError::EmptyText);
        }
        let chars: Vec<char> = text.chars().collect();
        let mut entries = Vec::new();
        let mut gram = String::new();
        for (block, &n) in self.orders.iter().enumerate() {
            if n == 0 || n > chars.len() {
                continue;
            }
            let mut counts: BTreeMap<u32, f64> = BTreeMap::new();
            for window in chars.windows(n) {
                gram.clear();
                gram.extend(window);
                *counts.entry(self.bucket(n, &gram)).or_default() += 1.0;
            }
            let norm = counts.values().map(|c| c * c).sum::<f64>().sqrt();
            let offset = (block * self.dims) as u32;
            entries.extend(
                counts
                    .into_iter()
                    .map(|(b, c)| (offset + b, (c / norm) as f32)),
            );
        }
        Ok(SparseVector {
            dim: self.dim(),
            entries,
        })
    }
}

/// Featurizes with explicit orders and bucket count (default hash seed).
pub fn ngram_featurize(
    text: &str,
    orders: &[usize],
    dims: usize,
) -> Result<SparseVector, SegmentError> {
    NgramFeaturizer::new(orders.to_vec(), dims).featurize(text)
}
