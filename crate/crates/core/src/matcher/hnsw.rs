//! Hierarchical navigable small world graph over unit vectors.
//!
//! Similarity is the dot product, so "closer" means "larger". Levels are
//! drawn from a seeded ChaCha stream and nodes are inserted in order, so the
//! same vectors and seed always give the same graph.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embedder::dot;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HnswParams {
    /// Neighbors per node on upper layers; layer 0 allows twice as many.
    pub m: usize,
    pub ef_construction: usize,
    pub ef_search: usize,
    pub seed: u64,
}

impl Default for HnswParams {
    fn default() -> Self {
        Self {
            m: 16,
            ef_construction: 200,
            ef_search: 100,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cand {
    sim: f64,
    id: u32,
}

impl Eq for Cand {}

impl Ord for Cand {
    /// Higher similarity first, then lower id.
    fn cmp(&self, other: &Self) -> Ordering {
        self.sim
            .total_cmp(&other.sim)
            .then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialOrd for Cand {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub struct Hnsw {
    params: HnswParams,
    dim: usize,
    level_mult: f64,
    rng: ChaCha8Rng,
    /// links[node][layer]
    links: Vec<Vec<Vec<u32>>>,
    entry: Option<u32>,
    top: usize,
}

impl Hnsw {
    pub fn new(dim: usize, params: HnswParams) -> Self {
        let m = params.m.max(2);
        Self {
            params: HnswParams { m, ..params },
            dim,
            level_mult: 1.0 / (m as f64).ln(),
            rng: ChaCha8Rng::seed_from_u64(params.seed),
            links: Vec::new(),
            entry: None,
            top: 0,
        }
    }

    fn vec<'a>(&self, data: &'a [f32], id: u32) -> &'a [f32] {
        let start = id as usize * self.dim;
        &data[start..start + self.dim]
    }

    fn cap(&self, layer: usize) -> usize {
        if layer == 0 {
            2 * self.params.m
        } else {
            self.params.m
        }
    }

    /// Adds node `links.len()`; its vector must already be in `data`.
    pub fn insert(&mut self, data: &[f32]) {
        let id = self.links.len() as u32;
        let u: f64 = self.rng.gen_range(f64::MIN_POSITIVE..1.0);
        let level = (-u.ln() * self.level_mult).floor() as usize;
        self.links.push(vec![Vec::new(); level + 1]);

        let Some(mut ep) = self.entry else {
            self.entry = Some(id);
            self.top = level;
            return;
        };
        let q = self.vec(data, id);
        let mut ep_sim = dot(q, self.vec(data, ep));
        for layer in (level + 1..=self.top).rev() {
            (ep, ep_sim) = self.greedy(data, q, ep, ep_sim, layer);
        }
        let mut eps = vec![Cand {
            sim: ep_sim,
            id: ep,
        }];
        for layer in (0..=level.min(self.top)).rev() {
            let found = self.search_layer(data, q, &eps, self.params.ef_construction, layer);
            let neighbors: Vec<u32> = found.iter().take(self.params.m).map(|c| c.id).collect();
            for &n in &neighbors {
                self.links[n as usize][layer].push(id);
                if self.links[n as usize][layer].len() > self.cap(layer) {
                    self.prune(data, n, layer);
                }
            }
            self.links[id as usize][layer] = neighbors;
            eps = found;
        }
        if level > self.top {
            self.top = level;
            self.entry = Some(id);
        }
    }

    fn prune(&mut self, data: &[f32], node: u32, layer: usize) {
        let base = self.vec(data, node);
        let mut cands: Vec<Cand> = self.links[node as usize][layer]
            .iter()
            .map(|&id| Cand {
                sim: dot(base, self.vec(data, id)),
                id,
            })
            .collect();
        cands.sort_by(|a, b| b.cmp(a));
        cands.truncate(self.cap(layer));
        self.links[node as usize][layer] = cands.into_iter().map(|c| c.id).collect();
    }

    fn greedy(
        &self,
        data: &[f32],
        q: &[f32],
        mut ep: u32,
        mut sim: f64,
        layer: usize,
    ) -> (u32, f64) {
        loop {
            let mut moved = false;
            for &n in &self.links[ep as usize][layer] {
                let s = dot(q, self.vec(data, n));
                if (Cand { sim: s, id: n }) > (Cand { sim, id: ep }) {
                    ep = n;
                    sim = s;
                    moved = true;
                }
            }
            if !moved {
                return (ep, sim);
            }
        }
    }

    /// Best `ef` nodes reachable on `layer`, best first.
    fn search_layer(
        &self,
        data: &[f32],
        q: &[f32],
        eps: &[Cand],
        ef: usize,
        layer: usize,
    ) -> Vec<Cand> {
        let mut visited = vec![false; self.links.len()];
        let mut frontier: BinaryHeap<Cand> = BinaryHeap::new();
        // Min-heap of the current best `ef`.
        let mut best: BinaryHeap<Reverse<Cand>> = BinaryHeap::new();
        for &c in eps {
            if !std::mem::replace(&mut visited[c.id as usize], true) {
                frontier.push(c);
                best.push(Reverse(c));
            }
        }
        while best.len() > ef {
            best.pop();
        }
        while let Some(c) = frontier.pop() {
            let worst = best.peek().expect("non-empty").0;
            if c < worst && best.len() >= ef {
                break;
            }
            for &n in &self.links[c.id as usize][layer] {
                if std::mem::replace(&mut visited[n as usize], true) {
                    continue;
                }
                let cand = Cand {
                    sim: dot(q, self.vec(data, n)),
                    id: n,
                };
                if best.len() < ef || cand > best.peek().expect("non-empty").0 {
                    frontier.push(cand);
                    best.push(Reverse(cand));
                    if best.len() > ef {
                        best.pop();
                    }
                }
            }
        }
        let mut out: Vec<Cand> = best.into_iter().map(|r| r.0).collect();
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    /// Approximate top `k` as (node, similarity), best first.
    pub fn search(&self, data: &[f32], q: &[f32], k: usize) -> Vec<(usize, f64)> {
        let Some(mut ep) = self.entry else {
            return Vec::new();
        };
        if k == 0 {
            return Vec::new();
        }
        let mut sim = dot(q, self.vec(data, ep));
        for layer in (1..=self.top).rev() {
            (ep, sim) = self.greedy(data, q, ep, sim, layer);
        }
        let ef = self.params.ef_search.max(k);
        self.search_layer(data, q, &[Cand { sim, id: ep }], ef, 0)
            .into_iter()
            .take(k)
            .map(|c| (c.id as usize, c.sim))
            .collect()
    }
}
