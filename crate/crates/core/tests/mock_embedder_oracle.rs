//! The mock embedder against vectors computed by the Python reference in
//! fixtures/tools/oracle.py. Both sides must agree bit for bit, otherwise the
//! oracle-derived linking and matching tables could not be reproduced.

mod common;

use encyc::embedder::{cosine_similarity, Embedder, MockEmbedder};
use serde::Deserialize;

#[derive(Deserialize)]
struct Row {
    text: String,
    dim: usize,
    seed: u64,
    vector: Vec<f64>,
}

#[test]
fn vectors_match_reference_bitwise() {
    let rows: Vec<Row> = common::read_jsonl(&common::fixture("embedder/mock_vectors.jsonl"));
    assert!(rows.len() >= 20);
    for row in rows {
        let v = MockEmbedder::new(row.dim, row.seed)
            .embed_text(&row.text)
            .unwrap();
        assert_eq!(v.len(), row.vector.len());
        for (i, (&got, &want)) in v.iter().zip(&row.vector).enumerate() {
            assert_eq!(
                got.to_bits(),
                (want as f32).to_bits(),
                "{:?} dim {} seed {} component {i}",
                row.text,
                row.dim,
                row.seed
            );
        }
    }
}

#[test]
fn cosine_is_symmetric_on_reference_vectors() {
    let rows: Vec<Row> = common::read_jsonl(&common::fixture("embedder/mock_vectors.jsonl"));
    let e = MockEmbedder::new(256, 0);
    let vs: Vec<Vec<f32>> = rows
        .iter()
        .filter(|r| r.dim == 256)
        .map(|r| e.embed(&[r.text.as_str()]).unwrap().remove(0))
        .collect();
    for a in &vs {
        for b in &vs {
            let ab = cosine_similarity(a, b).unwrap();
            assert_eq!(ab, cosine_similarity(b, a).unwrap());
            assert!(ab.abs() <= 1.0 + 1e-12);
        }
    }
}
