//! Shared helpers for the integration tests.
#![allow(dead_code)]

pub mod oracles;

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(rel: &str) -> PathBuf {
    fixtures().join(rel)
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Vec<T> {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(n, l)| {
            serde_json::from_str(l).unwrap_or_else(|e| panic!("{}:{}: {e}", path.display(), n + 1))
        })
        .collect()
}

/// Set ENCYC_BLESS=1 to rewrite golden files instead of comparing.
pub fn blessing() -> bool {
    std::env::var_os("ENCYC_BLESS").is_some_and(|v| v != "0")
}

/// Compares `actual` with a committed golden file, or rewrites it when
/// blessing.
pub fn check_golden(rel: &str, actual: &str) -> Result<(), String> {
    let path = fixture(rel);
    if blessing() {
        std::fs::write(&path, actual).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(());
    }
    let expected =
        std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        let line = expected
            .lines()
            .zip(actual.lines())
            .position(|(a, b)| a != b)
            .map_or_else(|| "length".to_string(), |n| format!("line {}", n + 1));
        Err(format!("{rel} differs from golden file ({line})"))
    }
}

use encyc::pipeline::{Config, Pipeline, Stage};

/// Pipeline over the fixture corpus in a fresh temporary work directory.
pub fn fixture_pipeline() -> (tempfile::TempDir, Pipeline) {
    let dir = tempfile::tempdir().unwrap();
    let config = Config::load(&fixture("pipeline.toml")).unwrap();
    let p = Pipeline::new(config, dir.path()).unwrap();
    (dir, p)
}

pub fn run_through(p: &Pipeline, last: Stage) {
    for s in Stage::ALL {
        p.run_stage(s).unwrap_or_else(|e| panic!("{s}: {e}"));
        if s == last {
            break;
        }
    }
}
