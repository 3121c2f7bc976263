//! On-disk page store: `<root>/<edition>/<volume>/<page>.html` plus a
//! `manifest.jsonl` listing every page in reading order.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{parse_page_with, CorpusError, EditionId, NormalizationTable, Page};
use crate::http::{write_atomic, ApiClient};

pub const MANIFEST_FILE: &str = "manifest.jsonl";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub edition: EditionId,
    pub volume: String,
    pub page: String,
    /// Relative to the store root.
    pub path: String,
}

#[derive(Debug, Clone)]
pub struct PageStore {
    root: PathBuf,
    records: Vec<ManifestRecord>,
}

impl PageStore {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, CorpusError> {
        let root = root.into();
        let path = root.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(|source| CorpusError::Io {
            path: path.clone(),
            source,
        })?;
        let mut records = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let rec: ManifestRecord =
                serde_json::from_str(line).map_err(|e| CorpusError::Manifest {
                    path: path.clone(),
                    line: n + 1,
                    message: e.to_string(),
                })?;
            records.push(rec);
        }
        Ok(Self { root, records })
    }

    /// Creates an empty store (writes an empty manifest).
    pub fn create(root: impl Into<PathBuf>) -> Result<Self, CorpusError> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|source| CorpusError::Io {
            path: root.clone(),
            source,
        })?;
        let store = Self {
            root,
            records: Vec::new(),
        };
        store.write_manifest()?;
        Ok(store)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn records(&self) -> &[ManifestRecord] {
        &self.records
    }

    pub fn relative_path(edition: EditionId, volume: &str, page: &str) -> String {
        format!("{}/{volume}/{page}.html", edition.as_str())
    }

    /// Stores a page file and appends it to the manifest (replacing an
    /// existing record for the same page).
    pub fn add_page(
        &mut self,
        edition: EditionId,
        volume: &str,
        page: &str,
        html: &str,
    ) -> Result<(), CorpusError> {
        let rel = Self::relative_path(edition, volume, page);
        let path = self.root.join(&rel);
        let io = |path: &Path, source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        };
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| io(parent, e))?;
        }
        write_atomic(&path, html.as_bytes()).map_err(|e| io(&path, e))?;
        let rec = ManifestRecord {
            edition,
            volume: volume.to_string(),
            page: page.to_string(),
            path: rel,
        };
        match self
            .records
            .iter_mut()
            .find(|r| r.edition == edition && r.volume == volume && r.page == page)
        {
            Some(existing) => *existing = rec,
            None => self.records.push(rec),
        }
        self.write_manifest()
    }

    fn write_manifest(&self) -> Result<(), CorpusError> {
        let mut out = String::new();
        for rec in &self.records {
            out.push_str(&serde_json::to_string(rec).expect("manifest record serializes"));
            out.push('\n');
        }
        let path = self.root.join(MANIFEST_FILE);
        write_atomic(&path, out.as_bytes()).map_err(|source| CorpusError::Io { path, source })
    }

    pub fn load_page(
        &self,
        rec: &ManifestRecord,
        table: &NormalizationTable,
    ) -> Result<Page, CorpusError> {
        let path = self.root.join(&rec.path);
        let html = fs::read_to_string(&path).map_err(|source| CorpusError::Io {
            path: path.clone(),
            source,
        })?;
        parse_page_with(&html, rec.edition, &rec.volume, &rec.page, table)
    }

    /// Parses every page in manifest order. Pages are parsed in parallel.
    pub fn load_all(&self, table: &NormalizationTable) -> Result<Vec<Page>, CorpusError> {
        self.records
            .par_iter()
            .map(|rec| self.load_page(rec, table))
            .collect()
    }
}

/// Fills a [`PageStore`] from the archive website. Nothing in the test suite
/// depends on this; it exists so a store can be built once and then processed
/// offline.
pub struct Downloader<'a> {
    client: &'a ApiClient,
    base_url: String,
}

impl<'a> Downloader<'a> {
    pub fn new(client: &'a ApiClient, base_url: impl Into<String>) -> Self {
        Self {
            client,
            base_url: base_url.into(),
        }
    }

    pub fn page_url(&self, volume: &str, page: &str) -> String {
        format!(
            "{}/{volume}/{page}.html",
            self.base_url.trim_end_matches('/')
        )
    }

    pub fn fetch_into(
        &self,
        store: &mut PageStore,
        edition: EditionId,
        volume: &str,
        pages: &[String],
    ) -> Result<usize, CorpusError> {
        for page in pages {
            let html = self.client.get(&self.page_url(volume, page))?;
            store.add_page(edition, volume, page, &html)?;
        }
        Ok(pages.len())
    }
}
