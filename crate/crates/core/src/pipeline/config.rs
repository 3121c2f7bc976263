//! `encyc.toml`. Every threshold is a named key; missing keys take their
//! defaults. Relative paths are resolved against the config file's directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::crossref::CROSSREF_MAX_LEN;
use crate::embedder::ProviderSpec;
use crate::http::ApiMode;
use crate::matcher::{HnswParams, IndexMode, MATCH_K, MATCH_THRESHOLD};
use crate::segmenter::{INDEX_THRESHOLD, TRUNCATION};
use crate::wikilinker::{Endpoints, LINK_THRESHOLD, RADIUS_KM, SEARCH_K};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub corpus: CorpusSection,
    pub segment: SegmentSection,
    pub crossref: CrossrefSection,
    pub embedder: ProviderSpec,
    pub location: LocationSection,
    #[serde(rename = "match")]
    pub matching: MatchSection,
    pub link: LinkSection,
    pub stats: StatsSection,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusSection {
    /// Page store root (holds `manifest.jsonl`).
    pub pages: PathBuf,
    /// Replacement for the bundled normalization table.
    pub normalization: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SegmentSection {
    pub index_threshold: f64,
    pub truncation: usize,
    /// Train and use the entry classifier.
    pub classifier: bool,
    pub classifier_threshold: f64,
    /// Headword initials per volume (`"first/A"` or `"A"`), for volumes whose
    /// bold headwords do not reveal them.
    pub volume_letters: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrossrefSection {
    pub max_len: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocationSection {
    /// JSONL of `{text, label}`.
    pub labels: PathBuf,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexKind {
    Exact,
    Hnsw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatchSection {
    pub threshold: f64,
    pub k: usize,
    pub index: IndexKind,
    pub hnsw: HnswParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkSection {
    pub threshold: f64,
    pub k: usize,
    pub radius_km: f64,
    pub query_expansion: bool,
    pub api_mode: ApiMode,
    pub rate_limit: f64,
    /// Fixture directory for record/replay.
    pub fixtures: Option<PathBuf>,
    pub wikidata_url: String,
    pub wikipedia_url: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatsSection {
    pub top_n: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 0,
            corpus: CorpusSection::default(),
            segment: SegmentSection::default(),
            crossref: CrossrefSection::default(),
            embedder: ProviderSpec::default(),
            location: LocationSection::default(),
            matching: MatchSection::default(),
            link: LinkSection::default(),
            stats: StatsSection::default(),
            base_dir: PathBuf::from("."),
        }
    }
}

impl Default for CorpusSection {
    fn default() -> Self {
        Self {
            pages: "corpus".into(),
            normalization: None,
        }
    }
}

impl Default for SegmentSection {
    fn default() -> Self {
        Self {
            index_threshold: INDEX_THRESHOLD,
            truncation: TRUNCATION,
            classifier: true,
            classifier_threshold: 0.5,
            volume_letters: BTreeMap::new(),
        }
    }
}

impl Default for CrossrefSection {
    fn default() -> Self {
        Self {
            max_len: CROSSREF_MAX_LEN,
        }
    }
}

impl Default for LocationSection {
    fn default() -> Self {
        Self {
            labels: "location_labels.jsonl".into(),
            threshold: 0.5,
        }
    }
}

impl Default for MatchSection {
    fn default() -> Self {
        Self {
            threshold: MATCH_THRESHOLD,
            k: MATCH_K,
            index: IndexKind::Exact,
            hnsw: HnswParams::default(),
        }
    }
}

impl Default for LinkSection {
    fn default() -> Self {
        let ep = Endpoints::default();
        Self {
            threshold: LINK_THRESHOLD,
            k: SEARCH_K,
            radius_km: RADIUS_KM,
            query_expansion: false,
            api_mode: ApiMode::Replay,
            rate_limit: 5.0,
            fixtures: Some("wiki".into()),
            wikidata_url: ep.wikidata,
            wikipedia_url: ep.wikipedia,
        }
    }
}

impl Default for StatsSection {
    fn default() -> Self {
        Self { top_n: 5 }
    }
}

fn config_error(message: impl Into<String>) -> PipelineError {
    PipelineError::ConfigError(message.into())
}

impl Config {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, PipelineError> {
        let mut config: Config = toml::from_str(text).map_err(|e| config_error(e.to_string()))?;
        config.base_dir = base_dir.to_path_buf();
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), PipelineError> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(config_error(format!("{name} must be in [0, 1], got {v}")))
            }
        };
        unit("segment.index_threshold", self.segment.index_threshold)?;
        unit(
            "segment.classifier_threshold",
            self.segment.classifier_threshold,
        )?;
        unit("location.threshold", self.location.threshold)?;
        if !(-1.0..=1.0).contains(&self.matching.threshold) {
            return Err(config_error("match.threshold must be in [-1, 1]"));
        }
        if !(-1.0..=1.0).contains(&self.link.threshold) {
            return Err(config_error("link.threshold must be in [-1, 1]"));
        }
        if self.segment.truncation == 0 {
            return Err(config_error("segment.truncation must be positive"));
        }
        if self.matching.k == 0 {
            return Err(config_error("match.k must be positive"));
        }
        // Written so that NaN fails too.
        if !(self.link.radius_km > 0.0) {
            return Err(config_error("link.radius_km must be positive"));
        }
        if !(self.link.rate_limit > 0.0) {
            return Err(config_error("link.rate_limit must be positive"));
        }
        if self.link.api_mode != ApiMode::Live && self.link.fixtures.is_none() {
            return Err(config_error("link.fixtures is required outside live mode"));
        }
        for (vol, letters) in &self.segment.volume_letters {
            if letters.is_empty() {
                return Err(config_error(format!(
                    "segment.volume_letters.{vol} is empty"
                )));
            }
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// Embedder spec with relative paths resolved and the run seed applied.
    pub fn embedder_spec(&self) -> ProviderSpec {
        let mut spec = self.embedder.clone();
        spec.seed = self.seed;
        if spec.kind == crate::embedder::ProviderKind::File {
            spec.endpoint_or_path = self
                .resolve(Path::new(&spec.endpoint_or_path))
                .to_string_lossy()
                .into_owned();
        }
        spec
    }

    pub fn index_mode(&self) -> IndexMode {
        match self.matching.index {
            IndexKind::Exact => IndexMode::Exact,
            IndexKind::Hnsw => IndexMode::Hnsw(HnswParams {
                seed: self.seed,
                ..self.matching.hnsw
            }),
        }
    }

    pub fn endpoints(&self) -> Endpoints {
        Endpoints {
            wikidata: self.link.wikidata_url.clone(),
            wikipedia: self.link.wikipedia_url.clone(),
        }
    }

    pub fn volume_letter_overrides(&self) -> BTreeMap<String, std::collections::BTreeSet<char>> {
        self.segment
            .volume_letters
            .iter()
            .map(|(k, v)| (k.clone(), v.chars().flat_map(char::to_uppercase).collect()))
            .collect()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
