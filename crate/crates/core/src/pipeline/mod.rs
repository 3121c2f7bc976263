//! Stage orchestration over a work directory.
//!
//! Each stage reads only the artifacts it declares, writes its outputs
//! atomically and records input/output checksums in `manifest.json`.
//!
//! | stage | reads | writes |
//! |---|---|---|
//! | ingest | page store | `pages.jsonl` |
//! | segment | `pages.jsonl` | `entries.jsonl`, `segment_stats.json`, `entry_classifier.json` |
//! | crossref | `entries.jsonl` | `crossrefs.jsonl` |
//! | classify-locations | `entries.jsonl`, `crossrefs.jsonl`, labels | `classified.jsonl`, `location_model.json` |
//! | match | `classified.jsonl` | `matches.jsonl`, `added.jsonl`, `baseline_matches.jsonl`, `baseline_added.jsonl` |
//! | link | `classified.jsonl`, API fixtures | `links.jsonl` |
//! | stats | `classified.jsonl`, `links.jsonl` | `map.geojson`, `continent_shares.csv`, `country_deltas.csv`, `geo_summary.json` |

mod config;
mod eval;

pub use config::{
    Config, CorpusSection, CrossrefSection, IndexKind, LinkSection, LocationSection, MatchSection,
    SegmentSection, StatsSection,
};
pub use eval::{EvalRow, EvalSummary};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{CorpusError, EditionId, NormalizationTable, Page, PageStore};
use crate::crossref::{link_crossrefs, CrossReference};
use crate::embedder::{EmbedError, Embedder};
use crate::geostats::{self, BoundarySet, GeoError, MapPoint};
use crate::http::{write_atomic, ApiClient, ClientConfig, HttpError};
use crate::location::{
    classify_entries, load_labels, train_location_model, LocationConfig, LocationError,
};
use crate::matcher::{
    baseline_headword_match, embed_entries, match_editions, AddedRecord, MatchConfig, MatchError,
    VectorIndex,
};
use crate::segmenter::{
    segment, train_entry_classifier, training_set_by_volume, Entry, EntryClassifierConfig,
    SegmentConfig, SegmentError,
};
use crate::wikilinker::{link_entries, KgClient, LinkConfig, LinkedLocation, WikiError};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("stage {stage} needs {artifact}; run the upstream stage first")]
    MissingUpstream { stage: Stage, artifact: String },
    #[error("config: {0}")]
    ConfigError(String),
    #[error("{path}: {message}")]
    SchemaMismatch { path: PathBuf, message: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Location(#[from] LocationError),
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Wiki(#[from] WikiError),
    #[error(transparent)]
    Http(#[from] HttpError),
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

type Result<T, E = PipelineError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Ingest,
    Segment,
    Crossref,
    ClassifyLocations,
    Match,
    Link,
    Stats,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Ingest,
        Stage::Segment,
        Stage::Crossref,
        Stage::ClassifyLocations,
        Stage::Match,
        Stage::Link,
        Stage::Stats,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Segment => "segment",
            Stage::Crossref => "crossref",
            Stage::ClassifyLocations => "classify-locations",
            Stage::Match => "match",
            Stage::Link => "link",
            Stage::Stats => "stats",
        }
    }

    /// Work-directory artifacts this stage reads.
    pub fn inputs(self) -> &'static [&'static str] {
        match self {
            Stage::Ingest => &[],
            Stage::Segment => &["pages.jsonl"],
            Stage::Crossref => &["entries.jsonl"],
            Stage::ClassifyLocations => &["entries.jsonl", "crossrefs.jsonl"],
            Stage::Match | Stage::Link => &["classified.jsonl"],
            Stage::Stats => &["classified.jsonl", "links.jsonl"],
        }
    }

    pub fn outputs(self) -> &'static [&'static str] {
        match self {
            Stage::Ingest => &["pages.jsonl"],
            Stage::Segment => &[
                "entries.jsonl",
                "segment_stats.json",
                "entry_classifier.json",
            ],
            Stage::Crossref => &["crossrefs.jsonl"],
            Stage::ClassifyLocations => &["classified.jsonl", "location_model.json"],
            Stage::Match => &[
                "matches.jsonl",
                "added.jsonl",
                "baseline_matches.jsonl",
                "baseline_added.jsonl",
            ],
            Stage::Link => &["links.jsonl"],
            Stage::Stats => &[
                "map.geojson",
                "continent_shares.csv",
                "country_deltas.csv",
                "geo_summary.json",
            ],
        }
    }

    /// The artifact that stands for the stage in determinism checks.
    pub fn primary_output(self) -> &'static str {
        self.outputs()[0]
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| PipelineError::ConfigError(format!("unknown stage {s:?}")))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: Option<Config>,
    pub seed: u64,
    pub provider_tags: BTreeMap<String, String>,
    pub boundaries_version: Option<String>,
    pub stages: BTreeMap<Stage, StageRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            serde_json::from_str(l).map_err(|e| PipelineError::SchemaMismatch {
                path: path.to_path_buf(),
                message: format!("line {}: {e}", n + 1),
            })
        })
        .collect()
}

pub fn to_jsonl<T: Serialize>(items: &[T]) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item).expect("record serializes"));
        out.push('\n');
    }
    out
}

fn to_json_pretty<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

pub struct Pipeline {
    config: Config,
    workdir: PathBuf,
}

/// Outputs of one stage run, name → bytes, committed together.
type Outputs = Vec<(&'static str, String)>;

impl Pipeline {
    pub fn new(config: Config, workdir: impl Into<PathBuf>) -> Result<Self> {
        config.validate()?;
        let workdir = workdir.into();
        std::fs::create_dir_all(&workdir).map_err(io_err(&workdir))?;
        Ok(Self { config, workdir })
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn workdir(&self) -> &Path {
        &self.workdir
    }

    pub fn artifact(&self, name: &str) -> PathBuf {
        self.workdir.join(name)
    }

    pub fn manifest(&self) -> Result<RunManifest> {
        let path = self.artifact(MANIFEST);
        match std::fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text).map_err(|e| PipelineError::SchemaMismatch {
                path,
                message: e.to_string(),
            }),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(RunManifest::default()),
            Err(e) => Err(io_err(&path)(e)),
        }
    }

    /// Path of a declared input, which must exist.
    fn input(&self, stage: Stage, name: &str) -> Result<PathBuf> {
        assert!(
            stage.inputs().contains(&name),
            "stage {stage} reads undeclared artifact {name}"
        );
        let path = self.artifact(name);
        if !path.is_file() {
            return Err(PipelineError::MissingUpstream {
                stage,
                artifact: name.to_string(),
            });
        }
        Ok(path)
    }

    fn read_input<T: DeserializeOwned>(&self, stage: Stage, name: &str) -> Result<Vec<T>> {
        read_jsonl(&self.input(stage, name)?)
    }

    fn embedder(&self) -> Result<Box<dyn Embedder>> {
        Ok(self.config.embedder_spec().build()?)
    }

    pub fn run_all(&self) -> Result<Vec<(Stage, StageRecord)>> {
        Stage::ALL
            .into_iter()
            .map(|s| self.run_stage(s).map(|r| (s, r)))
            .collect()
    }

    pub fn run_stage(&self, stage: Stage) -> Result<StageRecord> {
        for name in stage.inputs() {
            self.input(stage, name)?;
        }
        let started = now_ms();
        let mut inputs = BTreeMap::new();
        for name in stage.inputs() {
            let path = self.artifact(name);
            let bytes = std::fs::read(&path).map_err(io_err(&path))?;
            inputs.insert(name.to_string(), sha256_hex(&bytes));
        }
        let mut tags = BTreeMap::new();
        let outputs = match stage {
            Stage::Ingest => self.ingest()?,
            Stage::Segment => self.segment()?,
            Stage::Crossref => self.crossref()?,
            Stage::ClassifyLocations => self.classify_locations(&mut tags)?,
            Stage::Match => self.match_stage(&mut tags)?,
            Stage::Link => self.link(&mut tags)?,
            Stage::Stats => self.stats()?,
        };
        debug_assert_eq!(
            outputs.iter().map(|o| o.0).collect::<Vec<_>>(),
            stage.outputs(),
        );
        let mut record = StageRecord {
            inputs,
            started_unix_ms: started,
            ..Default::default()
        };
        for (name, body) in &outputs {
            let path = self.artifact(name);
            write_atomic(&path, body.as_bytes()).map_err(io_err(&path))?;
            record
                .outputs
                .insert(name.to_string(), sha256_hex(body.as_bytes()));
        }
        record.finished_unix_ms = now_ms();

        let mut manifest = self.manifest()?;
        manifest.config = Some(self.config.clone());
        manifest.seed = self.config.seed;
        manifest.provider_tags.extend(tags);
        if stage == Stage::Stats {
            manifest.boundaries_version = Some(BoundarySet::bundled().version.clone());
        }
        manifest.stages.insert(stage, record.clone());
        let path = self.artifact(MANIFEST);
        write_atomic(&path, to_json_pretty(&manifest).as_bytes()).map_err(io_err(&path))?;
        log::info!("{stage}: wrote {}", stage.outputs().join(", "));
        Ok(record)
    }

    fn ingest(&self) -> Result<Outputs> {
        let store = PageStore::open(self.config.resolve(&self.config.corpus.pages))?;
        let pages = match &self.config.corpus.normalization {
            Some(p) => store.load_all(&NormalizationTable::load(&self.config.resolve(p))?)?,
            None => store.load_all(NormalizationTable::builtin())?,
        };
        Ok(vec![("pages.jsonl", to_jsonl(&pages))])
    }

    fn segment(&self) -> Result<Outputs> {
        let pages: Vec<Page> = self.read_input(Stage::Segment, "pages.jsonl")?;
        let seg = &self.config.segment;
        let classifier = if seg.classifier {
            let training = training_set_by_volume(&pages, &self.config.volume_letter_overrides());
            let config = EntryClassifierConfig {
                threshold: seg.classifier_threshold,
                truncation: seg.truncation,
                ..Default::default()
            };
            match train_entry_classifier(&training, &config) {
                Ok(c) => Some(c),
                Err(SegmentError::SingleClassTraining {
                    positives,
                    negatives,
                }) => {
                    log::warn!(
                        "entry classifier disabled: {positives} positive and {negatives} negative paragraphs"
                    );
                    None
                }
                Err(e) => return Err(e.into()),
            }
        } else {
            None
        };
        let config = SegmentConfig {
            index_threshold: seg.index_threshold,
            truncation: seg.truncation,
        };
        let mut entries = Vec::new();
        let mut stats = Vec::new();
        for edition in EditionId::ALL {
            let ed_pages: Vec<Page> = pages
                .iter()
                .filter(|p| p.edition == edition)
                .cloned()
                .collect();
            if ed_pages.is_empty() {
                continue;
            }
            let (e, s) = segment(&ed_pages, classifier.as_ref(), &config)?;
            entries.extend(e);
            stats.push(s);
        }
        let model = classifier
            .as_ref()
            .map_or_else(|| "null".to_string(), |c| c.to_json());
        Ok(vec![
            ("entries.jsonl", to_jsonl(&entries)),
            ("segment_stats.json", to_json_pretty(&stats)),
            ("entry_classifier.json", model),
        ])
    }

    fn crossref(&self) -> Result<Outputs> {
        let entries: Vec<Entry> = self.read_input(Stage::Crossref, "entries.jsonl")?;
        let mut refs = Vec::new();
        for edition in EditionId::ALL {
            let mut ed: Vec<Entry> = entries
                .iter()
                .filter(|e| e.edition == edition)
                .cloned()
                .collect();
            refs.extend(link_crossrefs(&mut ed, self.config.crossref.max_len));
        }
        Ok(vec![("crossrefs.jsonl", to_jsonl(&refs))])
    }

    fn classify_locations(&self, tags: &mut BTreeMap<String, String>) -> Result<Outputs> {
        let stage = Stage::ClassifyLocations;
        let mut entries: Vec<Entry> = self.read_input(stage, "entries.jsonl")?;
        let refs: Vec<CrossReference> = self.read_input(stage, "crossrefs.jsonl")?;
        let targets: HashMap<&str, &str> = refs
            .iter()
            .map(|r| (r.source_id.as_str(), r.target_word.as_str()))
            .collect();
        for e in &mut entries {
            let target = targets.get(e.id.as_str());
            e.flags.is_crossref = target.is_some();
            e.flags.crossref_target = target.map(|t| t.to_string());
        }
        let labels = load_labels(&self.config.resolve(&self.config.location.labels))?;
        let embedder = self.embedder()?;
        tags.insert("embedder".into(), embedder.provider_tag());
        let config = LocationConfig {
            threshold: self.config.location.threshold,
            truncation: self.config.segment.truncation,
            ..Default::default()
        };
        let (model, report) = train_location_model(&labels, embedder.as_ref(), &config)?;
        log::info!(
            "location head: {} epochs, loss {:.6}, converged {}",
            report.epochs,
            report.final_loss,
            report.converged
        );
        let n = classify_entries(&model, &mut entries, embedder.as_ref())?;
        log::info!("{n} of {} entries classified as locations", entries.len());
        Ok(vec![
            ("classified.jsonl", to_jsonl(&entries)),
            ("location_model.json", to_json_pretty(&model)),
        ])
    }

    fn match_stage(&self, tags: &mut BTreeMap<String, String>) -> Result<Outputs> {
        let entries: Vec<Entry> = self.read_input(Stage::Match, "classified.jsonl")?;
        let side = |ed| -> Vec<&Entry> {
            entries
                .iter()
                .filter(|e| e.edition == ed && !e.flags.is_crossref)
                .collect()
        };
        let (e1, e2) = (side(EditionId::First), side(EditionId::Second));
        let embedder = self.embedder()?;
        tags.insert("embedder".into(), embedder.provider_tag());
        let v1 = if e1.is_empty() {
            Vec::new()
        } else {
            embed_entries(&e1, embedder.as_ref())?
        };
        let index = if e2.is_empty() {
            VectorIndex::new(embedder.dim(), self.config.index_mode())
        } else {
            VectorIndex::from_entries(&e2, embedder.as_ref(), self.config.index_mode())?
        };
        let queries: Vec<(String, Vec<f32>)> = e1.iter().map(|e| e.id.clone()).zip(v1).collect();
        let config = MatchConfig {
            threshold: self.config.matching.threshold,
            k: self.config.matching.k,
        };
        let result = match_editions(&queries, &index, &config)?;
        let order: Vec<String> = e1.iter().map(|e| e.id.clone()).collect();
        let added: Vec<AddedRecord> = result
            .added
            .iter()
            .map(|id| AddedRecord { e2_id: id.clone() })
            .collect();

        let hw = |v: &[&Entry]| -> Vec<(String, String)> {
            v.iter()
                .map(|e| (e.id.clone(), e.headword.clone()))
                .collect()
        };
        let base = baseline_headword_match(&hw(&e1), &hw(&e2));
        let base_added: Vec<AddedRecord> = base
            .added
            .iter()
            .map(|id| AddedRecord { e2_id: id.clone() })
            .collect();
        Ok(vec![
            ("matches.jsonl", to_jsonl(&result.records(&order))),
            ("added.jsonl", to_jsonl(&added)),
            ("baseline_matches.jsonl", to_jsonl(&base.records(&order))),
            ("baseline_added.jsonl", to_jsonl(&base_added)),
        ])
    }

    fn link(&self, tags: &mut BTreeMap<String, String>) -> Result<Outputs> {
        let entries: Vec<Entry> = self.read_input(Stage::Link, "classified.jsonl")?;
        let targets: Vec<&Entry> = entries
            .iter()
            .filter(|e| e.flags.is_location && !e.flags.is_crossref)
            .collect();
        let link = &self.config.link;
        let client = ApiClient::new(&ClientConfig {
            mode: link.api_mode,
            requests_per_second: link.rate_limit,
            fixture_dir: link.fixtures.as_ref().map(|p| self.config.resolve(p)),
            ..Default::default()
        })?;
        let kg = KgClient::new(&client, self.config.endpoints());
        let embedder = self.embedder()?;
        tags.insert("embedder".into(), embedder.provider_tag());
        let config = LinkConfig {
            threshold: link.threshold,
            k: link.k,
            query_expansion: link.query_expansion,
        };
        let links = link_entries(&targets, &kg, embedder.as_ref(), &config)?;
        log::info!(
            "linked {} of {} location entries",
            links.len(),
            targets.len()
        );
        Ok(vec![("links.jsonl", to_jsonl(&links))])
    }

    fn stats(&self) -> Result<Outputs> {
        let entries: Vec<Entry> = self.read_input(Stage::Stats, "classified.jsonl")?;
        let links: Vec<LinkedLocation> = self.read_input(Stage::Stats, "links.jsonl")?;
        let by_id: HashMap<&str, &Entry> = entries.iter().map(|e| (e.id.as_str(), e)).collect();
        let path = self.artifact("links.jsonl");
        let mut per_edition: BTreeMap<EditionId, Vec<LinkedLocation>> = BTreeMap::new();
        let mut points = Vec::with_capacity(links.len());
        for l in &links {
            let e =
                by_id
                    .get(l.entry_id.as_str())
                    .ok_or_else(|| PipelineError::SchemaMismatch {
                        path: path.clone(),
                        message: format!("link for unknown entry {}", l.entry_id),
                    })?;
            per_edition.entry(e.edition).or_default().push(l.clone());
            points.push(MapPoint {
                edition: e.edition.as_str().to_string(),
                entry_id: e.id.clone(),
                headword: e.headword.clone(),
                qid: l.qid.clone(),
                lat: l.lat,
                lon: l.lon,
            });
        }
        let boundaries = BoundarySet::bundled();
        let summary = |ed: EditionId| {
            geostats::summarize(
                ed.as_str(),
                per_edition.get(&ed).map(Vec::as_slice).unwrap_or(&[]),
                boundaries,
            )
        };
        let (s1, s2) = (summary(EditionId::First), summary(EditionId::Second));
        let (up, down) = geostats::country_deltas(&s1, &s2, self.config.stats.top_n);
        let summary_json = serde_json::json!({
            "boundaries_version": boundaries.version,
            "summaries": [s1, s2],
            "top_increases": up,
            "top_decreases": down,
        });
        Ok(vec![
            ("map.geojson", geostats::map_geojson(&points)),
            ("continent_shares.csv", geostats::continent_csv(&[&s1, &s2])),
            (
                "country_deltas.csv",
                geostats::deltas_csv(&geostats::all_deltas(&s1, &s2)),
            ),
            ("geo_summary.json", to_json_pretty(&summary_json)),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_dag_is_ordered() {
        // Every declared input is produced by a strictly earlier stage.
        for (i, stage) in Stage::ALL.iter().enumerate() {
            for input in stage.inputs() {
                let producer = Stage::ALL.iter().position(|s| s.outputs().contains(input));
                assert!(
                    matches!(producer, Some(p) if p < i),
                    "{stage} reads {input}"
                );
            }
        }
    }

    #[test]
    fn outputs_are_unique() {
        let mut all: Vec<&str> = Stage::ALL
            .iter()
            .flat_map(|s| s.outputs().iter().copied())
            .collect();
        let n = all.len();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), n);
    }

    #[test]
    fn stage_names_parse() {
        for s in Stage::ALL {
            assert_eq!(s.name().parse::<Stage>().unwrap(), s);
        }
        assert!("scrape".parse::<Stage>().is_err());
    }

    #[test]
    fn segment_before_ingest() {
        let dir = tempfile::tempdir().unwrap();
        let p = Pipeline::new(Config::default(), dir.path()).unwrap();
        assert!(matches!(
            p.run_stage(Stage::Segment),
            Err(PipelineError::MissingUpstream {
                stage: Stage::Segment,
                ..
            })
        ));
        assert!(matches!(
            p.run_stage(Stage::Stats),
            Err(PipelineError::MissingUpstream {
                stage: Stage::Stats,
                ..
            })
        ));
    }
}
