//! Linking location entries to Wikidata items with coordinates.
//!
//! For an entry headword, the Wikidata search API gives up to five candidate
//! items. Each candidate gets a short description: the opening of its Swedish
//! Wikipedia article when there is one, its Wikidata description otherwise.
//! The entry text and the descriptions are embedded and the most similar
//! candidate wins if it clears the threshold and has a P625 coordinate.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::embedder::{cosine_similarity, EmbedError, Embedder};
use crate::http::{ApiClient, HttpError};
use crate::metrics::Prf;
use crate::segmenter::{truncate_chars, Entry};

pub const EARTH_RADIUS_KM: f64 = 6371.0;
pub const LINK_THRESHOLD: f64 = 0.6;
pub const SEARCH_K: usize = 5;
pub const DESCRIPTION_LEN: usize = 200;
pub const RADIUS_KM: f64 = 25.0;
const EARTH: &str = "http://www.wikidata.org/entity/Q2";

#[derive(Debug, thiserror::Error)]
pub enum WikiError {
    #[error("knowledge-graph API unavailable: {0}")]
    ApiUnavailable(String),
    #[error("no recorded fixture for {0}")]
    FixtureMiss(String),
    #[error("malformed coordinate claim: {0}")]
    MalformedClaim(String),
    #[error("malformed API response for {request}: {message}")]
    MalformedResponse { request: String, message: String },
    #[error("not a QID: {0:?}")]
    InvalidQid(String),
    #[error("coordinate out of range: ({lat}, {lon})")]
    RangeError { lat: f64, lon: f64 },
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("gold entry {0} was not part of the linking run")]
    GoldIdUnknown(String),
}

impl From<HttpError> for WikiError {
    fn from(e: HttpError) -> Self {
        match e {
            HttpError::FixtureMiss { request } => WikiError::FixtureMiss(request),
            other => WikiError::ApiUnavailable(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatLon {
    pub lat: f64,
    pub lon: f64,
}

impl LatLon {
    pub fn new(lat: f64, lon: f64) -> Result<Self, WikiError> {
        if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
            return Err(WikiError::RangeError { lat, lon });
        }
        Ok(Self { lat, lon })
    }
}

/// Great-circle distance on a sphere of radius 6371 km.
pub fn haversine_km(a: (f64, f64), b: (f64, f64)) -> Result<f64, WikiError> {
    let a = LatLon::new(a.0, a.1)?;
    let b = LatLon::new(b.0, b.1)?;
    let (p1, p2) = (a.lat.to_radians(), b.lat.to_radians());
    let dp = p2 - p1;
    let dl = (b.lon - a.lon).to_radians();
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    Ok(2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin())
}

pub fn is_qid(s: &str) -> bool {
    s.len() > 1 && s.starts_with('Q') && s[1..].bytes().all(|b| b.is_ascii_digit())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DescriptionSource {
    Wikipedia,
    WikidataDescription,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KgCandidate {
    pub qid: String,
    pub label: String,
    pub description_text: String,
    pub description_source: DescriptionSource,
    pub coordinates: Option<LatLon>,
}

/// One line of `links.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkedLocation {
    pub entry_id: String,
    pub qid: String,
    pub lat: f64,
    pub lon: f64,
    pub similarity: f64,
    pub source: DescriptionSource,
}

/// Coordinates from an item's `claims` object. Only Earth coordinates count;
/// preferred-rank statements win over normal ones and deprecated ones are
/// ignored.
pub fn parse_p625(claims: &Value) -> Result<Option<LatLon>, WikiError> {
    let Some(statements) = claims.get("P625") else {
        return Ok(None);
    };
    let statements = statements
        .as_array()
        .ok_or_else(|| WikiError::MalformedClaim("P625 is not a list".into()))?;
    let rank = |s: &Value| {
        s.get("rank")
            .and_then(Value::as_str)
            .unwrap_or("normal")
            .to_string()
    };
    let ordered = statements
        .iter()
        .filter(|s| rank(s) == "preferred")
        .chain(statements.iter().filter(|s| rank(s) == "normal"));
    for st in ordered {
        let snak = st
            .get("mainsnak")
            .ok_or_else(|| WikiError::MalformedClaim("statement without mainsnak".into()))?;
        if snak
            .get("snaktype")
            .and_then(Value::as_str)
            .unwrap_or("value")
            != "value"
        {
            continue;
        }
        let value = snak
            .pointer("/datavalue/value")
            .ok_or_else(|| WikiError::MalformedClaim("missing datavalue".into()))?;
        let num = |k: &str| {
            value
                .get(k)
                .and_then(Value::as_f64)
                .ok_or_else(|| WikiError::MalformedClaim(format!("missing {k}")))
        };
        let (lat, lon) = (num("latitude")?, num("longitude")?);
        match value.get("globe").and_then(Value::as_str) {
            Some(EARTH) | None => {}
            Some(other) => {
                log::debug!("ignoring coordinate on globe {other}");
                return Ok(None);
            }
        }
        return LatLon::new(lat, lon)
            .map(Some)
            .map_err(|_| WikiError::MalformedClaim(format!("({lat}, {lon}) out of range")));
    }
    Ok(None)
}

/// Percent-encodes everything except ASCII alphanumerics and `-_.~`.
pub fn encode_component(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for b in s.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'_' | b'.' | b'~') {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endpoints {
    pub wikidata: String,
    pub wikipedia: String,
}

impl Default for Endpoints {
    fn default() -> Self {
        Self {
            wikidata: "https://www.wikidata.org/w/api.php".into(),
            wikipedia: "https://sv.wikipedia.org/w/api.php".into(),
        }
    }
}

impl Endpoints {
    pub fn search_url(&self, query: &str, k: usize) -> String {
        format!(
            "{}?action=wbsearchentities&format=json&language=sv&uselang=sv&type=item&limit={k}&search={}",
            self.wikidata,
            encode_component(query)
        )
    }

    pub fn entity_url(&self, qid: &str) -> String {
        format!(
            "{}?action=wbgetentities&format=json&ids={qid}&props=labels%7Csitelinks%7Cdescriptions%7Cclaims&sitefilter=svwiki&languages=sv",
            self.wikidata
        )
    }

    pub fn extract_url(&self, title: &str) -> String {
        format!(
            "{}?action=query&format=json&prop=extracts&exintro=1&explaintext=1&redirects=1&titles={}",
            self.wikipedia,
            encode_component(title)
        )
    }
}

/// What the linker needs to know about one item.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemInfo {
    pub label: Option<String>,
    pub svwiki_title: Option<String>,
    pub description: Option<String>,
    pub coordinates: Option<LatLon>,
}

pub struct KgClient<'a> {
    client: &'a ApiClient,
    endpoints: Endpoints,
}

fn parse_json(request: &str, body: &str) -> Result<Value, WikiError> {
    serde_json::from_str(body).map_err(|e| WikiError::MalformedResponse {
        request: request.to_string(),
        message: e.to_string(),
    })
}

impl<'a> KgClient<'a> {
    pub fn new(client: &'a ApiClient, endpoints: Endpoints) -> Self {
        Self { client, endpoints }
    }

    pub fn endpoints(&self) -> &Endpoints {
        &self.endpoints
    }

    /// Search hits as (qid, label), in API order.
    pub fn search(&self, query: &str, k: usize) -> Result<Vec<(String, String)>, WikiError> {
        if k == 0 || query.trim().is_empty() {
            return Ok(Vec::new());
        }
        let url = self.endpoints.search_url(query, k);
        let json = parse_json(&url, &self.client.get(&url)?)?;
        let hits = match json.get("search") {
            Some(Value::Array(a)) => a,
            _ => {
                return Err(WikiError::MalformedResponse {
                    request: url,
                    message: "no search list".into(),
                })
            }
        };
        let mut out = Vec::new();
        for hit in hits.iter().take(k) {
            let qid = hit.get("id").and_then(Value::as_str).unwrap_or_default();
            if !is_qid(qid) {
                return Err(WikiError::InvalidQid(qid.to_string()));
            }
            let label = hit.get("label").and_then(Value::as_str).unwrap_or_default();
            out.push((qid.to_string(), label.to_string()));
        }
        Ok(out)
    }

    pub fn item(&self, qid: &str) -> Result<ItemInfo, WikiError> {
        if !is_qid(qid) {
            return Err(WikiError::InvalidQid(qid.to_string()));
        }
        let url = self.endpoints.entity_url(qid);
        let json = parse_json(&url, &self.client.get(&url)?)?;
        let entity = json.pointer(&format!("/entities/{qid}")).ok_or_else(|| {
            WikiError::MalformedResponse {
                request: url.clone(),
                message: format!("no entity {qid}"),
            }
        })?;
        let text = |p: &str| {
            entity
                .pointer(p)
                .and_then(Value::as_str)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
        };
        Ok(ItemInfo {
            label: text("/labels/sv/value"),
            svwiki_title: text("/sitelinks/svwiki/title"),
            description: text("/descriptions/sv/value"),
            coordinates: match entity.get("claims") {
                Some(claims) => parse_p625(claims)?,
                None => None,
            },
        })
    }

    /// Plain-text introduction of a Swedish Wikipedia article.
    pub fn extract(&self, title: &str) -> Result<Option<String>, WikiError> {
        let url = self.endpoints.extract_url(title);
        let json = parse_json(&url, &self.client.get(&url)?)?;
        let pages = json.pointer("/query/pages").and_then(Value::as_object);
        Ok(pages
            .into_iter()
            .flat_map(|p| p.values())
            .filter(|p| p.get("missing").is_none())
            .find_map(|p| p.get("extract").and_then(Value::as_str))
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string))
    }

    fn describe(&self, info: &ItemInfo) -> Result<(String, DescriptionSource), WikiError> {
        if let Some(title) = &info.svwiki_title {
            if let Some(text) = self.extract(title)? {
                return Ok((
                    truncate_chars(&text, DESCRIPTION_LEN),
                    DescriptionSource::Wikipedia,
                ));
            }
        }
        let text = info.description.as_deref().unwrap_or("");
        Ok((
            truncate_chars(text, DESCRIPTION_LEN),
            DescriptionSource::WikidataDescription,
        ))
    }

    /// Article opening if there is an article, item description otherwise.
    pub fn fetch_description(&self, qid: &str) -> Result<(String, DescriptionSource), WikiError> {
        let info = self.item(qid)?;
        self.describe(&info)
    }

    /// Up to `k` candidates in API order, each with description and
    /// coordinates.
    pub fn search_candidates(
        &self,
        headword: &str,
        k: usize,
    ) -> Result<Vec<KgCandidate>, WikiError> {
        self.search(headword, k)?
            .into_iter()
            .map(|(qid, label)| {
                let info = self.item(&qid)?;
                let (description_text, description_source) = self.describe(&info)?;
                Ok(KgCandidate {
                    label: if label.is_empty() {
                        info.label.clone().unwrap_or_default()
                    } else {
                        label
                    },
                    qid,
                    description_text,
                    description_source,
                    coordinates: info.coordinates,
                })
            })
            .collect()
    }
}

/// Old spelling to modern: `q` became `k`.
pub fn modernize_spelling(headword: &str) -> String {
    headword.replace('Q', "K").replace('q', "k")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    pub threshold: f64,
    pub k: usize,
    /// Retry an empty search with modern spelling. Off by default.
    pub query_expansion: bool,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            threshold: LINK_THRESHOLD,
            k: SEARCH_K,
            query_expansion: false,
        }
    }
}

/// Picks the candidate whose description is most similar to the entry text.
/// Returns `None` if the best candidate is below `threshold` or has no
/// coordinates. Ties go to the earlier candidate.
pub fn link_entry(
    entry: &Entry,
    candidates: &[KgCandidate],
    embedder: &dyn Embedder,
    threshold: f64,
) -> Result<Option<LinkedLocation>, WikiError> {
    let scored: Vec<&KgCandidate> = candidates
        .iter()
        .filter(|c| !c.description_text.trim().is_empty())
        .collect();
    if scored.is_empty() {
        return Ok(None);
    }
    let mut texts: Vec<&str> = vec![entry.truncated_text.as_str()];
    texts.extend(scored.iter().map(|c| c.description_text.as_str()));
    let vectors = embedder.embed(&texts)?;
    let (query, descs) = vectors.split_first().expect("entry vector");

    let mut best: Option<(usize, f64)> = None;
    for (i, v) in descs.iter().enumerate() {
        let sim = cosine_similarity(query, v)?;
        if best.is_none_or(|(_, b)| sim > b) {
            best = Some((i, sim));
        }
    }
    let (i, similarity) = best.expect("at least one candidate");
    let cand = scored[i];
    match cand.coordinates {
        Some(c) if similarity >= threshold => Ok(Some(LinkedLocation {
            entry_id: entry.id.clone(),
            qid: cand.qid.clone(),
            lat: c.lat,
            lon: c.lon,
            similarity,
            source: cand.description_source,
        })),
        _ => Ok(None),
    }
}

/// Links every entry (callers pass location entries that are not
/// cross-references). Output keeps input order.
pub fn link_entries(
    entries: &[&Entry],
    kg: &KgClient<'_>,
    embedder: &dyn Embedder,
    config: &LinkConfig,
) -> Result<Vec<LinkedLocation>, WikiError> {
    let results: Vec<Option<LinkedLocation>> = entries
        .par_iter()
        .map(|e| {
            let mut cands = kg.search_candidates(&e.headword, config.k)?;
            if cands.is_empty() && config.query_expansion {
                let modern = modernize_spelling(&e.headword);
                if modern != e.headword {
                    cands = kg.search_candidates(&modern, config.k)?;
                }
            }
            link_entry(e, &cands, embedder, config.threshold)
        })
        .collect::<Result<_, _>>()?;
    Ok(results.into_iter().flatten().collect())
}

/// One line of a linking gold file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkGold {
    pub entry_id: String,
    pub qid: String,
    pub lat: f64,
    pub lon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkEvaluation {
    pub qid_match: Prf,
    pub within_radius: Prf,
    pub radius_km: f64,
}

/// `attempted` lists every entry the linker was run on; gold entries outside
/// it are an error.
pub fn evaluate_linking(
    predicted: &[LinkedLocation],
    gold: &[LinkGold],
    attempted: &HashSet<&str>,
    radius_km: f64,
) -> Result<LinkEvaluation, WikiError> {
    let mut by_id: HashMap<&str, &LinkGold> = HashMap::new();
    for g in gold {
        if !attempted.contains(g.entry_id.as_str()) {
            return Err(WikiError::GoldIdUnknown(g.entry_id.clone()));
        }
        by_id.insert(g.entry_id.as_str(), g);
    }
    let (mut n, mut qid_ok, mut near_ok) = (0, 0, 0);
    for p in predicted {
        let Some(g) = by_id.get(p.entry_id.as_str()) else {
            continue;
        };
        n += 1;
        qid_ok += usize::from(p.qid == g.qid);
        near_ok += usize::from(haversine_km((p.lat, p.lon), (g.lat, g.lon))? <= radius_km);
    }
    Ok(LinkEvaluation {
        qid_match: Prf::from_counts(qid_ok, n, by_id.len()),
        within_radius: Prf::from_counts(near_ok, n, by_id.len()),
        radius_km,
    })
}
