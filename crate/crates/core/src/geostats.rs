//! Country and continent tallies of linked locations.
//!
//! Points are assigned to countries with the bundled 1:110m Natural Earth
//! boundaries (public domain, modern borders). Points that fall in no polygon
//! go to the nearest country centroid if it is within 100 km.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use geo::{BoundingRect, Centroid, Contains, MultiPolygon, Point, Polygon, Rect};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::wikilinker::{haversine_km, LinkedLocation};

pub const CENTROID_FALLBACK_KM: f64 = 100.0;
pub const TOP_N: usize = 5;

const BUNDLED: &str = include_str!("../data/countries_110m.geojson");

#[derive(Debug, thiserror::Error)]
pub enum GeoError {
    #[error("boundary data: {0}")]
    Boundaries(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone)]
pub struct Country {
    pub code: String,
    pub name: String,
    pub continent: String,
    pub shape: MultiPolygon<f64>,
    bbox: Rect<f64>,
    /// (lat, lon)
    pub centroid: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct BoundarySet {
    countries: Vec<Country>,
    pub version: String,
}

impl BoundarySet {
    pub fn bundled() -> &'static BoundarySet {
        static SET: std::sync::OnceLock<BoundarySet> = std::sync::OnceLock::new();
        SET.get_or_init(|| BoundarySet::from_geojson(BUNDLED).expect("bundled boundaries parse"))
    }

    /// Features need `iso_a2`, `name` and `continent` properties. Features
    /// sharing a code are merged.
    pub fn from_geojson(text: &str) -> Result<Self, GeoError> {
        let gj: geojson::GeoJson = text
            .parse()
            .map_err(|e| GeoError::Boundaries(format!("{e}")))?;
        let geojson::GeoJson::FeatureCollection(fc) = gj else {
            return Err(GeoError::Boundaries("not a feature collection".into()));
        };
        let version = fc
            .foreign_members
            .as_ref()
            .and_then(|m| m.get("version"))
            .and_then(|v| v.as_str())
            .unwrap_or("unversioned")
            .to_string();
        let mut merged: BTreeMap<String, (String, String, Vec<Polygon<f64>>)> = BTreeMap::new();
        for f in fc.features {
            let prop = |k: &str| {
                f.property(k)
                    .and_then(|v| v.as_str())
                    .map(str::to_string)
                    .ok_or_else(|| GeoError::Boundaries(format!("feature without {k}")))
            };
            let (code, name, continent) = (prop("iso_a2")?, prop("name")?, prop("continent")?);
            let geom = f
                .geometry
                .ok_or_else(|| GeoError::Boundaries(format!("{code} has no geometry")))?;
            let shape: geo::Geometry<f64> = geom
                .try_into()
                .map_err(|e: geojson::Error| GeoError::Boundaries(format!("{code}: {e}")))?;
            let polys = match shape {
                geo::Geometry::Polygon(p) => vec![p],
                geo::Geometry::MultiPolygon(mp) => mp.0,
                _ => return Err(GeoError::Boundaries(format!("{code}: not a polygon"))),
            };
            merged
                .entry(code)
                .or_insert_with(|| (name, continent, Vec::new()))
                .2
                .extend(polys);
        }
        let countries = merged
            .into_iter()
            .map(|(code, (name, continent, polys))| {
                let shape = MultiPolygon(polys);
                let c = shape
                    .centroid()
                    .ok_or_else(|| GeoError::Boundaries(format!("{code}: empty shape")))?;
                let bbox = shape.bounding_rect().expect("non-empty shape");
                Ok(Country {
                    code,
                    name,
                    continent,
                    shape,
                    bbox,
                    centroid: (c.y(), c.x()),
                })
            })
            .collect::<Result<Vec<_>, GeoError>>()?;
        Ok(Self { countries, version })
    }

    /// Sorted by code.
    pub fn countries(&self) -> &[Country] {
        &self.countries
    }

    pub fn get(&self, code: &str) -> Option<&Country> {
        self.countries
            .binary_search_by(|c| c.code.as_str().cmp(code))
            .ok()
            .map(|i| &self.countries[i])
    }

    pub fn continent_of(&self, code: &str) -> Option<&str> {
        self.get(code).map(|c| c.continent.as_str())
    }

    /// Country whose polygon contains the point, lowest code first.
    pub fn containing(&self, lat: f64, lon: f64) -> Option<&Country> {
        let p = Point::new(lon, lat);
        self.countries.iter().find(|c| {
            let (min, max) = (c.bbox.min(), c.bbox.max());
            (min.x..=max.x).contains(&lon) && (min.y..=max.y).contains(&lat) && c.shape.contains(&p)
        })
    }

    /// Nearest centroid and its distance in km. Ties go to the lower code.
    pub fn nearest_centroid(&self, lat: f64, lon: f64) -> Option<(&Country, f64)> {
        let mut best: Option<(&Country, f64)> = None;
        for c in &self.countries {
            let Ok(d) = haversine_km((lat, lon), c.centroid) else {
                continue;
            };
            if best.is_none_or(|(_, b)| d < b) {
                best = Some((c, d));
            }
        }
        best
    }
}

/// Country code for a coordinate, or `None` for open ocean and invalid
/// coordinates.
pub fn assign_country(lat: f64, lon: f64, boundaries: &BoundarySet) -> Option<&str> {
    if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
        return None;
    }
    if let Some(c) = boundaries.containing(lat, lon) {
        return Some(&c.code);
    }
    boundaries
        .nearest_centroid(lat, lon)
        .filter(|&(_, d)| d <= CENTROID_FALLBACK_KM)
        .map(|(c, _)| c.code.as_str())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoSummary {
    pub edition_id: String,
    pub country_counts: BTreeMap<String, usize>,
    pub continent_counts: BTreeMap<String, usize>,
    /// Over assigned links only.
    pub continent_shares: BTreeMap<String, f64>,
    pub total_linked: usize,
    pub unassigned: usize,
}

impl GeoSummary {
    pub fn assigned(&self) -> usize {
        self.total_linked - self.unassigned
    }

    pub fn country_share(&self, code: &str) -> f64 {
        match (self.country_counts.get(code), self.assigned()) {
            (Some(&n), total) if total > 0 => n as f64 / total as f64,
            _ => 0.0,
        }
    }
}

pub fn summarize(
    edition_id: &str,
    links: &[LinkedLocation],
    boundaries: &BoundarySet,
) -> GeoSummary {
    let codes: Vec<Option<&str>> = links
        .par_iter()
        .map(|l| assign_country(l.lat, l.lon, boundaries))
        .collect();
    let mut country_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut continent_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut unassigned = 0;
    for code in codes {
        let Some(code) = code else {
            unassigned += 1;
            continue;
        };
        *country_counts.entry(code.to_string()).or_default() += 1;
        let continent = boundaries.continent_of(code).expect("code from this set");
        *continent_counts.entry(continent.to_string()).or_default() += 1;
    }
    let assigned = links.len() - unassigned;
    let continent_shares = continent_counts
        .iter()
        .map(|(k, &n)| (k.clone(), n as f64 / assigned as f64))
        .collect();
    GeoSummary {
        edition_id: edition_id.to_string(),
        country_counts,
        continent_counts,
        continent_shares,
        total_linked: links.len(),
        unassigned,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountryDelta {
    pub country_code: String,
    pub share_ed1: f64,
    pub share_ed2: f64,
    /// Percentage points.
    pub delta_pp: f64,
}

/// Every country present in either summary, largest increase first, ties by
/// code.
pub fn all_deltas(s1: &GeoSummary, s2: &GeoSummary) -> Vec<CountryDelta> {
    let mut codes: Vec<&String> = s1
        .country_counts
        .keys()
        .chain(s2.country_counts.keys())
        .collect();
    codes.sort();
    codes.dedup();
    let mut out: Vec<CountryDelta> = codes
        .into_iter()
        .map(|code| {
            let (a, b) = (s1.country_share(code), s2.country_share(code));
            CountryDelta {
                country_code: code.clone(),
                share_ed1: a,
                share_ed2: b,
                delta_pp: 100.0 * (b - a),
            }
        })
        .collect();
    out.sort_by(|x, y| {
        y.delta_pp
            .total_cmp(&x.delta_pp)
            .then_with(|| x.country_code.cmp(&y.country_code))
    });
    out
}

/// Top `top_n` increases and top `top_n` decreases, each ranked by magnitude
/// with ties broken by country code.
pub fn country_deltas(
    s1: &GeoSummary,
    s2: &GeoSummary,
    top_n: usize,
) -> (Vec<CountryDelta>, Vec<CountryDelta>) {
    let ranked = all_deltas(s1, s2);
    let increases = ranked.iter().take(top_n).cloned().collect();
    let mut decreases = ranked;
    decreases.sort_by(|x, y| {
        x.delta_pp
            .total_cmp(&y.delta_pp)
            .then_with(|| x.country_code.cmp(&y.country_code))
    });
    decreases.truncate(top_n);
    (increases, decreases)
}

/// One point in the map file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapPoint {
    pub edition: String,
    pub entry_id: String,
    pub headword: String,
    pub qid: String,
    pub lat: f64,
    pub lon: f64,
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), GeoError> {
    crate::http::write_atomic(path, bytes).map_err(|source| GeoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn map_geojson(points: &[MapPoint]) -> String {
    let features: Vec<serde_json::Value> = points
        .iter()
        .map(|p| {
            json!({
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [p.lon, p.lat]},
                "properties": {
                    "edition": p.edition,
                    "entry_id": p.entry_id,
                    "headword": p.headword,
                    "qid": p.qid,
                },
            })
        })
        .collect();
    let fc = json!({"type": "FeatureCollection", "features": features});
    let mut s = serde_json::to_string_pretty(&fc).expect("json");
    s.push('\n');
    s
}

/// Point features, one per link.
pub fn emit_map_data(points: &[MapPoint], path: &Path) -> Result<(), GeoError> {
    write(path, map_geojson(points).as_bytes())
}

/// `edition,continent,count,share`
pub fn continent_csv(summaries: &[&GeoSummary]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["edition", "continent", "count", "share"])
        .expect("in-memory");
    for s in summaries {
        for (continent, share) in &s.continent_shares {
            let n = s.continent_counts[continent].to_string();
            w.write_record([&s.edition_id, continent, &n, &format!("{share:.6}")])
                .expect("in-memory");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory")).expect("utf8")
}

/// `rank,country_code,share_ed1,share_ed2,delta_pp`, largest increase first.
pub fn deltas_csv(deltas: &[CountryDelta]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["rank", "country_code", "share_ed1", "share_ed2", "delta_pp"])
        .expect("in-memory");
    for (i, d) in deltas.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            d.country_code.clone(),
            format!("{:.6}", d.share_ed1),
            format!("{:.6}", d.share_ed2),
            format!("{:.6}", d.delta_pp),
        ])
        .expect("in-memory");
    }
    String::from_utf8(w.into_inner().expect("in-memory")).expect("utf8")
}

pub fn write_tables(
    s1: &GeoSummary,
    s2: &GeoSummary,
    continent_path: &Path,
    deltas_path: &Path,
) -> Result<(), GeoError> {
    write(continent_path, continent_csv(&[s1, s2]).as_bytes())?;
    write(deltas_path, deltas_csv(&all_deltas(s1, s2)).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wikilinker::DescriptionSource;

    fn link(lat: f64, lon: f64) -> LinkedLocation {
        LinkedLocation {
            entry_id: format!("{lat},{lon}"),
            qid: "Q1".into(),
            lat,
            lon,
            similarity: 1.0,
            source: DescriptionSource::Wikipedia,
        }
    }

    fn summary(edition: &str, counts: &[(&str, usize)]) -> GeoSummary {
        let country_counts: BTreeMap<String, usize> =
            counts.iter().map(|&(c, n)| (c.to_string(), n)).collect();
        GeoSummary {
            edition_id: edition.into(),
            total_linked: country_counts.values().sum(),
            country_counts,
            continent_counts: BTreeMap::new(),
            continent_shares: BTreeMap::new(),
            unassigned: 0,
        }
    }

    #[test]
    fn bundled_set_loads() {
        let b = BoundarySet::bundled();
        assert_eq!(b.countries().len(), 175);
        assert_eq!(b.continent_of("SE"), Some("Europe"));
        assert_eq!(b.continent_of("US"), Some("North America"));
    }

    #[test]
    fn known_points() {
        let b = BoundarySet::bundled();
        assert_eq!(assign_country(59.3293, 18.0686, b), Some("SE"));
        assert_eq!(assign_country(59.9139, 10.7522, b), Some("NO"));
        assert_eq!(assign_country(48.8566, 2.3522, b), Some("FR"));
        assert_eq!(assign_country(0.0, 0.0, b), None);
        assert_eq!(assign_country(95.0, 0.0, b), None);
    }

    #[test]
    fn empty_summary() {
        let s = summarize("1", &[], BoundarySet::bundled());
        assert_eq!(s.total_linked, 0);
        assert!(s.continent_shares.is_empty());
    }

    #[test]
    fn four_links() {
        let links = [
            link(59.3293, 18.0686),
            link(57.7089, 11.9746),
            link(59.9139, 10.7522),
            link(40.7128, -74.0060),
        ];
        let s = summarize("1", &links, BoundarySet::bundled());
        assert_eq!(s.country_counts["SE"], 2);
        assert_eq!(s.continent_shares["Europe"], 0.75);
        assert_eq!(s.continent_shares["North America"], 0.25);
    }

    #[test]
    fn unassigned_is_excluded_from_shares() {
        let s = summarize(
            "1",
            &[link(59.3293, 18.0686), link(0.0, 0.0)],
            BoundarySet::bundled(),
        );
        assert_eq!((s.total_linked, s.unassigned), (2, 1));
        assert_eq!(s.continent_shares["Europe"], 1.0);
    }

    #[test]
    fn equal_summaries_have_zero_deltas() {
        let s = summary("1", &[("SE", 3), ("NO", 1), ("FR", 1)]);
        let (up, down) = country_deltas(&s, &s, 5);
        assert!(up.iter().chain(&down).all(|d| d.delta_pp == 0.0));
        let codes: Vec<&str> = up.iter().map(|d| d.country_code.as_str()).collect();
        assert_eq!(codes, ["FR", "NO", "SE"]);
    }

    #[test]
    fn delta_direction() {
        let s1 = summary("1", &[("SE", 1), ("FR", 3), ("DE", 6)]);
        let s2 = summary("2", &[("SE", 2), ("FR", 2), ("DE", 6)]);
        let (up, down) = country_deltas(&s1, &s2, 1);
        assert_eq!(up[0].country_code, "SE");
        assert!((up[0].delta_pp - 10.0).abs() < 1e-12);
        assert_eq!(down[0].country_code, "FR");
        assert!((down[0].delta_pp + 10.0).abs() < 1e-12);
    }

    #[test]
    fn map_features_round_trip() {
        let pts = vec![
            MapPoint {
                edition: "first".into(),
                entry_id: "1:a:1:0".into(),
                headword: "Åker".into(),
                qid: "Q1".into(),
                lat: 57.5,
                lon: 14.1,
            },
            MapPoint {
                edition: "second".into(),
                entry_id: "2:a:1:0".into(),
                headword: "Stockholm".into(),
                qid: "Q1754".into(),
                lat: 59.3293,
                lon: 18.0686,
            },
        ];
        let gj: geojson::GeoJson = map_geojson(&pts).parse().unwrap();
        let geojson::GeoJson::FeatureCollection(fc) = gj else {
            panic!()
        };
        assert_eq!(fc.features.len(), 2);
        assert_eq!(fc.features[0].property("headword").unwrap(), "Åker");
        let empty: geojson::GeoJson = map_geojson(&[]).parse().unwrap();
        assert!(matches!(empty, geojson::GeoJson::FeatureCollection(f) if f.features.is_empty()));
    }

    #[test]
    fn csv_layout() {
        let s = summarize(
            "1",
            &[link(59.3293, 18.0686), link(40.7128, -74.0060)],
            BoundarySet::bundled(),
        );
        assert_eq!(
            continent_csv(&[&s]),
            "edition,continent,count,share\n1,Europe,1,0.500000\n1,North America,1,0.500000\n"
        );
    }
}
