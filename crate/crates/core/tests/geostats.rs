//! Country assignment, continent shares and change tables on fixed point sets.

mod common;

use std::collections::BTreeMap;

use encyc::geostats::{
    all_deltas, assign_country, continent_csv, country_deltas, deltas_csv, map_geojson, summarize,
    BoundarySet, MapPoint, CENTROID_FALLBACK_KM,
};
use encyc::wikilinker::{haversine_km, LinkedLocation};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn links(rel: &str) -> Vec<LinkedLocation> {
    common::read_jsonl(&common::fixture(rel))
}

/// Tallied by hand from the point list in the fixture generator (city names
/// there): 26 European, 6 Asian, 5 African, 4 North American, 4 South
/// American, 2 Oceanian, and three open-ocean points.
const HAND_TALLY: &[(&str, usize)] = &[
    ("Africa", 5),
    ("Asia", 6),
    ("Europe", 26),
    ("North America", 4),
    ("Oceania", 2),
    ("South America", 4),
];

#[test]
fn continent_tally_on_fifty_links() {
    let ls = links("geostats/links.jsonl");
    assert_eq!(ls.len(), 50);
    let s = summarize("first", &ls, BoundarySet::bundled());
    let want: BTreeMap<String, usize> = HAND_TALLY
        .iter()
        .map(|(k, n)| (k.to_string(), *n))
        .collect();
    assert_eq!(s.continent_counts, want);
    assert_eq!((s.total_linked, s.unassigned), (50, 3));

    // The same tally from an independent polygon library at generation time.
    let shapely: BTreeMap<String, usize> = serde_json::from_str(
        &std::fs::read_to_string(common::fixture("geostats/shapely_tally.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(s.continent_counts, shapely);

    for (k, n) in HAND_TALLY {
        assert_eq!(s.continent_shares[*k], *n as f64 / 47.0, "{k}");
    }
    let sum: f64 = s.continent_shares.values().sum();
    assert!((sum - 1.0).abs() < 1e-9, "{sum}");

    let se = s.country_counts["SE"];
    assert_eq!(se, 8);
    assert_eq!(
        s.country_counts.values().sum::<usize>() + s.unassigned,
        s.total_linked
    );
}

/// Even-odd ray casting over every ring of a country, independent of the
/// polygon library.
fn ray_cast(lat: f64, lon: f64, set: &BoundarySet) -> Option<String> {
    let inside_ring = |ring: &[(f64, f64)]| {
        let mut inside = false;
        let n = ring.len();
        let mut j = n - 1;
        for i in 0..n {
            let (xi, yi) = ring[i];
            let (xj, yj) = ring[j];
            if (yi > lat) != (yj > lat) && lon < (xj - xi) * (lat - yi) / (yj - yi) + xi {
                inside = !inside;
            }
            j = i;
        }
        inside
    };
    let mut hits: Vec<&str> = set
        .countries()
        .iter()
        .filter(|c| {
            c.shape.0.iter().any(|poly| {
                let ext: Vec<(f64, f64)> = poly.exterior().0.iter().map(|p| (p.x, p.y)).collect();
                inside_ring(&ext)
                    && !poly.interiors().iter().any(|r| {
                        let hole: Vec<(f64, f64)> = r.0.iter().map(|p| (p.x, p.y)).collect();
                        inside_ring(&hole)
                    })
            })
        })
        .map(|c| c.code.as_str())
        .collect();
    hits.sort_unstable();
    hits.first().map(|s| s.to_string())
}

#[test]
fn containment_agrees_with_ray_casting() {
    let set = BoundarySet::bundled();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut land = 0;
    for _ in 0..5000 {
        let lat = rng.gen_range(-60.0..75.0);
        let lon = rng.gen_range(-180.0..180.0);
        let got = set.containing(lat, lon).map(|c| c.code.clone());
        let want = ray_cast(lat, lon, set);
        assert_eq!(got, want, "({lat}, {lon})");
        land += usize::from(got.is_some());
    }
    assert!(land > 1000, "only {land} land points");
}

#[test]
fn offshore_point_falls_back_to_nearest_centroid() {
    let set = BoundarySet::bundled();
    // About 6 km off the south coast of Jamaica, outside the coarse outline.
    let (lat, lon) = (17.75, -77.0);
    assert!(set.containing(lat, lon).is_none());
    let jm = set.get("JM").unwrap();
    assert!(haversine_km((lat, lon), jm.centroid).unwrap() < CENTROID_FALLBACK_KM);
    assert_eq!(assign_country(lat, lon, set), Some("JM"));
    // Far enough out, it stays unassigned.
    assert_eq!(assign_country(16.5, -77.0, set), None);
    assert_eq!(assign_country(95.0, 0.0, set), None);
}

fn assert_close(got: f64, want: f64) {
    assert!((got - want).abs() < 1e-9, "{got} vs {want}");
}

#[test]
fn trend_fixture_ranks_the_expected_movers() {
    let set = BoundarySet::bundled();
    let s1 = summarize("first", &links("geostats/trend_first.jsonl"), set);
    let s2 = summarize("second", &links("geostats/trend_second.jsonl"), set);
    assert_eq!((s1.assigned(), s2.assigned()), (46, 46));
    assert_eq!(s1.country_counts["DE"], 6);
    assert_eq!(s2.country_counts["US"], 6);

    let (up, down) = country_deltas(&s1, &s2, 5);
    let codes = |v: &[encyc::geostats::CountryDelta]| {
        v.iter().map(|d| d.country_code.clone()).collect::<Vec<_>>()
    };
    // Counts out of 46: US 1->6, NO 3->7, CA 1->3, FI and SE unchanged.
    assert_eq!(codes(&up), ["US", "NO", "CA", "FI", "SE"]);
    // DE 6->3, FR 6->3, GB 5->3, IT 4->2, RU 4->3.
    assert_eq!(codes(&down), ["DE", "FR", "GB", "IT", "RU"]);
    assert_close(up[0].delta_pp, 500.0 / 46.0);
    assert_close(up[1].delta_pp, 400.0 / 46.0);
    assert_close(up[2].delta_pp, 200.0 / 46.0);
    assert_close(down[0].delta_pp, -300.0 / 46.0);
    assert_close(down[2].delta_pp, -200.0 / 46.0);
    assert_close(down[4].delta_pp, -100.0 / 46.0);
    assert_close(down[0].share_ed1, 6.0 / 46.0);
}

fn points(ls: &[LinkedLocation], edition: &str) -> Vec<MapPoint> {
    ls.iter()
        .map(|l| MapPoint {
            edition: edition.into(),
            entry_id: l.entry_id.clone(),
            headword: l.qid.clone(),
            qid: l.qid.clone(),
            lat: l.lat,
            lon: l.lon,
        })
        .collect()
}

fn outputs(l1: &[LinkedLocation], l2: &[LinkedLocation]) -> (String, String, String) {
    let set = BoundarySet::bundled();
    let s1 = summarize("first", l1, set);
    let s2 = summarize("second", l2, set);
    let mut pts = points(l1, "first");
    pts.extend(points(l2, "second"));
    (
        map_geojson(&pts),
        continent_csv(&[&s1, &s2]),
        deltas_csv(&all_deltas(&s1, &s2)),
    )
}

#[test]
fn tables_and_map_are_byte_identical_across_runs() {
    let l1 = links("geostats/trend_first.jsonl");
    let l2 = links("geostats/trend_second.jsonl");
    let a = outputs(&l1, &l2);
    let b = outputs(&l1, &l2);
    assert_eq!(a, b);
    // The tables do not depend on link order either.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut r1, mut r2) = (l1.clone(), l2.clone());
    r1.shuffle(&mut rng);
    r2.shuffle(&mut rng);
    let c = outputs(&r1, &r2);
    assert_eq!((a.1, a.2), (c.1, c.2));
    assert!(a.0.starts_with("{\n  \"features\""));
}

fn arb_links() -> impl Strategy<Value = Vec<LinkedLocation>> {
    prop::collection::vec((-90.0f64..=90.0, -180.0f64..=180.0), 0..60).prop_map(|pts| {
        pts.into_iter()
            .enumerate()
            .map(|(i, (lat, lon))| LinkedLocation {
                entry_id: format!("1:g:0001:{i}"),
                qid: format!("Q{i}"),
                lat,
                lon,
                similarity: 1.0,
                source: encyc::wikilinker::DescriptionSource::Wikipedia,
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn summary_ignores_link_order(ls in arb_links(), seed in any::<u64>()) {
        let set = BoundarySet::bundled();
        let mut shuffled = ls.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(summarize("e", &ls, set), summarize("e", &shuffled, set));
    }

    #[test]
    fn counts_cover_every_link(ls in arb_links()) {
        let s = summarize("e", &ls, BoundarySet::bundled());
        prop_assert_eq!(s.country_counts.values().sum::<usize>() + s.unassigned, s.total_linked);
        prop_assert_eq!(s.continent_counts.values().sum::<usize>(), s.assigned());
        if s.assigned() > 0 {
            let sum: f64 = s.continent_shares.values().sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
        } else {
            prop_assert!(s.continent_shares.is_empty());
        }
    }

    #[test]
    fn delta_ranking_is_deterministic(a in arb_links(), b in arb_links()) {
        let set = BoundarySet::bundled();
        let (s1, s2) = (summarize("1", &a, set), summarize("2", &b, set));
        let d = all_deltas(&s1, &s2);
        prop_assert_eq!(&d, &all_deltas(&s1, &s2));
        prop_assert!(d.windows(2).all(|w| w[0].delta_pp > w[1].delta_pp
            || (w[0].delta_pp == w[1].delta_pp && w[0].country_code < w[1].country_code)));
    }
}
