//! Independent reference implementations. None of these call into the crate
//! beyond its data types and the mock embedder used to build inputs.

use std::collections::HashSet;

use encyc::embedder::{Embedder, Embedding, MockEmbedder};
use encyc::matcher::MatchResult;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Full-matrix edit distance from the textbook recurrence.
pub fn dp_levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut m = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in m.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in m[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = m[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            m[i][j] = sub.min(m[i - 1][j] + 1).min(m[i][j - 1] + 1);
        }
    }
    m[a.len()][b.len()]
}

pub const ALPHABET: &[char] = &['a', 'b', 'e', 'k', 'q', 'v', 'å', 'ä', 'ö', 'Ö', ' ', '.'];

pub fn random_string(rng: &mut impl Rng, max: usize) -> String {
    let n = rng.gen_range(0..=max);
    (0..n)
        .map(|_| ALPHABET[rng.gen_range(0..ALPHABET.len())])
        .collect()
}

/// Spherical law of cosines. Loses precision for nearly coincident and
/// nearly antipodal points, so callers compare in the middle range only.
pub fn cosine_law_km(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (p1, p2) = (a.0.to_radians(), b.0.to_radians());
    let dl = (b.1 - a.1).to_radians();
    let c = p1.sin() * p2.sin() + p1.cos() * p2.cos() * dl.cos();
    6371.0 * c.clamp(-1.0, 1.0).acos()
}

/// Pairs `(a, b)` whose cosine-law distance lies in 1000..19000 km, where
/// acos is well conditioned.
pub fn well_separated_pairs(seed: u64, n: usize) -> Vec<((f64, f64), (f64, f64))> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = |rng: &mut ChaCha8Rng| (rng.gen_range(-90.0..=90.0), rng.gen_range(-180.0..=180.0));
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (a, b) = (point(&mut rng), point(&mut rng));
        if (1000.0..19000.0).contains(&cosine_law_km(a, b)) {
            out.push((a, b));
        }
    }
    out
}

/// Result of the brute-force matching replay.
pub struct Replay {
    pub pairs: Vec<(String, String, f64)>,
    pub removed: Vec<String>,
    pub added: Vec<String>,
}

fn oracle_dot(a: &[f32], b: &[f32]) -> f64 {
    let mut acc = 0.0f64;
    for i in 0..a.len() {
        acc += a[i] as f64 * b[i] as f64;
    }
    acc
}

/// Every similarity computed directly, candidates sorted by descending
/// similarity with ties to the lower index, first unclaimed candidate at or
/// above the threshold wins.
pub fn replay(
    e1: &[(String, Embedding)],
    e2: &[(String, Embedding)],
    threshold: f64,
    k: usize,
) -> Replay {
    let mut taken = vec![false; e2.len()];
    let mut out = Replay {
        pairs: vec![],
        removed: vec![],
        added: vec![],
    };
    for (id, v) in e1 {
        let mut sims: Vec<(f64, usize)> = e2
            .iter()
            .enumerate()
            .map(|(j, (_, w))| (oracle_dot(v, w), j))
            .collect();
        sims.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        let pick = sims
            .iter()
            .take(k)
            .find(|(s, j)| *s >= threshold && !taken[*j]);
        match pick {
            Some(&(s, j)) => {
                taken[j] = true;
                out.pairs.push((id.clone(), e2[j].0.clone(), s));
            }
            None => out.removed.push(id.clone()),
        }
    }
    out.added = e2
        .iter()
        .zip(&taken)
        .filter(|(_, t)| !**t)
        .map(|((id, _), _)| id.clone())
        .collect();
    out
}

pub fn same_as_replay(result: &MatchResult, oracle: &Replay) -> Result<(), String> {
    if result.pairs.len() != oracle.pairs.len() {
        return Err(format!(
            "{} pairs, replay has {}",
            result.pairs.len(),
            oracle.pairs.len()
        ));
    }
    for (p, (a, b, s)) in result.pairs.iter().zip(&oracle.pairs) {
        if (&p.e1_id, &p.e2_id) != (a, b) {
            return Err(format!("pair {}->{}, replay {a}->{b}", p.e1_id, p.e2_id));
        }
        if (p.similarity - s).abs() >= 1e-12 {
            return Err(format!("{a}: similarity {} vs {s}", p.similarity));
        }
    }
    if result.removed != oracle.removed {
        return Err("removed lists differ".into());
    }
    if result.added != oracle.added {
        return Err("added lists differ".into());
    }
    Ok(())
}

const SYLLABLES: &[&str] = &[
    "ka", "lo", "ber", "ga", "vik", "holm", "stad", "sund", "ås", "by", "ne", "ri", "tor", "ström",
    "dal", "ö", "sjö", "mar", "el", "fors",
];
const WORDS: &[&str] = &[
    "socken", "i", "län", "härad", "vid", "stad", "kyrka", "inv.", "areal", "bruk", "hamn", "kung",
    "biskop", "f.", "d.", "och", "med", "handel", "sjö", "ån",
];

fn random_text(rng: &mut impl Rng) -> String {
    let name: String = (0..rng.gen_range(2..5))
        .map(|_| *SYLLABLES.choose(rng).unwrap())
        .collect();
    let mut words = vec![name + ","];
    for _ in 0..rng.gen_range(4..14) {
        words.push(WORDS.choose(rng).unwrap().to_string());
    }
    words.push(rng.gen_range(100..99999).to_string());
    words.join(" ")
}

/// Edits a few characters or words, the kind of change a revision makes.
fn revise(text: &str, rng: &mut impl Rng) -> String {
    let mut chars: Vec<char> = text.chars().collect();
    for _ in 0..rng.gen_range(0..4) {
        let i = rng.gen_range(0..chars.len());
        match rng.gen_range(0..3) {
            0 => chars[i] = *['k', 'q', 'e', 'ä', 'w', 'v'].choose(rng).unwrap(),
            1 => {
                chars.remove(i);
            }
            _ => chars.insert(i, 'e'),
        }
    }
    let mut s: String = chars.into_iter().collect();
    if rng.gen_bool(0.3) {
        s.push_str(" och ");
        s.push_str(WORDS.choose(rng).unwrap());
    }
    s
}

pub type Edition = Vec<(String, Embedding)>;

/// Two mock-embedded editions of `n` entries: most edition-2 entries are
/// revisions of an edition-1 entry, the rest are new, and the order is
/// locally shuffled.
pub fn revision_corpus(n: usize, seed: u64, dim: usize) -> (Edition, Edition) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first: Vec<String> = (0..n).map(|_| random_text(&mut rng)).collect();
    let mut second: Vec<String> = first
        .iter()
        .map(|t| {
            if rng.gen_bool(0.85) {
                revise(t, &mut rng)
            } else {
                random_text(&mut rng)
            }
        })
        .collect();
    for w in second.chunks_mut(5) {
        w.shuffle(&mut rng);
    }
    let embedder = MockEmbedder::new(dim, seed);
    let embed = |texts: &[String], ed: u8| -> Vec<(String, Embedding)> {
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        embedder
            .embed(&refs)
            .unwrap()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (format!("{ed}:r:0001:{i}"), v))
            .collect()
    };
    (embed(&first, 1), embed(&second, 2))
}

/// Unit vectors with coarse components, so exact similarity ties are common.
pub fn random_vectors(
    rng: &mut impl Rng,
    n: usize,
    dim: usize,
    ed: u8,
) -> Vec<(String, Embedding)> {
    (0..n)
        .map(|i| {
            let mut v: Vec<f32> = (0..dim).map(|_| rng.gen_range(-2i32..=2) as f32).collect();
            if v.iter().all(|x| *x == 0.0) {
                v[0] = 1.0;
            }
            encyc::embedder::normalize(&mut v);
            (format!("{ed}:p:0001:{i}"), v)
        })
        .collect()
}

fn sorted(mut v: Vec<&str>) -> Vec<&str> {
    v.sort_unstable();
    v
}

/// Pairs plus removed cover edition 1 exactly once, pairs plus added cover
/// edition 2 exactly once, and every pair clears the threshold.
pub fn check_partition(
    result: &MatchResult,
    e1: &[(String, Embedding)],
    e2: &[(String, Embedding)],
) -> Result<(), String> {
    let left = sorted(
        result
            .pairs
            .iter()
            .map(|p| p.e1_id.as_str())
            .chain(result.removed.iter().map(String::as_str))
            .collect(),
    );
    if left != sorted(e1.iter().map(|(id, _)| id.as_str()).collect()) {
        return Err("edition-1 ids are not partitioned".into());
    }
    let right = sorted(
        result
            .pairs
            .iter()
            .map(|p| p.e2_id.as_str())
            .chain(result.added.iter().map(String::as_str))
            .collect(),
    );
    if right != sorted(e2.iter().map(|(id, _)| id.as_str()).collect()) {
        return Err("edition-2 ids are not partitioned".into());
    }
    let distinct: HashSet<&str> = result.pairs.iter().map(|p| p.e2_id.as_str()).collect();
    if distinct.len() != result.pairs.len() {
        return Err("an edition-2 entry is claimed twice".into());
    }
    if let Some(p) = result
        .pairs
        .iter()
        .find(|p| p.similarity < result.threshold)
    {
        return Err(format!("{} paired below threshold", p.e1_id));
    }
    Ok(())
}
