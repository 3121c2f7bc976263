//! Edit distance over Unicode scalar values.

use super::SegmentError;

/// Classic Levenshtein distance (unit costs), two-row DP.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return long.len();
    }

    let mut prev: Vec<usize> = (0..=short.len()).collect();
    let mut cur = vec![0; short.len() + 1];
    for (i, &lc) in long.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &sc) in short.iter().enumerate() {
            let substitution = prev[j] + usize::from(lc != sc);
            cur[j + 1] = substitution.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len()]
}

/// Edit distance divided by the length of `reference`.
///
/// `reference` is the trusted side (an index word); `candidate` is the text
/// being compared against it. The result is 0 for identical strings and can
/// exceed 1 when the candidate is much longer than the reference.
pub fn relative_levenshtein(reference: &str, candidate: &str) -> Result<f64, SegmentError> {
    let len = reference.chars().count();
    if len == 0 {
        return Err(SegmentError::EmptyReference);
    }
    Ok(levenshtein(reference, candidate) as f64 / len as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_is_zero() {
        assert_eq!(relative_levenshtein("abc", "abc").unwrap(), 0.0);
    }

    #[test]
    fn spelling_reform_pair() {
        // One substitution (Q -> K) over an 11-letter word.
        assert_eq!(levenshtein("Qvenneberga", "Kvenneberga"), 1);
        assert_eq!(
            relative_levenshtein("Qvenneberga", "Kvenneberga").unwrap(),
            1.0 / 11.0
        );
    }

    #[test]
    fn ocr_variant_passes_threshold() {
        let score = relative_levenshtein("Bajasid", "Bajesid").unwrap();
        assert_eq!(score, 1.0 / 7.0);
        assert!(score <= 0.15);
    }

    #[test]
    fn empty_reference_is_an_error() {
        assert!(matches!(
            relative_levenshtein("", "x"),
            Err(SegmentError::EmptyReference)
        ));
    }

    #[test]
    fn counts_scalar_values_not_bytes() {
        assert_eq!(levenshtein("Åker", "Aker"), 1);
        assert_eq!(levenshtein("", "Ö"), 1);
        assert_eq!(levenshtein("kitten", "sitting"), 3);
    }
}
