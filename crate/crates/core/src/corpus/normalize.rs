//! Markup stripping and character normalization.
//!
//! A raw fragment goes through: tag removal, HTML entity decoding, removal of
//! stray angle brackets, the character replacement table, and finally
//! whitespace collapsing. [`normalize_text`] repeats that pass until the
//! output is stable, which makes it idempotent even for inputs such as
//! `&amp;lt;` that only reveal markup after one round of decoding.

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use super::CorpusError;

const BUILTIN_TABLE: &str = include_str!("../../data/normalization.tsv");
const MAX_PASSES: usize = 8;

/// Maps uncommon characters to canonical replacements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationTable {
    map: HashMap<char, String>,
}

impl NormalizationTable {
    /// The table shipped in `data/normalization.tsv`.
    pub fn builtin() -> &'static NormalizationTable {
        static TABLE: OnceLock<NormalizationTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            NormalizationTable::parse(BUILTIN_TABLE).expect("bundled normalization table is valid")
        })
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parses `<hex codepoint> TAB <replacement>` lines. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, CorpusError> {
        let mut map = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: &str| CorpusError::Table {
                line: lineno + 1,
                message: message.to_string(),
            };
            let (code, replacement) = line.split_once('\t').ok_or_else(|| bad("missing TAB"))?;
            let cp = u32::from_str_radix(code.trim(), 16).map_err(|_| bad("bad hex codepoint"))?;
            let ch = char::from_u32(cp).ok_or_else(|| bad("not a Unicode scalar value"))?;
            if map.insert(ch, replacement.to_string()).is_some() {
                return Err(bad("duplicate codepoint"));
            }
        }
        // Replacements must be fixed points of the table, otherwise a second
        // normalization pass would change the text again.
        for (ch, replacement) in &map {
            if let Some(c) = replacement
                .chars()
                .find(|c| map.contains_key(c) || matches!(c, '<' | '>' | '&'))
            {
                return Err(CorpusError::Table {
                    line: 0,
                    message: format!("replacement for U+{:04X} contains {c:?}", *ch as u32),
                });
            }
        }
        Ok(Self { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn push_mapped(&self, ch: char, out: &mut String) {
        match self.map.get(&ch) {
            Some(rep) => out.push_str(rep),
            None => out.push(ch),
        }
    }
}

/// Lexical pieces of an HTML fragment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token<'a> {
    Text(&'a str),
    Tag { name: String, closing: bool },
    Comment(&'a str),
}

/// Splits `html` into text, tags and comments. A `<` that does not open a
/// tag is kept as text (and later dropped by [`clean_fragment`]).
pub(crate) fn tokenize(html: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let bytes = html.as_bytes();
    let mut text_start = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'<' {
            i += 1;
            continue;
        }
        let rest = &html[i..];
        if let Some(body) = rest.strip_prefix("<!--") {
            let Some(end) = body.find("-->") else { break };
            if text_start < i {
                tokens.push(Token::Text(&html[text_start..i]));
            }
            tokens.push(Token::Comment(&body[..end]));
            i += 4 + end + 3;
            text_start = i;
            continue;
        }
        let opens_tag = bytes
            .get(i + 1)
            .is_some_and(|b| b.is_ascii_alphabetic() || matches!(b, b'/' | b'!' | b'?'));
        let close = rest.find('>');
        match (opens_tag, close) {
            (true, Some(end)) => {
                if text_start < i {
                    tokens.push(Token::Text(&html[text_start..i]));
                }
                let inner = rest[1..end].trim();
                let (closing, inner) = match inner.strip_prefix('/') {
                    Some(r) => (true, r),
                    None => (false, inner),
                };
                let name: String = inner
                    .chars()
                    .take_while(|c| c.is_ascii_alphanumeric())
                    .collect::<String>()
                    .to_ascii_lowercase();
                tokens.push(Token::Tag { name, closing });
                i += end + 1;
                text_start = i;
            }
            _ => i += 1,
        }
    }
    if text_start < html.len() {
        tokens.push(Token::Text(&html[text_start..]));
    }
    tokens
}

/// Decodes entities (until stable), drops stray angle brackets and applies
/// the replacement table. Whitespace is left untouched.
pub(crate) fn clean_fragment(text: &str, table: &NormalizationTable) -> String {
    let mut decoded = text.to_string();
    for _ in 0..MAX_PASSES {
        let next = html_escape::decode_html_entities(&decoded).into_owned();
        if next == decoded {
            break;
        }
        decoded = next;
    }
    let mut out = String::with_capacity(decoded.len());
    for ch in decoded.chars().filter(|c| !matches!(c, '<' | '>')) {
        table.push_mapped(ch, &mut out);
    }
    out
}

/// Collapses whitespace runs to one space and trims both ends.
pub(crate) fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn single_pass(raw: &str, table: &NormalizationTable) -> String {
    let mut buf = String::with_capacity(raw.len());
    for token in tokenize(raw) {
        match token {
            Token::Text(t) => buf.push_str(&clean_fragment(t, table)),
            // Block-level tags and line breaks separate words.
            Token::Tag { .. } => buf.push(' '),
            Token::Comment(_) => {}
        }
    }
    collapse_whitespace(&buf)
}

/// Normalizes with the bundled table.
pub fn normalize_text(raw: &str) -> String {
    normalize_text_with(raw, NormalizationTable::builtin())
}

pub fn normalize_text_with(raw: &str, table: &NormalizationTable) -> String {
    let mut current = single_pass(raw, table);
    for _ in 1..MAX_PASSES {
        let next = single_pass(&current, table);
        if next == current {
            break;
        }
        current = next;
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nbsp_becomes_space() {
        assert_eq!(normalize_text("a\u{00A0}b"), "a b");
    }

    #[test]
    fn whitespace_collapses() {
        assert_eq!(normalize_text("  x   y "), "x y");
    }

    #[test]
    fn nbsp_entity_goes_through_table() {
        // &nbsp; decodes to U+00A0, which the table maps to a plain space.
        assert_eq!(normalize_text("Se&nbsp;Bajasid"), "Se Bajasid");
    }

    #[test]
    fn tags_are_removed() {
        assert_eq!(normalize_text("<b>Abo.</b> stad"), "Abo. stad");
        assert_eq!(normalize_text("a<br>b"), "a b");
        assert_eq!(normalize_text("x <!-- note --> y"), "x y");
    }

    #[test]
    fn nested_entities_settle() {
        assert_eq!(normalize_text("&amp;lt;b&amp;gt;x"), "bx");
        assert_eq!(normalize_text("AT&amp;T"), "AT&T");
        assert_eq!(normalize_text("a < b"), "a b");
    }

    #[test]
    fn soft_hyphen_and_ligatures() {
        assert_eq!(normalize_text("Jön\u{00AD}köping"), "Jönköping");
        assert_eq!(
            normalize_text("\u{FB01}nsk 1876\u{2013}1899"),
            "finsk 1876-1899"
        );
        assert_eq!(normalize_text("\u{201E}ja\u{201D}"), "\"ja\"");
    }

    #[test]
    fn table_rejects_non_fixed_point_replacement() {
        let err = NormalizationTable::parse("00A0\t\u{00AD}\n00AD\t\n").unwrap_err();
        assert!(matches!(err, CorpusError::Table { .. }));
    }

    #[test]
    fn table_rejects_malformed_lines() {
        assert!(NormalizationTable::parse("zz\tx").is_err());
        assert!(NormalizationTable::parse("00A0 x").is_err());
        assert!(NormalizationTable::parse("00A0\tx\n00A0\ty").is_err());
    }

    #[test]
    fn builtin_table_loads() {
        let t = NormalizationTable::builtin();
        assert!(t.len() > 30);
    }

    #[test]
    fn tokenizer_keeps_lone_angle_as_text() {
        let toks = tokenize("1 < 2 <b>x</b>");
        assert_eq!(toks[0], Token::Text("1 < 2 "));
        assert_eq!(
            toks[1],
            Token::Tag {
                name: "b".into(),
                closing: false
            }
        );
    }
}
