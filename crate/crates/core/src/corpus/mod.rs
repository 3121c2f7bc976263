//! Facsimile page ingestion.
//!
//! Pages are HTML files laid out like the archive's OCR pages:
//!
//! ```text
//! <!-- index -->
//! <ul><li>Abo</li><li>Abolition</li></ul>
//! <!-- /index -->
//! <!-- mode=normal -->
//! <p><b>Abo.</b> stad i Finland ...</p>
//! <p>fortsatt text ...</p>
//! <!-- NEWIMAGE2 -->
//! ```
//!
//! The OCR text region (between `mode=normal` and `NEWIMAGE2`) is required.
//! Paragraphs are delimited by `<p>`/`<div>` tags or by blank lines. The
//! index region is optional; its `<li>` items become the page's index words.
//!
//! All offsets are counted in Unicode scalar values.

mod normalize;
mod store;

pub use normalize::{normalize_text, normalize_text_with, NormalizationTable};
pub use store::{Downloader, ManifestRecord, PageStore, MANIFEST_FILE};

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use normalize::{clean_fragment, tokenize, Token};

const TEXT_START: &str = "mode=normal";
const TEXT_END: &str = "NEWIMAGE2";
const INDEX_START: &str = "index";
const INDEX_END: &str = "/index";

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("malformed page {page}: {reason}")]
    MalformedPage { page: String, reason: String },
    #[error("normalization table line {line}: {message}")]
    Table { line: usize, message: String },
    #[error("manifest {path} line {line}: {message}")]
    Manifest {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("download failed: {0}")]
    Download(#[from] crate::http::HttpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EditionId {
    First,
    Second,
}

impl EditionId {
    pub const ALL: [EditionId; 2] = [EditionId::First, EditionId::Second];

    pub fn as_str(self) -> &'static str {
        match self {
            EditionId::First => "first",
            EditionId::Second => "second",
        }
    }

    /// Short numeric tag used inside entry identifiers.
    pub fn number(self) -> u8 {
        match self {
            EditionId::First => 1,
            EditionId::Second => 2,
        }
    }
}

impl fmt::Display for EditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EditionId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" | "1" => Ok(EditionId::First),
            "second" | "2" => Ok(EditionId::Second),
            other => Err(format!("unknown edition {other:?}")),
        }
    }
}

/// A normalized paragraph with the character ranges that were bold in the
/// source markup. Spans are sorted, non-overlapping and non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paragraph {
    pub text: String,
    pub bold_spans: Vec<(usize, usize)>,
}

impl Paragraph {
    pub fn plain(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            bold_spans: Vec::new(),
        }
    }

    /// Builds a paragraph whose first `bold_len` characters are bold.
    pub fn with_bold_prefix(text: impl Into<String>, bold_len: usize) -> Self {
        Self {
            text: text.into(),
            bold_spans: vec![(0, bold_len)],
        }
    }

    /// Text covered by a span, sliced by character offsets.
    pub fn span_text(&self, (start, end): (usize, usize)) -> String {
        self.text.chars().skip(start).take(end - start).collect()
    }

    pub fn starts_bold(&self) -> bool {
        self.bold_spans.first().is_some_and(|&(s, _)| s == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Page {
    pub edition: EditionId,
    pub volume_id: String,
    pub page_id: String,
    pub paragraphs: Vec<Paragraph>,
    pub index_words: Vec<String>,
}

/// Accumulates characters of one paragraph along with their boldness.
#[derive(Default)]
struct ParagraphBuilder {
    chars: Vec<(char, bool)>,
}

impl ParagraphBuilder {
    fn push_str(&mut self, s: &str, bold: bool) {
        self.chars.extend(s.chars().map(|c| (c, bold)));
    }

    fn finish(&mut self) -> Option<Paragraph> {
        let raw = std::mem::take(&mut self.chars);
        // Collapse whitespace; a collapsed space is bold only if its whole run was.
        let mut out: Vec<(char, bool)> = Vec::with_capacity(raw.len());
        let mut i = 0;
        while i < raw.len() {
            if raw[i].0.is_whitespace() {
                let mut all_bold = true;
                while i < raw.len() && raw[i].0.is_whitespace() {
                    all_bold &= raw[i].1;
                    i += 1;
                }
                out.push((' ', all_bold));
            } else {
                out.push(raw[i]);
                i += 1;
            }
        }
        while out.first().is_some_and(|c| c.0 == ' ') {
            out.remove(0);
        }
        while out.last().is_some_and(|c| c.0 == ' ') {
            out.pop();
        }
        if out.is_empty() {
            return None;
        }
        let mut spans = Vec::new();
        let mut j = 0;
        while j < out.len() {
            if !out[j].1 {
                j += 1;
                continue;
            }
            let mut start = j;
            while j < out.len() && out[j].1 {
                j += 1;
            }
            let mut end = j;
            while start < end && out[start].0 == ' ' {
                start += 1;
            }
            while end > start && out[end - 1].0 == ' ' {
                end -= 1;
            }
            if start < end {
                spans.push((start, end));
            }
        }
        Some(Paragraph {
            text: out.iter().map(|c| c.0).collect(),
            bold_spans: spans,
        })
    }
}

fn comment_is(body: &str, marker: &str) -> bool {
    body.trim() == marker
}

/// Parses one archive page with the bundled normalization table.
pub fn parse_page(
    raw_html: &str,
    edition: EditionId,
    volume_id: &str,
    page_id: &str,
) -> Result<Page, CorpusError> {
    parse_page_with(
        raw_html,
        edition,
        volume_id,
        page_id,
        NormalizationTable::builtin(),
    )
}

pub fn parse_page_with(
    raw_html: &str,
    edition: EditionId,
    volume_id: &str,
    page_id: &str,
    table: &NormalizationTable,
) -> Result<Page, CorpusError> {
    #[derive(PartialEq)]
    enum Region {
        Outside,
        Index,
        Text,
    }

    let mut region = Region::Outside;
    let mut seen_text = false;
    let mut closed_text = false;
    let mut paragraphs = Vec::new();
    let mut index_words = Vec::new();
    let mut builder = ParagraphBuilder::default();
    let mut bold_depth = 0usize;
    let mut index_item: Option<String> = None;

    for token in tokenize(raw_html) {
        match (&region, token) {
            (_, Token::Comment(body)) if comment_is(body, TEXT_START) => {
                region = Region::Text;
                seen_text = true;
            }
            (Region::Text, Token::Comment(body)) if comment_is(body, TEXT_END) => {
                paragraphs.extend(builder.finish());
                region = Region::Outside;
                closed_text = true;
            }
            (Region::Outside, Token::Comment(body)) if comment_is(body, INDEX_START) => {
                region = Region::Index;
            }
            (Region::Index, Token::Comment(body)) if comment_is(body, INDEX_END) => {
                region = Region::Outside;
            }
            (Region::Index, Token::Tag { name, closing }) if name == "li" => {
                if let Some(item) = index_item.take() {
                    let word = normalize::collapse_whitespace(&item);
                    if !word.is_empty() {
                        index_words.push(word);
                    }
                }
                if !closing {
                    index_item = Some(String::new());
                }
            }
            (Region::Index, Token::Text(t)) => {
                if let Some(item) = index_item.as_mut() {
                    item.push_str(&clean_fragment(t, table));
                }
            }
            (Region::Text, Token::Text(t)) => {
                // Blank lines separate paragraphs in plain OCR text.
                let mut pieces = split_blank_lines(t).into_iter().peekable();
                while let Some(piece) = pieces.next() {
                    builder.push_str(&clean_fragment(piece, table), bold_depth > 0);
                    if pieces.peek().is_some() {
                        paragraphs.extend(builder.finish());
                    }
                }
            }
            (Region::Text, Token::Tag { name, closing }) => match name.as_str() {
                "b" | "strong" => {
                    bold_depth = if closing {
                        bold_depth.saturating_sub(1)
                    } else {
                        bold_depth + 1
                    };
                }
                "p" | "div" => {
                    paragraphs.extend(builder.finish());
                    bold_depth = 0;
                }
                _ => builder.push_str(" ", bold_depth > 0),
            },
            _ => {}
        }
    }
    if let Some(item) = index_item.take() {
        let word = normalize::collapse_whitespace(&item);
        if !word.is_empty() {
            index_words.push(word);
        }
    }

    if !seen_text {
        return Err(CorpusError::MalformedPage {
            page: format!("{volume_id}/{page_id}"),
            reason: format!("no <!-- {TEXT_START} --> text region"),
        });
    }
    if !closed_text {
        paragraphs.extend(builder.finish());
    }
    Ok(Page {
        edition,
        volume_id: volume_id.to_string(),
        page_id: page_id.to_string(),
        paragraphs,
        index_words,
    })
}

/// Splits on lines that contain only whitespace. The first line of `text`
/// continues a line begun before it, so it never counts as blank.
fn split_blank_lines(text: &str) -> Vec<&str> {
    let mut pieces = Vec::new();
    let mut start = 0;
    let mut offset = 0;
    for (n, line) in text.split_inclusive('\n').enumerate() {
        if n > 0 && line.ends_with('\n') && line.trim().is_empty() {
            pieces.push(&text[start..offset]);
            start = offset + line.len();
        }
        offset += line.len();
    }
    pieces.push(&text[start..]);
    pieces
}

#[cfg(test)]
mod tests {
    use super::*;

    fn page(body: &str) -> String {
        format!("<html><body>\n<!-- mode=normal -->\n{body}\n<!-- NEWIMAGE2 -->\n</body></html>")
    }

    #[test]
    fn bold_prefix_becomes_span() {
        let p = parse_page(
            &page("<b>Abo.</b> stad i Finland."),
            EditionId::First,
            "a",
            "1",
        )
        .unwrap();
        assert_eq!(p.paragraphs.len(), 1);
        let para = &p.paragraphs[0];
        assert_eq!(para.text, "Abo. stad i Finland.");
        assert_eq!(para.bold_spans, vec![(0, 4)]);
        assert_eq!(para.span_text(para.bold_spans[0]), "Abo.");
    }

    #[test]
    fn empty_index_region() {
        let html = format!("<!-- index --><ul></ul><!-- /index -->{}", page("<p>x</p>"));
        let p = parse_page(&html, EditionId::First, "a", "1").unwrap();
        assert!(p.index_words.is_empty());
    }

    #[test]
    fn missing_text_region_is_malformed() {
        let err = parse_page("<html><p>x</p></html>", EditionId::Second, "a", "1").unwrap_err();
        assert!(matches!(err, CorpusError::MalformedPage { .. }));
    }

    #[test]
    fn blank_lines_split_paragraphs() {
        let p = parse_page(
            &page("<b>Ask,</b> socken.\nmer text\n\n  \nNästa stycke"),
            EditionId::Second,
            "a",
            "1",
        )
        .unwrap();
        let texts: Vec<_> = p.paragraphs.iter().map(|p| p.text.as_str()).collect();
        assert_eq!(texts, vec!["Ask, socken. mer text", "Nästa stycke"]);
    }

    #[test]
    fn offsets_are_scalar_values() {
        let p = parse_page(
            &page("<p>Ö <b>Åsenhöga</b>, socken</p>"),
            EditionId::First,
            "a",
            "1",
        )
        .unwrap();
        let para = &p.paragraphs[0];
        assert_eq!(para.bold_spans, vec![(2, 10)]);
        assert_eq!(para.span_text((2, 10)), "Åsenhöga");
        assert!(!para.starts_bold());
    }

    #[test]
    fn bold_whitespace_is_trimmed_from_spans() {
        let p = parse_page(
            &page("<p><b> Kalmar, </b>stad</p>"),
            EditionId::First,
            "k",
            "1",
        )
        .unwrap();
        assert_eq!(p.paragraphs[0].text, "Kalmar, stad");
        assert_eq!(p.paragraphs[0].bold_spans, vec![(0, 7)]);
    }

    #[test]
    fn entity_markup_never_survives() {
        let p = parse_page(
            &page("<p>&lt;b&gt;x&lt;/b&gt; y &gt; z</p>"),
            EditionId::First,
            "a",
            "1",
        )
        .unwrap();
        assert_eq!(p.paragraphs[0].text, "bx/b y z");
        assert!(p.paragraphs[0].bold_spans.is_empty());
    }
}
