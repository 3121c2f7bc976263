//! Segmentation, cross-edition alignment and geographic linking for OCR'd
//! encyclopedia facsimiles.

pub mod corpus;
pub mod crossref;
pub mod embedder;
pub mod geostats;
pub mod http;
pub mod location;
pub mod logreg;
pub mod matcher;
pub mod metrics;
pub mod pipeline;
pub mod segmenter;
pub mod wikilinker;
