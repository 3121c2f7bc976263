//! Client for an out-of-process embedding provider.
//!
//! The wire format is newline-delimited JSON. Each request line is
//! `{"id": "...", "text": "..."}`; each response line is
//! `{"id": "...", "vector": [...]}` (an optional `"dim"` is checked when
//! present) or `{"id": ..., "error": "...", "line": n}`. Ids are echoed
//! verbatim and responses are matched to requests by id.
//!
//! Two transports: a child process talking over stdin/stdout, or an HTTP
//! endpoint that takes a batch of request lines as the POST body and answers
//! with the response lines.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::{normalize, EmbedError, Embedder, Embedding};
use crate::http::{Transport, UreqTransport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalRequest {
    pub id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalResponse {
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub vector: Option<Vec<f32>>,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub error: Option<String>,
    #[serde(default)]
    pub line: Option<u64>,
}

struct StdioChannel {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
}

enum Channel {
    Stdio(Mutex<StdioChannel>),
    Http {
        url: String,
        transport: Arc<dyn Transport>,
    },
}

pub struct ExternalEmbedder {
    channel: Channel,
    dim: usize,
    batch_size: usize,
    next_id: AtomicU64,
    tag: String,
}

impl ExternalEmbedder {
    /// Starts `argv[0]` with the remaining arguments and talks to it over
    /// stdio.
    pub fn spawn(argv: &[String], dim: usize) -> Result<Self, EmbedError> {
        let (program, args) = argv
            .split_first()
            .ok_or_else(|| EmbedError::Spec("empty provider command".into()))?;
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| EmbedError::ProviderUnavailable(format!("{program}: {e}")))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        Ok(Self {
            channel: Channel::Stdio(Mutex::new(StdioChannel {
                child,
                stdin,
                stdout,
            })),
            dim,
            batch_size: 64,
            next_id: AtomicU64::new(0),
            tag: format!("external-stdio:{}", argv.join(" ")),
        })
    }

    pub fn http(url: &str, dim: usize) -> Self {
        Self::http_with_transport(url, dim, Arc::new(UreqTransport::default()))
    }

    pub fn http_with_transport(url: &str, dim: usize, transport: Arc<dyn Transport>) -> Self {
        Self {
            channel: Channel::Http {
                url: url.to_string(),
                transport,
            },
            dim,
            batch_size: 64,
            next_id: AtomicU64::new(0),
            tag: format!("external-http:{url}"),
        }
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> Self {
        self.batch_size = batch_size.max(1);
        self
    }

    fn exchange(&self, requests: &[ExternalRequest]) -> Result<Vec<ExternalResponse>, EmbedError> {
        let mut body = String::new();
        for r in requests {
            body.push_str(&serde_json::to_string(r).expect("request serializes"));
            body.push('\n');
        }
        let unavailable = |e: String| EmbedError::ProviderUnavailable(e);

        let lines: Vec<String> = match &self.channel {
            Channel::Stdio(chan) => {
                let mut chan = chan.lock().unwrap_or_else(|p| p.into_inner());
                chan.stdin
                    .write_all(body.as_bytes())
                    .and_then(|_| chan.stdin.flush())
                    .map_err(|e| unavailable(format!("writing to provider: {e}")))?;
                let mut lines = Vec::with_capacity(requests.len());
                while lines.len() < requests.len() {
                    let mut line = String::new();
                    let n = chan
                        .stdout
                        .read_line(&mut line)
                        .map_err(|e| unavailable(format!("reading from provider: {e}")))?;
                    if n == 0 {
                        return Err(unavailable("provider closed its output".into()));
                    }
                    if !line.trim().is_empty() {
                        lines.push(line);
                    }
                }
                lines
            }
            Channel::Http { url, transport } => {
                let resp = transport
                    .post(url, "application/x-ndjson", &body)
                    .map_err(unavailable)?;
                if resp.status != 200 {
                    return Err(unavailable(format!("{url} answered {}", resp.status)));
                }
                resp.body
                    .lines()
                    .filter(|l| !l.trim().is_empty())
                    .map(str::to_string)
                    .collect()
            }
        };

        lines
            .iter()
            .map(|l| {
                serde_json::from_str(l)
                    .map_err(|e| EmbedError::Protocol(format!("unparseable response {l:?}: {e}")))
            })
            .collect()
    }

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<Embedding>, EmbedError> {
        let requests: Vec<ExternalRequest> = texts
            .iter()
            .map(|t| ExternalRequest {
                id: self.next_id.fetch_add(1, Ordering::Relaxed).to_string(),
                text: t.to_string(),
            })
            .collect();
        let mut by_id: HashMap<String, ExternalResponse> = HashMap::new();
        for resp in self.exchange(&requests)? {
            if let Some(err) = &resp.error {
                return Err(EmbedError::Protocol(match resp.line {
                    Some(line) => format!("provider error on line {line}: {err}"),
                    None => format!("provider error: {err}"),
                }));
            }
            let id = resp
                .id
                .clone()
                .ok_or_else(|| EmbedError::Protocol("response without id".into()))?;
            by_id.insert(id, resp);
        }

        requests
            .iter()
            .map(|req| {
                let resp = by_id.remove(&req.id).ok_or_else(|| {
                    EmbedError::Protocol(format!("no response for id {}", req.id))
                })?;
                let mut v = resp
                    .vector
                    .ok_or_else(|| EmbedError::Protocol(format!("id {} has no vector", req.id)))?;
                if v.len() != self.dim || resp.dim.is_some_and(|d| d != self.dim) {
                    return Err(EmbedError::DimMismatch {
                        expected: self.dim,
                        got: v.len(),
                    });
                }
                normalize(&mut v);
                Ok(v)
            })
            .collect()
    }
}

impl Embedder for ExternalEmbedder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn provider_tag(&self) -> String {
        self.tag.clone()
    }

    fn embed(&self, texts: &[&str]) -> Result<Vec<Embedding>, EmbedError> {
        if texts.iter().any(|t| t.trim().is_empty()) {
            return Err(EmbedError::EmptyText);
        }
        let mut out = Vec::with_capacity(texts.len());
        for chunk in texts.chunks(self.batch_size) {
            out.extend(self.embed_batch(chunk)?);
        }
        Ok(out)
    }
}

impl Drop for ExternalEmbedder {
    fn drop(&mut self) {
        if let Channel::Stdio(chan) = &self.channel {
            let mut chan = chan.lock().unwrap_or_else(|p| p.into_inner());
            let _ = chan.child.kill();
            let _ = chan.child.wait();
        }
    }
}
