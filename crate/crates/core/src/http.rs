//! Blocking HTTP access with rate limiting, retries and record/replay.
//!
//! Every external request goes through [`ApiClient`]. In `live` mode requests
//! hit the network (rate-limited, retried with exponential backoff). In
//! `record` mode responses are also persisted into a [`FixtureStore`]; in
//! `replay` mode only the store is consulted and a missing response is an
//! error. Requests are keyed by the SHA-256 of their canonical form.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const FIXTURE_INDEX: &str = "index.jsonl";

#[derive(Debug, thiserror::Error)]
pub enum HttpError {
    #[error("service unavailable for {url}: {reason}")]
    Unavailable { url: String, reason: String },
    #[error("HTTP {status} for {url}")]
    Status { url: String, status: u16 },
    #[error("no recorded fixture for {request}")]
    FixtureMiss { request: String },
    #[error("fixture store {path}: {message}")]
    Store { path: PathBuf, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ApiMode {
    Live,
    Record,
    #[default]
    Replay,
}

impl FromStr for ApiMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "live" => Ok(ApiMode::Live),
            "record" => Ok(ApiMode::Record),
            "replay" => Ok(ApiMode::Replay),
            other => Err(format!("unknown api mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

/// A way to perform one HTTP exchange. Errors returned here are transport
/// failures (connection refused, timeout); HTTP error codes come back as
/// responses.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> Result<HttpResponse, String>;
    fn post(&self, url: &str, content_type: &str, body: &str) -> Result<HttpResponse, String>;
}

pub struct UreqTransport {
    agent: ureq::Agent,
}

impl UreqTransport {
    pub fn new(user_agent: &str, timeout: Duration) -> Self {
        let agent = ureq::AgentBuilder::new()
            .user_agent(user_agent)
            .timeout(timeout)
            .build();
        Self { agent }
    }

    fn into_response(result: Result<ureq::Response, ureq::Error>) -> Result<HttpResponse, String> {
        match result {
            Ok(resp) => {
                let status = resp.status();
                let body = resp.into_string().map_err(|e| e.to_string())?;
                Ok(HttpResponse { status, body })
            }
            Err(ureq::Error::Status(status, resp)) => Ok(HttpResponse {
                status,
                body: resp.into_string().unwrap_or_default(),
            }),
            Err(ureq::Error::Transport(t)) => Err(t.to_string()),
        }
    }
}

impl Default for UreqTransport {
    fn default() -> Self {
        Self::new(
            concat!("encyc/", env!("CARGO_PKG_VERSION")),
            Duration::from_secs(30),
        )
    }
}

impl Transport for UreqTransport {
    fn get(&self, url: &str) -> Result<HttpResponse, String> {
        Self::into_response(self.agent.get(url).call())
    }

    fn post(&self, url: &str, content_type: &str, body: &str) -> Result<HttpResponse, String> {
        Self::into_response(
            self.agent
                .post(url)
                .set("Content-Type", content_type)
                .send_string(body),
        )
    }
}

/// Enforces a minimum interval between consecutive requests.
#[derive(Debug)]
pub struct RateLimiter {
    min_interval: Duration,
    next_slot: Mutex<Option<Instant>>,
}

impl RateLimiter {
    /// `requests_per_second <= 0` disables limiting.
    pub fn per_second(requests_per_second: f64) -> Self {
        let min_interval = if requests_per_second > 0.0 {
            Duration::from_secs_f64(1.0 / requests_per_second)
        } else {
            Duration::ZERO
        };
        Self {
            min_interval,
            next_slot: Mutex::new(None),
        }
    }

    /// Blocks until the caller may send.
    pub fn acquire(&self) {
        let wait = {
            let mut slot = self.next_slot.lock().unwrap();
            let now = Instant::now();
            let at = match *slot {
                Some(t) if t > now => t,
                _ => now,
            };
            *slot = Some(at + self.min_interval);
            at.saturating_duration_since(now)
        };
        if !wait.is_zero() {
            std::thread::sleep(wait);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Backoff {
    pub initial: Duration,
    pub factor: f64,
    pub max_retries: u32,
}

impl Default for Backoff {
    fn default() -> Self {
        Self {
            initial: Duration::from_millis(500),
            factor: 2.0,
            max_retries: 4,
        }
    }
}

impl Backoff {
    /// Delay before retry number `attempt` (0-based).
    pub fn delay(&self, attempt: u32) -> Duration {
        self.initial.mul_f64(self.factor.powi(attempt as i32))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
struct FixtureIndexRecord {
    key: String,
    request: String,
    file: String,
}

/// Directory of recorded responses: one `<key>.body` file per request plus
/// an `index.jsonl` manifest mapping keys back to their requests.
#[derive(Debug)]
pub struct FixtureStore {
    dir: PathBuf,
    index: RwLock<BTreeMap<String, FixtureIndexRecord>>,
    write_lock: Mutex<()>,
}

pub fn request_key(request: &str) -> String {
    hex::encode(Sha256::digest(request.as_bytes()))
}

impl FixtureStore {
    /// Opens (or prepares) a store. A missing directory yields an empty store.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, HttpError> {
        let dir = dir.into();
        let mut index = BTreeMap::new();
        let index_path = dir.join(FIXTURE_INDEX);
        if index_path.exists() {
            let text = fs::read_to_string(&index_path).map_err(|e| HttpError::Store {
                path: index_path.clone(),
                message: e.to_string(),
            })?;
            for (n, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let rec: FixtureIndexRecord =
                    serde_json::from_str(line).map_err(|e| HttpError::Store {
                        path: index_path.clone(),
                        message: format!("line {}: {e}", n + 1),
                    })?;
                index.insert(rec.key.clone(), rec);
            }
        }
        Ok(Self {
            dir,
            index: RwLock::new(index),
            write_lock: Mutex::new(()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn len(&self) -> usize {
        self.index.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, request: &str) -> Result<Option<String>, HttpError> {
        let key = request_key(request);
        let file = match self.index.read().unwrap().get(&key) {
            Some(rec) => rec.file.clone(),
            None => return Ok(None),
        };
        let path = self.dir.join(file);
        fs::read_to_string(&path)
            .map(Some)
            .map_err(|e| HttpError::Store {
                path,
                message: e.to_string(),
            })
    }

    pub fn put(&self, request: &str, body: &str) -> Result<(), HttpError> {
        let _guard = self.write_lock.lock().unwrap();
        let key = request_key(request);
        let file = format!("{key}.body");
        let store_err = |path: &Path, e: std::io::Error| HttpError::Store {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        fs::create_dir_all(&self.dir).map_err(|e| store_err(&self.dir, e))?;
        write_atomic(&self.dir.join(&file), body.as_bytes())
            .map_err(|e| store_err(&self.dir, e))?;
        let snapshot = {
            let mut index = self.index.write().unwrap();
            index.insert(
                key.clone(),
                FixtureIndexRecord {
                    key,
                    request: request.to_string(),
                    file,
                },
            );
            index.values().cloned().collect::<Vec<_>>()
        };
        let mut out = String::new();
        for rec in snapshot {
            out.push_str(&serde_json::to_string(&rec).expect("index record serializes"));
            out.push('\n');
        }
        let index_path = self.dir.join(FIXTURE_INDEX);
        write_atomic(&index_path, out.as_bytes()).map_err(|e| store_err(&index_path, e))
    }
}

/// Writes via a temporary sibling file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

#[derive(Debug, Clone)]
pub struct ClientConfig {
    pub mode: ApiMode,
    pub requests_per_second: f64,
    pub backoff: Backoff,
    pub fixture_dir: Option<PathBuf>,
}

impl Default for ClientConfig {
    fn default() -> Self {
        Self {
            mode: ApiMode::Replay,
            requests_per_second: 5.0,
            backoff: Backoff::default(),
            fixture_dir: None,
        }
    }
}

/// Mode-aware, rate-limited client.
pub struct ApiClient {
    mode: ApiMode,
    transport: Option<Arc<dyn Transport>>,
    limiter: RateLimiter,
    backoff: Backoff,
    store: Option<FixtureStore>,
    memory: RwLock<HashMap<String, String>>,
}

impl std::fmt::Debug for ApiClient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ApiClient")
            .field("mode", &self.mode)
            .field("store", &self.store.as_ref().map(|s| s.dir().to_path_buf()))
            .finish()
    }
}

impl ApiClient {
    pub fn new(config: &ClientConfig) -> Result<Self, HttpError> {
        let transport: Option<Arc<dyn Transport>> = match config.mode {
            ApiMode::Replay => None,
            ApiMode::Live | ApiMode::Record => Some(Arc::new(UreqTransport::default())),
        };
        Self::with_transport(config, transport)
    }

    /// Builds a client over an explicit transport (used for tests and
    /// alternative HTTP stacks).
    pub fn with_transport(
        config: &ClientConfig,
        transport: Option<Arc<dyn Transport>>,
    ) -> Result<Self, HttpError> {
        let store = match (&config.fixture_dir, config.mode) {
            (Some(dir), _) => Some(FixtureStore::open(dir.clone())?),
            (None, ApiMode::Live) => None,
            (None, mode) => {
                return Err(HttpError::Store {
                    path: PathBuf::new(),
                    message: format!("{mode:?} mode needs a fixture directory"),
                })
            }
        };
        Ok(Self {
            mode: config.mode,
            transport,
            limiter: RateLimiter::per_second(config.requests_per_second),
            backoff: config.backoff,
            store,
            memory: RwLock::new(HashMap::new()),
        })
    }

    pub fn mode(&self) -> ApiMode {
        self.mode
    }

    pub fn get(&self, url: &str) -> Result<String, HttpError> {
        self.exchange(&format!("GET {url}"), |t| t.get(url))
    }

    pub fn post(&self, url: &str, content_type: &str, body: &str) -> Result<String, HttpError> {
        let request = format!("POST {url}\n{body}");
        self.exchange(&request, |t| t.post(url, content_type, body))
    }

    fn exchange(
        &self,
        request: &str,
        send: impl Fn(&dyn Transport) -> Result<HttpResponse, String>,
    ) -> Result<String, HttpError> {
        if let Some(hit) = self.memory.read().unwrap().get(request) {
            return Ok(hit.clone());
        }
        if let Some(store) = &self.store {
            if let Some(body) = store.get(request)? {
                self.memory
                    .write()
                    .unwrap()
                    .insert(request.to_string(), body.clone());
                return Ok(body);
            }
        }
        if self.mode == ApiMode::Replay {
            return Err(HttpError::FixtureMiss {
                request: request.to_string(),
            });
        }
        let transport = self
            .transport
            .as_deref()
            .ok_or_else(|| HttpError::Unavailable {
                url: request.to_string(),
                reason: "no transport configured".into(),
            })?;
        let body = self.send_with_retries(request, transport, &send)?;
        if self.mode == ApiMode::Record {
            if let Some(store) = &self.store {
                store.put(request, &body)?;
            }
        }
        self.memory
            .write()
            .unwrap()
            .insert(request.to_string(), body.clone());
        Ok(body)
    }

    fn send_with_retries(
        &self,
        request: &str,
        transport: &dyn Transport,
        send: &impl Fn(&dyn Transport) -> Result<HttpResponse, String>,
    ) -> Result<String, HttpError> {
        let mut attempt = 0;
        loop {
            self.limiter.acquire();
            let failure = match send(transport) {
                Ok(resp) if (200..300).contains(&resp.status) => return Ok(resp.body),
                Ok(resp) if resp.status == 429 || resp.status >= 500 => {
                    format!("HTTP {}", resp.status)
                }
                Ok(resp) => {
                    return Err(HttpError::Status {
                        url: request.to_string(),
                        status: resp.status,
                    })
                }
                Err(e) => e,
            };
            if attempt >= self.backoff.max_retries {
                return Err(HttpError::Unavailable {
                    url: request.to_string(),
                    reason: failure,
                });
            }
            log::warn!("{request}: {failure}, retrying");
            std::thread::sleep(self.backoff.delay(attempt));
            attempt += 1;
        }
    }
}
