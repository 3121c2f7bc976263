//! The external provider protocol, exercised against a throwaway python
//! process (stdio) and a hand-rolled HTTP server.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;

use encyc::embedder::{
    EmbedError, Embedder, EmbeddingStore, ExternalEmbedder, ExternalRequest, ExternalResponse,
    FileEmbedder,
};

/// Fake provider: 4-dim vector from simple text statistics, normalized.
/// Lines that are not JSON get an error response and the stream continues.
const PROVIDER: &str = r#"
import sys, json, math
for n, line in enumerate(sys.stdin, 1):
    try:
        req = json.loads(line)
    except Exception as e:
        print(json.dumps({"id": None, "error": str(e), "line": n}), flush=True)
        continue
    t = req["text"]
    v = [len(t), sum(map(ord, t)) % 97 + 1, t.count(" ") + 1, 1.0]
    norm = math.sqrt(sum(x * x for x in v))
    print(json.dumps({"id": req["id"], "vector": [x / norm for x in v], "dim": 4}), flush=True)
"#;

fn expected(text: &str) -> Vec<f32> {
    let v = [
        text.chars().count() as f64,
        (text.chars().map(|c| c as u64).sum::<u64>() % 97 + 1) as f64,
        (text.matches(' ').count() + 1) as f64,
        1.0,
    ];
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| (x / norm) as f32).collect()
}

fn python_provider() -> Option<(tempfile::TempDir, Vec<String>)> {
    let ok = std::process::Command::new("python3")
        .arg("--version")
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false);
    if !ok {
        eprintln!("python3 not available; skipping stdio provider test");
        return None;
    }
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("provider.py");
    std::fs::write(&script, PROVIDER).unwrap();
    let argv = vec!["python3".to_string(), script.display().to_string()];
    Some((dir, argv))
}

fn close(a: &[f32], b: &[f32]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-6)
}

#[test]
fn stdio_provider_round_trip() {
    let Some((_dir, argv)) = python_provider() else {
        return;
    };
    let e = ExternalEmbedder::spawn(&argv, 4)
        .unwrap()
        .with_batch_size(3);
    let texts = [
        "Kalmar, stad",
        "Åker, socken i Jönköpings län",
        "x",
        "Kalmar, stad",
        "Öved",
    ];
    let vecs = e.embed(&texts).unwrap();
    assert_eq!(vecs.len(), texts.len());
    for (t, v) in texts.iter().zip(&vecs) {
        assert!(close(v, &expected(t)), "{t}: {v:?}");
    }
    assert_eq!(vecs[0], vecs[3]);
    // The process stays up between calls.
    assert!(close(&e.embed_one("y z").unwrap(), &expected("y z")));
}

#[test]
fn stdio_provider_dim_is_checked() {
    let Some((_dir, argv)) = python_provider() else {
        return;
    };
    let e = ExternalEmbedder::spawn(&argv, 8).unwrap();
    assert!(matches!(
        e.embed(&["abc"]),
        Err(EmbedError::DimMismatch {
            expected: 8,
            got: 4
        })
    ));
}

#[test]
fn missing_program_is_unavailable() {
    let argv = vec!["/nonexistent/embed-provider".to_string()];
    assert!(matches!(
        ExternalEmbedder::spawn(&argv, 4),
        Err(EmbedError::ProviderUnavailable(_))
    ));
}

#[test]
fn provider_that_exits_is_unavailable() {
    let argv = vec!["true".to_string()];
    let e = ExternalEmbedder::spawn(&argv, 4).unwrap();
    assert!(matches!(
        e.embed(&["abc"]),
        Err(EmbedError::ProviderUnavailable(_))
    ));
}

/// Serves `connections` HTTP requests. Responses are built by `answer` from
/// the request lines; every request body seen is recorded.
fn serve(
    connections: usize,
    answer: fn(&[ExternalRequest]) -> String,
) -> (String, Arc<Mutex<Vec<String>>>, thread::JoinHandle<()>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/embed", listener.local_addr().unwrap());
    let seen = Arc::new(Mutex::new(Vec::new()));
    let seen2 = seen.clone();
    let handle = thread::spawn(move || {
        for stream in listener.incoming().take(connections) {
            let mut stream = stream.unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut len = 0;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                if line == "\r\n" || line.is_empty() {
                    break;
                }
                if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    len = v.trim().parse().unwrap();
                }
            }
            let mut body = vec![0; len];
            reader.read_exact(&mut body).unwrap();
            let body = String::from_utf8(body).unwrap();
            let reqs: Vec<ExternalRequest> = body
                .lines()
                .map(|l| serde_json::from_str(l).unwrap())
                .collect();
            seen2.lock().unwrap().push(body);
            let out = answer(&reqs);
            write!(
                stream,
                "HTTP/1.1 200 OK\r\nContent-Type: application/x-ndjson\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
                out.len(),
                out
            )
            .unwrap();
        }
    });
    (url, seen, handle)
}

fn answer_reversed(reqs: &[ExternalRequest]) -> String {
    // Answer out of order to check matching by id.
    reqs.iter()
        .rev()
        .map(|r| {
            let resp = ExternalResponse {
                id: Some(r.id.clone()),
                vector: Some(expected(&r.text)),
                dim: Some(4),
                error: None,
                line: None,
            };
            serde_json::to_string(&resp).unwrap() + "\n"
        })
        .collect()
}

#[test]
fn http_provider_round_trip() {
    let (url, seen, handle) = serve(2, answer_reversed);
    let e = ExternalEmbedder::http(&url, 4).with_batch_size(2);
    let texts = ["Bajasid", "Nervtumör", "Åsenhöga"];
    let vecs = e.embed(&texts).unwrap();
    handle.join().unwrap();
    for (t, v) in texts.iter().zip(&vecs) {
        assert!(close(v, &expected(t)), "{t}");
    }
    let bodies = seen.lock().unwrap();
    assert_eq!(bodies.len(), 2);
    let first: Vec<ExternalRequest> = bodies[0]
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(first.len(), 2);
    assert_eq!(first[0].text, "Bajasid");
}

fn answer_error(_: &[ExternalRequest]) -> String {
    "{\"id\":null,\"error\":\"bad json\",\"line\":1}\n".to_string()
}

#[test]
fn http_provider_error_line() {
    let (url, _, handle) = serve(1, answer_error);
    let e = ExternalEmbedder::http(&url, 4);
    let err = e.embed(&["x"]).unwrap_err();
    handle.join().unwrap();
    match err {
        EmbedError::Protocol(msg) => assert!(msg.contains("line 1"), "{msg}"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn http_provider_down() {
    // Bind and drop to get a port nobody listens on.
    let port = TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let e = ExternalEmbedder::http(&format!("http://127.0.0.1:{port}/embed"), 4);
    assert!(matches!(
        e.embed(&["x"]),
        Err(EmbedError::ProviderUnavailable(_))
    ));
}

#[test]
fn precomputed_store_serves_provider_vectors() {
    // What a precompute run would write: the provider's vectors keyed by
    // text hash, then read back through the file provider.
    let Some((_dir, argv)) = python_provider() else {
        return;
    };
    let ext = ExternalEmbedder::spawn(&argv, 4).unwrap();
    let texts: Vec<String> = (0..10).map(|i| format!("text number {i}")).collect();
    let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    let mut store = EmbeddingStore::new(4, ext.provider_tag());
    store.fill_from(&ext, &refs).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("vectors.emb");
    store.write(&path).unwrap();

    let file = FileEmbedder::open(&path).unwrap();
    assert_eq!(file.embed(&refs).unwrap(), ext.embed(&refs).unwrap());
}
