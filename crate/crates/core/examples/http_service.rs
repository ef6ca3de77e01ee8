//! Starts the HTTP service on an ephemeral port, makes a few requests and
//! shuts down.
//!
//! cargo run --example http_service

use std::collections::HashMap;
use std::sync::Arc;

use std::io::{Read, Write};

use tokio::net::TcpListener;

use feedbacklog::corpus;
use feedbacklog::registry::Registry;
use feedbacklog::service::{router, ApiState, TokenMap};

fn get(addr: std::net::SocketAddr, path: &str, token: &str) -> std::io::Result<String> {
    let mut stream = std::net::TcpStream::connect(addr)?;
    let req = format!("GET {path} HTTP/1.1\r\nHost: {addr}\r\nAuthorization: Bearer {token}\r\nConnection: close\r\n\r\n");
    stream.write_all(req.as_bytes())?;
    let mut body = String::new();
    stream.read_to_string(&mut body)?;
    Ok(body)
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let registry = Registry::open(dir.path())?;
    for log in corpus::all() {
        registry.put(&log, &log.owner.id)?;
    }
    let owner = corpus::image_recognition().owner.id;
    let tokens = TokenMap(HashMap::from([("demo-token".to_string(), owner)]));
    let app = router(Arc::new(ApiState { registry, tokens }));

    let listener = TcpListener::bind("127.0.0.1:0").await?;
    let addr = listener.local_addr()?;
    let server = tokio::spawn(async move { axum::serve(listener, app).await });

    for path in ["/healthz", "/logs", "/logs/image-recognition/validate", "/search?q=robustness"] {
        let response = tokio::task::spawn_blocking(move || get(addr, path, "demo-token")).await??;
        let (head, body) = response.split_once("\r\n\r\n").unwrap_or((&response, ""));
        println!("GET {path} -> {}", head.lines().next().unwrap_or(""));
        println!("  {}", body.chars().take(160).collect::<String>());
    }
    server.abort();
    Ok(())
}
