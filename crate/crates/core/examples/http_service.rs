//! Starts the HTTP API on a free loopback port, posts a proof request to it
//! and prints the JSON reply.
//!
//!     cargo run --example http_service

use std::io::{Read, Write};
use std::net::TcpStream;

use gddx::service::{router, AppState};

fn main() -> std::io::Result<()> {
    let rt = tokio::runtime::Runtime::new()?;
    let listener = rt.block_on(tokio::net::TcpListener::bind("127.0.0.1:0"))?;
    let addr = listener.local_addr()?;
    rt.spawn(async move { axum::serve(listener, router(AppState::default(), None)).await });

    let body = serde_json::json!({
        "gcs": include_str!("../fixtures/midline.gcs"),
        "lang": "de",
        "mode": "flat",
    })
    .to_string();
    let mut stream = TcpStream::connect(addr)?;
    write!(
        stream,
        "POST /api/prove HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )?;
    let mut reply = String::new();
    stream.read_to_string(&mut reply)?;
    let json = reply.split_once("\r\n\r\n").map_or("", |(_, b)| b);
    let value: serde_json::Value = serde_json::from_str(json).expect("json reply");
    println!("{}", serde_json::to_string_pretty(&value).unwrap());
    Ok(())
}
