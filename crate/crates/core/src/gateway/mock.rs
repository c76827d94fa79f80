//! A local server speaking the agent protocol, for tests and dry runs.

use std::net::SocketAddr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::Duration;

use serde_json::Value;

#[derive(Clone, Debug)]
pub struct MockBehavior {
    /// Replies handed out in order, cycling.
    pub replies: Vec<String>,
    /// Delay before answering each request.
    pub delay_ms: u64,
    /// HTTP status to answer with.
    pub status: u16,
    /// Sent verbatim instead of `{"reply": ...}` when set.
    pub raw_body: Option<String>,
}

impl Default for MockBehavior {
    fn default() -> Self {
        MockBehavior { replies: vec!["C".into()], delay_ms: 0, status: 200, raw_body: None }
    }
}

impl MockBehavior {
    pub fn replying(replies: &[&str]) -> Self {
        MockBehavior { replies: replies.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }
}

pub struct MockServer {
    addr: SocketAddr,
    server: Arc<tiny_http::Server>,
    handle: Option<JoinHandle<()>>,
    requests: Arc<Mutex<Vec<Value>>>,
}

impl MockServer {
    pub fn start(behavior: MockBehavior) -> std::io::Result<MockServer> {
        MockServer::bind("127.0.0.1:0", behavior)
    }

    pub fn bind(addr: &str, behavior: MockBehavior) -> std::io::Result<MockServer> {
        let server = tiny_http::Server::http(addr).map_err(std::io::Error::other)?;
        let addr = server
            .server_addr()
            .to_ip()
            .ok_or_else(|| std::io::Error::other("mock server is not on an IP socket"))?;
        let server = Arc::new(server);
        let requests = Arc::new(Mutex::new(Vec::new()));
        let counter = Arc::new(AtomicUsize::new(0));
        let behavior = Arc::new(behavior);
        let handle = {
            let server = Arc::clone(&server);
            let requests = Arc::clone(&requests);
            std::thread::spawn(move || {
                for request in server.incoming_requests() {
                    let n = counter.fetch_add(1, Ordering::SeqCst);
                    let behavior = Arc::clone(&behavior);
                    let requests = Arc::clone(&requests);
                    std::thread::spawn(move || answer(request, n, &behavior, &requests));
                }
            })
        };
        Ok(MockServer { addr, server, handle: Some(handle), requests })
    }

    pub fn url(&self) -> String {
        format!("http://{}/", self.addr)
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// Request bodies received so far, in arrival order.
    pub fn requests(&self) -> Vec<Value> {
        self.requests.lock().expect("request log lock").clone()
    }

    /// Blocks until the process is killed.
    pub fn wait(mut self) {
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.server.unblock();
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

fn answer(mut request: tiny_http::Request, n: usize, behavior: &MockBehavior, log: &Mutex<Vec<Value>>) {
    let mut body = String::new();
    let _ = request.as_reader().read_to_string(&mut body);
    let parsed = serde_json::from_str(&body).unwrap_or(Value::String(body));
    log.lock().expect("request log lock").push(parsed);
    if behavior.delay_ms > 0 {
        std::thread::sleep(Duration::from_millis(behavior.delay_ms));
    }
    let text = match &behavior.raw_body {
        Some(raw) => raw.clone(),
        None => {
            let reply = if behavior.replies.is_empty() {
                String::new()
            } else {
                behavior.replies[n % behavior.replies.len()].clone()
            };
            serde_json::json!({ "reply": reply }).to_string()
        }
    };
    let header = tiny_http::Header::from_bytes("Content-Type", "application/json").expect("static header");
    let response = tiny_http::Response::from_string(text).with_status_code(behavior.status).with_header(header);
    let _ = request.respond(response);
}
