use std::time::{Duration, Instant};

use serde_json::{json, Value};

use super::{Adapter, Agent, AgentSpec, Decision, Failure, PROTOCOL, REPLY_FORMAT};
use crate::action;
use crate::observation::{decode_base64, encode_base64_bytes, FrameImage, Observation};

/// `Header-Name: value` added to every request; a bare value is sent as
/// `Authorization`.
pub const AUTH_HEADER_ENV: &str = "LMFA_AUTH_HEADER";

enum CallError {
    Timeout,
    Transport,
    BadBody,
}

pub struct RemoteAgent {
    id: String,
    endpoint: String,
    model_name: String,
    max_retries: u32,
    adapter: Adapter,
    auth: Option<(String, String)>,
    http: ureq::Agent,
}

fn auth_from_env() -> Option<(String, String)> {
    let raw = std::env::var(AUTH_HEADER_ENV).ok()?;
    let raw = raw.trim();
    if raw.is_empty() {
        return None;
    }
    match raw.split_once(':') {
        Some((name, value)) if !name.trim().is_empty() && !name.contains(' ') => {
            Some((name.trim().to_string(), value.trim().to_string()))
        }
        _ => Some(("Authorization".to_string(), raw.to_string())),
    }
}

fn classify(err: ureq::Error) -> CallError {
    match err {
        ureq::Error::Timeout(_) => CallError::Timeout,
        ureq::Error::Io(e) if matches!(e.kind(), std::io::ErrorKind::TimedOut | std::io::ErrorKind::WouldBlock) => {
            CallError::Timeout
        }
        _ => CallError::Transport,
    }
}

fn png_data_url(frame_b64: &str) -> Option<String> {
    let image = FrameImage::from_ppm(&decode_base64(frame_b64)?)?;
    Some(format!("data:image/png;base64,{}", encode_base64_bytes(&image.to_png())))
}

impl RemoteAgent {
    pub fn new(spec: &AgentSpec) -> RemoteAgent {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_millis(spec.timeout_ms)))
            .http_status_as_error(false)
            .build();
        RemoteAgent {
            id: spec.id.clone(),
            endpoint: spec.endpoint.clone().unwrap_or_default(),
            model_name: spec.model_name.clone().unwrap_or_default(),
            max_retries: spec.max_retries,
            adapter: spec.adapter,
            auth: auth_from_env(),
            http: config.into(),
        }
    }

    fn request_body(&self, obs: &Observation, system_prompt: &str) -> Value {
        match self.adapter {
            Adapter::Lmfa => json!({
                "protocol": PROTOCOL,
                "system_prompt": system_prompt,
                "frames_b64": obs.frames,
                "state_text": obs.state_text,
                "reply_format": REPLY_FORMAT,
            }),
            Adapter::ChatCompletions => {
                let mut parts = vec![json!({"type": "text", "text": obs.state_text})];
                for url in obs.frames.iter().filter_map(|f| png_data_url(f)) {
                    parts.push(json!({"type": "image_url", "image_url": {"url": url}}));
                }
                json!({
                    "model": self.model_name,
                    "messages": [
                        {"role": "system", "content": system_prompt},
                        {"role": "user", "content": parts},
                    ],
                })
            }
        }
    }

    fn reply_from(&self, body: &str) -> Option<String> {
        let value: Value = serde_json::from_str(body).ok()?;
        let reply = match self.adapter {
            Adapter::Lmfa => value.get("reply")?,
            Adapter::ChatCompletions => value.pointer("/choices/0/message/content")?,
        };
        reply.as_str().map(str::to_string)
    }

    fn call_once(&self, body: &[u8]) -> Result<String, CallError> {
        let mut request = self.http.post(&self.endpoint).header("Content-Type", "application/json");
        if let Some((name, value)) = &self.auth {
            request = request.header(name.as_str(), value.as_str());
        }
        let mut response = request.send(body).map_err(classify)?;
        if response.status().as_u16() != 200 {
            return Err(CallError::Transport);
        }
        let text = response.body_mut().read_to_string().map_err(classify)?;
        self.reply_from(&text).ok_or(CallError::BadBody)
    }
}

impl Agent for RemoteAgent {
    fn id(&self) -> &str {
        &self.id
    }

    fn wants_frames(&self) -> bool {
        true
    }

    fn act(&mut self, obs: &Observation, system_prompt: &str) -> Decision {
        let body = serde_json::to_vec(&self.request_body(obs, system_prompt)).expect("request body serializes");
        let start = Instant::now();
        let mut attempt = 0;
        let result = loop {
            match self.call_once(&body) {
                Err(CallError::Timeout | CallError::Transport) if attempt < self.max_retries => attempt += 1,
                other => break other,
            }
        };
        let latency = start.elapsed().as_millis() as u64;
        match result {
            Ok(reply) => match action::extract_command(&reply) {
                Ok(cmd) => Decision::ok(&self.id, obs.frame, reply, cmd, latency),
                Err(_) => Decision::fallback(&self.id, obs.frame, reply, Failure::NoCommand, latency),
            },
            Err(CallError::Timeout) => Decision::fallback(&self.id, obs.frame, String::new(), Failure::Timeout, latency),
            Err(CallError::Transport) => {
                Decision::fallback(&self.id, obs.frame, String::new(), Failure::Transport, latency)
            }
            Err(CallError::BadBody) => {
                Decision::fallback(&self.id, obs.frame, String::new(), Failure::ParseError, latency)
            }
        }
    }
}
