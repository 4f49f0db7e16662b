use std::path::PathBuf;
use std::sync::Arc;

use serde_json::{json, Value};

use super::transcript::{request_hash, Transcript, TranscriptEntry};
use super::AgentError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Live,
    Replay,
    Record,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_lowercase().as_str() {
            "live" => Some(Mode::Live),
            "replay" => Some(Mode::Replay),
            "record" => Some(Mode::Record),
            _ => None,
        }
    }
}

/// Moves one request body to the endpoint and returns the response body.
pub trait Transport: Send + Sync {
    fn send(&self, endpoint: &str, api_key: Option<&str>, body: &Value) -> Result<Value, AgentError>;

    /// Whether sending opens sockets. `NO_NETWORK=1` only overrides
    /// transports that do.
    fn uses_network(&self) -> bool {
        true
    }
}

/// JSON over HTTP POST with a bearer token.
#[derive(Debug, Clone, Copy, Default)]
pub struct HttpTransport;

impl Transport for HttpTransport {
    fn send(&self, endpoint: &str, api_key: Option<&str>, body: &Value) -> Result<Value, AgentError> {
        let mut req = ureq::post(endpoint).header("Content-Type", "application/json");
        if let Some(key) = api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req.send_json(body).map_err(|e| AgentError::Transport(e.to_string()))?;
        resp.body_mut().read_json::<Value>().map_err(|e| AgentError::Transport(e.to_string()))
    }
}

/// True when `NO_NETWORK=1` is set.
pub fn network_disabled() -> bool {
    std::env::var("NO_NETWORK").is_ok_and(|v| v.trim() == "1")
}

const LIVE_ATTEMPTS: u32 = 3;

/// A chat-completion endpoint with transcript recording and replay.
#[derive(Clone)]
pub struct AgentClient {
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the API key.
    pub api_key_env: String,
    pub mode: Mode,
    pub transcript_path: Option<PathBuf>,
    transport: Arc<dyn Transport>,
}

impl std::fmt::Debug for AgentClient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AgentClient")
            .field("endpoint", &self.endpoint)
            .field("model", &self.model)
            .field("api_key_env", &self.api_key_env)
            .field("mode", &self.mode)
            .field("transcript_path", &self.transcript_path)
            .finish_non_exhaustive()
    }
}

impl AgentClient {
    pub fn new(
        endpoint: impl Into<String>,
        model: impl Into<String>,
        api_key_env: impl Into<String>,
        mode: Mode,
        transcript_path: Option<PathBuf>,
    ) -> Self {
        AgentClient {
            endpoint: endpoint.into(),
            model: model.into(),
            api_key_env: api_key_env.into(),
            mode,
            transcript_path,
            transport: Arc::new(HttpTransport),
        }
    }

    /// Replay-only client over a transcript file. The model name is part of
    /// every request, so it must match the one used when recording.
    pub fn replay(model: impl Into<String>, transcript_path: impl Into<PathBuf>) -> Self {
        AgentClient::new("", model, "", Mode::Replay, Some(transcript_path.into()))
    }

    pub fn with_transport(mut self, transport: Arc<dyn Transport>) -> Self {
        self.transport = transport;
        self
    }

    /// The configured mode, downgraded to replay when the network is
    /// disabled and the transport would use it.
    pub fn effective_mode(&self) -> Mode {
        if self.mode != Mode::Replay && network_disabled() && self.transport.uses_network() {
            Mode::Replay
        } else {
            self.mode
        }
    }

    /// A chat request body with a system and a user message; `images` are
    /// PNG bytes attached to the user message as data URLs.
    pub fn chat_body(&self, system: &str, user: &str, images: &[Vec<u8>]) -> Value {
        use base64::Engine;
        let content = if images.is_empty() {
            Value::String(user.to_string())
        } else {
            let mut parts = vec![json!({"type": "text", "text": user})];
            for png in images {
                let url = format!("data:image/png;base64,{}", base64::engine::general_purpose::STANDARD.encode(png));
                parts.push(json!({"type": "image_url", "image_url": {"url": url}}));
            }
            Value::Array(parts)
        };
        json!({
            "model": self.model,
            "temperature": 0,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": content},
            ],
        })
    }

    fn transcript_path(&self) -> Result<&PathBuf, AgentError> {
        self.transcript_path.as_ref().ok_or_else(|| AgentError::Transcript("no transcript path configured".into()))
    }

    /// Sends (or replays) a request and returns the raw response body.
    pub fn exchange(&self, body: &Value) -> Result<Value, AgentError> {
        let hash = request_hash(body);
        match self.effective_mode() {
            Mode::Replay => {
                let t = Transcript::load(self.transcript_path()?)?;
                t.find(&hash).map(|e| e.response.clone()).ok_or(AgentError::ReplayMiss(hash))
            }
            mode => {
                let key = if self.api_key_env.is_empty() {
                    None
                } else if self.transport.uses_network() {
                    Some(std::env::var(&self.api_key_env).map_err(|_| AgentError::MissingApiKey(self.api_key_env.clone()))?)
                } else {
                    std::env::var(&self.api_key_env).ok()
                };
                let mut last = None;
                let mut response = None;
                for attempt in 1..=LIVE_ATTEMPTS {
                    match self.transport.send(&self.endpoint, key.as_deref(), body) {
                        Ok(v) => {
                            response = Some(v);
                            break;
                        }
                        Err(e) => {
                            log::warn!("agent request attempt {attempt}/{LIVE_ATTEMPTS} failed: {e}");
                            last = Some(e);
                        }
                    }
                }
                let response = match response {
                    Some(r) => r,
                    None => return Err(last.expect("at least one attempt")),
                };
                if mode == Mode::Record {
                    let entry = TranscriptEntry { request_hash: hash, request: body.clone(), response: response.clone() };
                    Transcript::append(self.transcript_path()?, &entry)?;
                }
                Ok(response)
            }
        }
    }

    /// Text content of the first choice of a chat-completion response.
    pub fn complete(&self, body: &Value) -> Result<String, AgentError> {
        let resp = self.exchange(body)?;
        resp.pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| AgentError::BadResponse(format!("no choices[0].message.content in {resp}")))
    }
}

/// Wraps `content` in the minimal chat-completion response shape.
pub fn chat_response(content: &str) -> Value {
    json!({"choices": [{"index": 0, "message": {"role": "assistant", "content": content}}]})
}
