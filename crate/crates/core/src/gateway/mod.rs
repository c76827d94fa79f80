//! Agents: remote model endpoints behind a small JSON protocol, and
//! deterministic scripted bots.

mod bots;
mod prompt;
#[cfg(feature = "remote")]
pub mod mock;
#[cfg(feature = "remote")]
mod remote;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::action::{self, Command};
use crate::observation::Observation;

pub use bots::{bot_seed, ScriptedAgent};
pub use prompt::{build_system_prompt, PromptConfig, PROMPT_VERSION};
#[cfg(feature = "remote")]
pub use remote::{RemoteAgent, AUTH_HEADER_ENV};

pub const PROTOCOL: &str = "lmfa/1";
pub const REPLY_FORMAT: &str = "single_command_last_line";
/// Executed whenever an agent fails to produce a usable command.
pub const FALLBACK_COMMAND: &str = "C";
pub const DEFAULT_TIMEOUT_MS: u64 = 30_000;
pub const DEFAULT_MAX_RETRIES: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    Remote,
    Scripted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BotPolicy {
    /// Blocks every decision.
    Idle,
    /// Uniform over a fixed menu of relative commands.
    Random,
    /// Flying kick from range, punches up close.
    Rushdown,
    /// Fireballs from range, retreats or pokes low up close.
    Zoner,
    /// Commands read from a file, one per line, cycled.
    FixedScript(PathBuf),
    /// Inline command list, cycled.
    Script(Vec<String>),
}

/// Wire shape used for remote agents.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Adapter {
    #[default]
    Lmfa,
    ChatCompletions,
}

impl Adapter {
    fn is_default(&self) -> bool {
        *self == Adapter::Lmfa
    }
}

fn default_timeout() -> u64 {
    DEFAULT_TIMEOUT_MS
}

fn default_retries() -> u32 {
    DEFAULT_MAX_RETRIES
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub id: String,
    pub kind: AgentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoint: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bot_policy: Option<BotPolicy>,
    #[serde(default = "default_timeout")]
    pub timeout_ms: u64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    #[serde(default, skip_serializing_if = "Adapter::is_default")]
    pub adapter: Adapter,
}

impl AgentSpec {
    pub fn scripted(id: &str, policy: BotPolicy) -> AgentSpec {
        AgentSpec {
            id: id.to_string(),
            kind: AgentKind::Scripted,
            endpoint: None,
            model_name: None,
            bot_policy: Some(policy),
            timeout_ms: DEFAULT_TIMEOUT_MS,
            max_retries: DEFAULT_MAX_RETRIES,
            adapter: Adapter::Lmfa,
        }
    }

    pub fn remote(id: &str, endpoint: &str, model_name: &str) -> AgentSpec {
        AgentSpec {
            id: id.to_string(),
            kind: AgentKind::Remote,
            endpoint: Some(endpoint.to_string()),
            model_name: Some(model_name.to_string()),
            bot_policy: None,
            timeout_ms: DEFAULT_TIMEOUT_MS,
            max_retries: DEFAULT_MAX_RETRIES,
            adapter: Adapter::Lmfa,
        }
    }

    pub fn validate(&self) -> Result<(), GatewayError> {
        let invalid = |reason: &str| Err(GatewayError::InvalidSpec { id: self.id.clone(), reason: reason.to_string() });
        let id_ok = !self.id.is_empty()
            && self.id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
        if !id_ok {
            return invalid("id must be non-empty and use only letters, digits, '-', '_' or '.'");
        }
        if self.timeout_ms == 0 {
            return invalid("timeout_ms must be at least 1");
        }
        match self.kind {
            AgentKind::Remote => {
                if self.endpoint.as_deref().unwrap_or("").is_empty() {
                    return invalid("remote agents need an endpoint");
                }
                if self.model_name.as_deref().unwrap_or("").is_empty() {
                    return invalid("remote agents need a model_name");
                }
                if self.bot_policy.is_some() {
                    return invalid("bot_policy is only valid for scripted agents");
                }
            }
            AgentKind::Scripted => {
                if self.bot_policy.is_none() {
                    return invalid("scripted agents need a bot_policy");
                }
                if self.endpoint.is_some() || self.model_name.is_some() {
                    return invalid("endpoint and model_name are only valid for remote agents");
                }
            }
        }
        Ok(())
    }

    /// Makes a relative script path relative to `base`.
    pub fn with_base_dir(mut self, base: &Path) -> AgentSpec {
        if let Some(BotPolicy::FixedScript(path)) = &mut self.bot_policy {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
        self
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GatewayError {
    #[error("agent {id:?}: {reason}")]
    InvalidSpec { id: String, reason: String },
    #[error("agent {id:?}: cannot read script {path}: {source}")]
    Script { id: String, path: PathBuf, source: std::io::Error },
    #[error("agent {id:?}: script line {line}: {source}")]
    ScriptCommand { id: String, line: usize, source: action::ParseError },
    #[error("agent {id:?}: remote agents are not available in this build")]
    RemoteUnavailable { id: String },
    #[error("duplicate agent id {0:?}")]
    DuplicateId(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Failure {
    Timeout,
    Transport,
    NoCommand,
    ParseError,
}

/// One agent's answer at one decision tick.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub agent_id: String,
    pub frame_issued: u32,
    pub raw_reply: String,
    /// The command actually executed, normalized.
    pub command: Command,
    pub latency_ms: u64,
    /// Set iff `command` is the fallback.
    pub failure: Option<Failure>,
}

impl Decision {
    pub fn ok(agent_id: &str, frame: u32, raw_reply: String, command: Command, latency_ms: u64) -> Decision {
        Decision { agent_id: agent_id.to_string(), frame_issued: frame, raw_reply, command, latency_ms, failure: None }
    }

    pub fn fallback(agent_id: &str, frame: u32, raw_reply: String, failure: Failure, latency_ms: u64) -> Decision {
        Decision {
            agent_id: agent_id.to_string(),
            frame_issued: frame,
            raw_reply,
            command: fallback_command(),
            latency_ms,
            failure: Some(failure),
        }
    }

    pub fn is_fallback(&self) -> bool {
        self.failure.is_some()
    }
}

pub fn fallback_command() -> Command {
    action::parse(FALLBACK_COMMAND).expect("fallback command parses")
}

pub trait Agent: Send {
    fn id(&self) -> &str;
    /// Whether observations for this agent must carry rendered frames.
    fn wants_frames(&self) -> bool;
    /// Never fails: errors become fallback decisions.
    fn act(&mut self, obs: &Observation, system_prompt: &str) -> Decision;
}

/// Builds a live agent. `match_seed` feeds seeded bots.
pub fn resolve_agent(spec: &AgentSpec, match_seed: u64) -> Result<Box<dyn Agent>, GatewayError> {
    spec.validate()?;
    match spec.kind {
        AgentKind::Scripted => Ok(Box::new(ScriptedAgent::new(spec, match_seed)?)),
        #[cfg(feature = "remote")]
        AgentKind::Remote => Ok(Box::new(RemoteAgent::new(spec))),
        #[cfg(not(feature = "remote"))]
        AgentKind::Remote => Err(GatewayError::RemoteUnavailable { id: spec.id.clone() }),
    }
}

/// Checks ids are unique and every spec is valid.
pub fn validate_roster(specs: &[AgentSpec]) -> Result<(), GatewayError> {
    let mut seen = std::collections::BTreeSet::new();
    for spec in specs {
        spec.validate()?;
        if !seen.insert(spec.id.as_str()) {
            return Err(GatewayError::DuplicateId(spec.id.clone()));
        }
    }
    Ok(())
}
