use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{Agent, AgentSpec, BotPolicy, Decision, GatewayError};
use crate::action::{self, Command};
use crate::observation::Observation;

const RUSHDOWN_RANGE: i32 = 100;
const ZONER_FAR: i32 = 120;
const ZONER_CLOSE: i32 = 60;

/// Commands the random bot picks from. All relative, so a bot behaves the
/// same on either side.
pub const RANDOM_MENU: [&str; 12] = [
    "A",
    "B",
    "C",
    "Forward",
    "Back",
    "Up",
    "Down + B",
    "Down + A",
    "Up + Forward",
    "Up + Back",
    "Down, Forward, A",
    "Forward, Forward, C",
];

/// Per-agent seed: depends on the match seed and the agent id, not on side.
pub fn bot_seed(match_seed: u64, agent_id: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(match_seed.to_le_bytes());
    h.update(agent_id.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

#[derive(Clone, Debug)]
enum Policy {
    Idle,
    Random,
    Rushdown,
    Zoner,
    Cycle(Vec<Command>),
}

/// A deterministic bot: each command is a pure function of the observation
/// and the bot seed.
#[derive(Clone, Debug)]
pub struct ScriptedAgent {
    id: String,
    seed: u64,
    policy: Policy,
}

fn parse_script(id: &str, lines: &[String]) -> Result<Vec<Command>, GatewayError> {
    let mut out = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cmd = action::parse(line)
            .map_err(|source| GatewayError::ScriptCommand { id: id.to_string(), line: i + 1, source })?;
        out.push(cmd);
    }
    if out.is_empty() {
        return Err(GatewayError::InvalidSpec { id: id.to_string(), reason: "script has no commands".into() });
    }
    Ok(out)
}

impl ScriptedAgent {
    pub fn new(spec: &AgentSpec, match_seed: u64) -> Result<ScriptedAgent, GatewayError> {
        let id = spec.id.clone();
        let policy = match spec.bot_policy.as_ref() {
            Some(BotPolicy::Idle) => Policy::Idle,
            Some(BotPolicy::Random) => Policy::Random,
            Some(BotPolicy::Rushdown) => Policy::Rushdown,
            Some(BotPolicy::Zoner) => Policy::Zoner,
            Some(BotPolicy::Script(lines)) => Policy::Cycle(parse_script(&id, lines)?),
            Some(BotPolicy::FixedScript(path)) => {
                let text = std::fs::read_to_string(path).map_err(|source| GatewayError::Script {
                    id: id.clone(),
                    path: path.clone(),
                    source,
                })?;
                let lines: Vec<String> = text.lines().map(str::to_string).collect();
                Policy::Cycle(parse_script(&id, &lines)?)
            }
            None => {
                return Err(GatewayError::InvalidSpec { id, reason: "scripted agents need a bot_policy".into() })
            }
        };
        Ok(ScriptedAgent { seed: bot_seed(match_seed, &spec.id), id, policy })
    }

    fn choose(&self, obs: &Observation) -> String {
        let s = &obs.structured;
        let distance = (s.self_xy.0 - s.opponent_xy.0).abs();
        match &self.policy {
            Policy::Idle => "C".to_string(),
            Policy::Rushdown => {
                if distance > RUSHDOWN_RANGE {
                    "Forward, Forward, C".to_string()
                } else {
                    "A".to_string()
                }
            }
            Policy::Zoner => {
                if distance >= ZONER_FAR {
                    "Down, Forward, A".to_string()
                } else if distance >= ZONER_CLOSE {
                    "Back".to_string()
                } else {
                    "Down + B".to_string()
                }
            }
            Policy::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(u64::from(obs.decision_index));
                RANDOM_MENU[rng.gen_range(0..RANDOM_MENU.len())].to_string()
            }
            Policy::Cycle(commands) => commands[obs.decision_index as usize % commands.len()].normalized.clone(),
        }
    }
}

impl Agent for ScriptedAgent {
    fn id(&self) -> &str {
        &self.id
    }

    fn wants_frames(&self) -> bool {
        false
    }

    fn act(&mut self, obs: &Observation, _system_prompt: &str) -> Decision {
        let reply = self.choose(obs);
        match action::extract_command(&reply) {
            Ok(cmd) => Decision::ok(&self.id, obs.frame, reply, cmd, 0),
            Err(_) => Decision::fallback(&self.id, obs.frame, reply, super::Failure::NoCommand, 0),
        }
    }
}
