//! Match runner, match logs and the round-robin scheduler.

mod runner;
mod schedule;

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::action::ActionPlan;
use crate::engine::{Button, ButtonChord, EngineConfig, EngineError, Player, RoundOutcome, Winner};
use crate::gateway::{AgentSpec, Decision, GatewayError};

pub use runner::{run_match, run_match_in, MatchContext};
pub use schedule::{
    log_file_name, match_seed, run_round_robin, schedule, CellOutcome, MatchSummary, MatrixCell, ScheduledMatch,
    Standing, Tournament, TournamentResult, TOURNAMENT_SCHEMA,
};

pub const LOG_SCHEMA: &str = "lmfa-log/1";
pub const DEFAULT_DECISION_INTERVAL: u32 = 40;

/// How held buttons are counted for heatmaps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Every frame a button is down counts once.
    #[default]
    Frames,
    /// Only frames where a button goes from up to down count.
    Presses,
}

fn default_interval() -> u32 {
    DEFAULT_DECISION_INTERVAL
}

fn default_best_of() -> u32 {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchConfig {
    #[serde(default = "default_width")]
    pub arena_width: i32,
    #[serde(default = "default_offset")]
    pub start_offset: i32,
    #[serde(default = "default_length")]
    pub match_length_frames: u32,
    #[serde(default = "default_interval")]
    pub decision_interval_frames: u32,
    #[serde(default = "default_best_of")]
    pub best_of: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub count_mode: CountMode,
}

fn default_width() -> i32 {
    EngineConfig::default().arena_width
}

fn default_offset() -> i32 {
    EngineConfig::default().start_offset
}

fn default_length() -> u32 {
    EngineConfig::default().match_length_frames
}

impl Default for MatchConfig {
    fn default() -> Self {
        let engine = EngineConfig::default();
        MatchConfig {
            arena_width: engine.arena_width,
            start_offset: engine.start_offset,
            match_length_frames: engine.match_length_frames,
            decision_interval_frames: DEFAULT_DECISION_INTERVAL,
            best_of: 1,
            seed: 0,
            count_mode: CountMode::Frames,
        }
    }
}

impl MatchConfig {
    pub fn engine(&self) -> EngineConfig {
        EngineConfig {
            arena_width: self.arena_width,
            start_offset: self.start_offset,
            match_length_frames: self.match_length_frames,
        }
    }

    pub fn with_seed(self, seed: u64) -> MatchConfig {
        MatchConfig { seed, ..self }
    }

    pub fn validate(&self) -> Result<(), TournamentError> {
        self.engine().validate()?;
        if self.decision_interval_frames == 0 {
            return Err(TournamentError::Config("decision_interval_frames must be at least 1".into()));
        }
        if self.best_of != 1 {
            return Err(TournamentError::Config("best_of: only single-round matches (1) are supported".into()));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TournamentError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Setup(#[from] GatewayError),
    #[error("a tournament needs at least 2 agents, got {0}")]
    TooFewAgents(usize),
    #[error("inconsistent logs: {0}")]
    Integrity(String),
}

/// Per-button totals in `Button::ALL` order. Serialized as a name-keyed map.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ButtonCounts(pub [u64; 8]);

impl ButtonCounts {
    pub fn get(&self, button: Button) -> u64 {
        self.0[button.index()]
    }

    pub fn add_chord(&mut self, chord: ButtonChord) {
        for b in chord.iter() {
            self.0[b.index()] += 1;
        }
    }

    pub fn add(&mut self, other: &ButtonCounts) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a += b;
        }
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Counts one player's column of an input trace.
    pub fn from_trace(trace: &[[u8; 2]], slot: usize, mode: CountMode) -> ButtonCounts {
        let mut counts = ButtonCounts::default();
        let mut previous = ButtonChord::EMPTY;
        for frame in trace {
            let chord = ButtonChord::from_bits(frame[slot]);
            match mode {
                CountMode::Frames => counts.add_chord(chord),
                CountMode::Presses => counts.add_chord(ButtonChord::from_bits(chord.bits() & !previous.bits())),
            }
            previous = chord;
        }
        counts
    }
}

impl Serialize for ButtonCounts {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(8))?;
        for b in Button::ALL {
            map.serialize_entry(b.name(), &self.get(b))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for ButtonCounts {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let map = std::collections::BTreeMap::<String, u64>::deserialize(deserializer)?;
        let mut counts = ButtonCounts::default();
        for (name, value) in map {
            let button = Button::from_name(&name).ok_or_else(|| D::Error::custom(format!("unknown button {name:?}")))?;
            counts.0[button.index()] = value;
        }
        Ok(counts)
    }
}

impl fmt::Display for ButtonCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerCounts {
    #[serde(rename = "P1")]
    pub p1: ButtonCounts,
    #[serde(rename = "P2")]
    pub p2: ButtonCounts,
}

impl PlayerCounts {
    pub fn get(&self, player: Player) -> &ButtonCounts {
        match player {
            Player::P1 => &self.p1,
            Player::P2 => &self.p2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoggedDecision {
    pub tick: u32,
    pub player: Player,
    pub decision: Decision,
    pub plan: ActionPlan,
}

/// Where a match sits in a tournament. `row_agent` precedes `col_agent` in
/// roster order, whichever side each played.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairInfo {
    pub index: usize,
    pub repeat: u32,
    pub row_agent: String,
    pub col_agent: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchLog {
    pub schema: String,
    pub trace_version: String,
    pub prompt_version: String,
    pub config: MatchConfig,
    /// Agent order of the tournament this match belongs to.
    pub roster: Vec<String>,
    pub pair: PairInfo,
    /// P1 then P2.
    pub agents: [AgentSpec; 2],
    pub seed: u64,
    pub decisions: Vec<LoggedDecision>,
    /// Raw chord bits fed on each engine frame, P1 then P2.
    pub input_trace: Vec<[u8; 2]>,
    /// Truncated chain digest after each state, starting with the initial one.
    pub state_digests: Vec<String>,
    pub final_digest: String,
    pub result: RoundOutcome,
    pub button_counts: PlayerCounts,
}

impl MatchLog {
    pub fn agent_id(&self, player: Player) -> &str {
        match player {
            Player::P1 => &self.agents[0].id,
            Player::P2 => &self.agents[1].id,
        }
    }

    pub fn winner_id(&self) -> Option<&str> {
        match self.result.winner {
            Winner::P1 => Some(self.agent_id(Player::P1)),
            Winner::P2 => Some(self.agent_id(Player::P2)),
            Winner::Draw => None,
        }
    }

    /// Side the agent played, if it played.
    pub fn side_of(&self, agent_id: &str) -> Option<Player> {
        [Player::P1, Player::P2].into_iter().find(|p| self.agent_id(*p) == agent_id)
    }

    pub fn file_name(&self) -> String {
        log_file_name(self.pair.index, self.pair.repeat, self.agent_id(Player::P1), self.agent_id(Player::P2))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("match logs serialize")
    }
}

#[cfg(test)]
mod tests;
