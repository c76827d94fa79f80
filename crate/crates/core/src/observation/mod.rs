//! What an agent sees: a short window of annotated frames plus the game
//! state as structured fields and as fixed-template text.

pub mod render;

use std::collections::VecDeque;

use base64::Engine as _;
use serde::{Deserialize, Serialize};

use crate::engine::{Facing, GameState, Player, FRAMES_PER_SECOND};
use crate::units::HealthFraction;

pub use render::{annotate, render, FrameImage};

/// Frames per observation window.
pub const WINDOW_FRAMES: u32 = 10;
/// Engine frames between sampled frames.
pub const SAMPLE_INTERVAL: u32 = 4;
pub const HISTORY_CAPACITY: usize = 64;
pub const TEMPLATE_VERSION: &str = "lmfa-state-text/1";
const NO_ACTIONS: &str = "none";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ObservationError {
    #[error("image is already annotated")]
    AlreadyAnnotated,
    #[error("malformed state text: {0}")]
    MalformedText(String),
}

/// Ring buffer of rendered frames keyed by engine frame index.
#[derive(Clone, Debug)]
pub struct FrameHistory {
    frames: VecDeque<(u32, FrameImage)>,
    capacity: usize,
}

impl Default for FrameHistory {
    fn default() -> Self {
        FrameHistory::with_capacity(HISTORY_CAPACITY)
    }
}

impl FrameHistory {
    pub fn with_capacity(capacity: usize) -> Self {
        FrameHistory { frames: VecDeque::with_capacity(capacity), capacity: capacity.max(1) }
    }

    pub fn push(&mut self, frame: u32, image: FrameImage) {
        if self.frames.len() == self.capacity {
            self.frames.pop_front();
        }
        self.frames.push_back((frame, image));
    }

    pub fn get(&self, frame: u32) -> Option<&FrameImage> {
        self.frames.iter().rev().find(|(f, _)| *f == frame).map(|(_, img)| img)
    }

    pub fn clear(&mut self) {
        self.frames.clear();
    }
}

/// Engine frames sampled for a window ending at `now`, oldest first:
/// `now - 36, now - 32, ..., now`, clipped at the start of the round.
pub fn sample_indices(now: u32) -> Vec<u32> {
    let span = (WINDOW_FRAMES - 1) * SAMPLE_INTERVAL;
    let first = now.saturating_sub(span);
    let first = first + (now - first) % SAMPLE_INTERVAL;
    (first..=now).step_by(SAMPLE_INTERVAL as usize).collect()
}

/// True if frame `frame` will be part of the window sampled at `tick`.
pub fn is_sampled_for(frame: u32, tick: u32) -> bool {
    frame <= tick
        && (tick - frame).is_multiple_of(SAMPLE_INTERVAL)
        && tick - frame <= (WINDOW_FRAMES - 1) * SAMPLE_INTERVAL
}

pub fn sample_window(history: &FrameHistory, now: u32) -> Vec<FrameImage> {
    sample_indices(now).into_iter().filter_map(|f| history.get(f).cloned()).collect()
}

/// Standard base64 (no wrapping) of the image's P6 bytes.
pub fn encode_base64(image: &FrameImage) -> String {
    encode_base64_bytes(&image.to_ppm())
}

pub fn encode_base64_bytes(bytes: &[u8]) -> String {
    base64::engine::general_purpose::STANDARD.encode(bytes)
}

pub fn decode_base64(text: &str) -> Option<Vec<u8>> {
    base64::engine::general_purpose::STANDARD.decode(text).ok()
}

/// Game state seen from one player's side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredState {
    pub self_health: HealthFraction,
    pub opponent_health: HealthFraction,
    pub self_xy: (i32, i32),
    pub opponent_xy: (i32, i32),
    pub self_facing: Facing,
    pub opponent_facing: Facing,
    pub self_last_actions: Vec<String>,
    pub opponent_last_actions: Vec<String>,
    pub timer_seconds: u32,
}

impl StructuredState {
    /// Reflects coordinates and facings about the arena centre.
    pub fn reflected(&self, arena_width: i32) -> StructuredState {
        StructuredState {
            self_xy: (arena_width - self.self_xy.0, self.self_xy.1),
            opponent_xy: (arena_width - self.opponent_xy.0, self.opponent_xy.1),
            self_facing: self.self_facing.flipped(),
            opponent_facing: self.opponent_facing.flipped(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub for_player: Player,
    /// Engine frame the observation was taken on.
    pub frame: u32,
    /// Zero-based decision tick within the match.
    pub decision_index: u32,
    /// Base64 P6 images, oldest first.
    pub frames: Vec<String>,
    pub state_text: String,
    pub structured: StructuredState,
}

fn facing_word(f: Facing) -> &'static str {
    match f {
        Facing::Right => "right",
        Facing::Left => "left",
    }
}

fn actions_text(actions: &[String]) -> String {
    if actions.is_empty() {
        NO_ACTIONS.to_string()
    } else {
        actions.join("; ")
    }
}

pub fn structured_state(state: &GameState, for_player: Player) -> StructuredState {
    let me = state.fighter(for_player);
    let opp = state.fighter(for_player.other());
    StructuredState {
        self_health: me.health_fraction(),
        opponent_health: opp.health_fraction(),
        self_xy: (me.x, me.y),
        opponent_xy: (opp.x, opp.y),
        self_facing: me.facing,
        opponent_facing: opp.facing,
        self_last_actions: me.last_actions.clone(),
        opponent_last_actions: opp.last_actions.clone(),
        timer_seconds: state.timer_frames / FRAMES_PER_SECOND,
    }
}

/// Renders the fixed five-line template.
pub fn state_text(s: &StructuredState) -> String {
    format!(
        "TIMER: {:02} seconds\n\
         YOU: health {}, position ({},{}), facing {}\n\
         OPPONENT: health {}, position ({},{}), facing {}\n\
         YOUR LAST 5 ACTIONS: {}\n\
         OPPONENT LAST 5 ACTIONS: {}",
        s.timer_seconds,
        s.self_health,
        s.self_xy.0,
        s.self_xy.1,
        facing_word(s.self_facing),
        s.opponent_health,
        s.opponent_xy.0,
        s.opponent_xy.1,
        facing_word(s.opponent_facing),
        actions_text(&s.self_last_actions),
        actions_text(&s.opponent_last_actions),
    )
}

/// Text and structured fields for `for_player`, without frames.
pub fn describe_state(state: &GameState, for_player: Player) -> Observation {
    let structured = structured_state(state, for_player);
    Observation {
        for_player,
        frame: state.frame,
        decision_index: 0,
        frames: Vec::new(),
        state_text: state_text(&structured),
        structured,
    }
}

/// Full observation: renders nothing itself, takes the already encoded
/// window from the caller.
pub fn observe(state: &GameState, for_player: Player, frames: Vec<String>, decision_index: u32) -> Observation {
    Observation { frames, decision_index, ..describe_state(state, for_player) }
}

fn malformed(what: &str) -> ObservationError {
    ObservationError::MalformedText(what.to_string())
}

fn parse_fighter_line(rest: &str) -> Result<(HealthFraction, (i32, i32), Facing), ObservationError> {
    // "health 1.000, position (120,0), facing right"
    let rest = rest.strip_prefix("health ").ok_or_else(|| malformed("health"))?;
    let (health, rest) = rest.split_once(", position (").ok_or_else(|| malformed("position"))?;
    let (coords, rest) = rest.split_once("), facing ").ok_or_else(|| malformed("facing"))?;
    let (x, y) = coords.split_once(',').ok_or_else(|| malformed("coordinates"))?;
    let health: f64 = health.parse().map_err(|_| malformed("health value"))?;
    let health = HealthFraction::from_f64(health).ok_or_else(|| malformed("health range"))?;
    let x = x.parse().map_err(|_| malformed("x"))?;
    let y = y.parse().map_err(|_| malformed("y"))?;
    let facing = match rest {
        "right" => Facing::Right,
        "left" => Facing::Left,
        _ => return Err(malformed("facing value")),
    };
    Ok((health, (x, y), facing))
}

fn parse_actions(rest: &str) -> Vec<String> {
    if rest == NO_ACTIONS {
        Vec::new()
    } else {
        rest.split("; ").map(str::to_string).collect()
    }
}

/// Inverse of [`state_text`].
pub fn parse_state_text(text: &str) -> Result<StructuredState, ObservationError> {
    let lines: Vec<&str> = text.lines().collect();
    let [timer, you, opponent, mine, theirs] = lines.as_slice() else {
        return Err(malformed("expected 5 lines"));
    };
    let seconds = timer
        .strip_prefix("TIMER: ")
        .and_then(|r| r.strip_suffix(" seconds"))
        .ok_or_else(|| malformed("timer"))?;
    let timer_seconds = seconds.parse().map_err(|_| malformed("timer value"))?;
    let (self_health, self_xy, self_facing) =
        parse_fighter_line(you.strip_prefix("YOU: ").ok_or_else(|| malformed("YOU"))?)?;
    let (opponent_health, opponent_xy, opponent_facing) =
        parse_fighter_line(opponent.strip_prefix("OPPONENT: ").ok_or_else(|| malformed("OPPONENT"))?)?;
    let self_last_actions =
        parse_actions(mine.strip_prefix("YOUR LAST 5 ACTIONS: ").ok_or_else(|| malformed("your actions"))?);
    let opponent_last_actions = parse_actions(
        theirs.strip_prefix("OPPONENT LAST 5 ACTIONS: ").ok_or_else(|| malformed("opponent actions"))?,
    );
    Ok(StructuredState {
        self_health,
        opponent_health,
        self_xy,
        opponent_xy,
        self_facing,
        opponent_facing,
        self_last_actions,
        opponent_last_actions,
        timer_seconds,
    })
}
