//! The command language agents reply in, and its compilation to timed
//! button presses.
//!
//! Grammar (whitespace and case are ignored around tokens):
//!
//! ```text
//! command := chord ( "," chord )*          (1 to 5 chords, pressed in order)
//! chord   := token ( "+" token )*          (1 to 3 tokens, pressed together)
//! token   := "Up" | "Down" | "Left" | "Right" | "Forward" | "Back"
//!          | "A" | "B" | "C" | "Block" | "Jump" | "Crouch"
//! ```
//!
//! `Block`, `Jump` and `Crouch` are aliases of `C`, `Up` and `Down`.
//! `Forward` and `Back` follow the fighter's facing when the command is
//! resolved; `Left` and `Right` are absolute.

mod extract;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::{Button, ButtonChord, Facing};

pub use extract::{extract_command, ExtractError};

pub const MAX_STEPS: usize = 5;
pub const MAX_CHORD_TOKENS: usize = 3;
pub const DEFAULT_HOLD_FRAMES: u32 = 3;
pub const DEFAULT_GAP_FRAMES: u32 = 2;
pub const MAX_PLAN_FRAMES: u32 = 120;

/// A canonical command token (aliases already applied).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Token {
    Up,
    Down,
    Left,
    Right,
    Forward,
    Back,
    A,
    B,
    C,
}

impl Token {
    pub const ALL: [Token; 9] = [
        Token::Up,
        Token::Down,
        Token::Left,
        Token::Right,
        Token::Forward,
        Token::Back,
        Token::A,
        Token::B,
        Token::C,
    ];

    /// Every word the parser accepts, aliases included.
    pub const VOCABULARY: [&'static str; 12] =
        ["Up", "Down", "Left", "Right", "Forward", "Back", "A", "B", "C", "Block", "Jump", "Crouch"];

    pub fn name(self) -> &'static str {
        Token::VOCABULARY[self as usize]
    }

    fn bit(self) -> u16 {
        1 << (self as u16)
    }

    fn from_word(word: &str) -> Option<Token> {
        let token = match word.to_ascii_lowercase().as_str() {
            "up" | "jump" => Token::Up,
            "down" | "crouch" => Token::Down,
            "left" => Token::Left,
            "right" => Token::Right,
            "forward" => Token::Forward,
            "back" => Token::Back,
            "a" => Token::A,
            "b" => Token::B,
            "c" | "block" => Token::C,
            _ => return None,
        };
        Some(token)
    }
}

/// Tokens pressed together, kept in canonical order.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChordSpec(u16);

impl ChordSpec {
    pub fn new(tokens: &[Token]) -> ChordSpec {
        ChordSpec(tokens.iter().fold(0, |acc, t| acc | t.bit()))
    }

    pub fn contains(self, token: Token) -> bool {
        self.0 & token.bit() != 0
    }

    pub fn tokens(self) -> impl Iterator<Item = Token> {
        Token::ALL.into_iter().filter(move |t| self.contains(*t))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    fn has_conflict(self) -> bool {
        let horizontal = [Token::Left, Token::Right, Token::Forward, Token::Back]
            .into_iter()
            .filter(|t| self.contains(*t))
            .count();
        horizontal > 1 || (self.contains(Token::Up) && self.contains(Token::Down))
    }

    /// Engine buttons for this chord when the fighter faces `facing`.
    pub fn to_buttons(self, facing: Facing) -> ButtonChord {
        self.tokens()
            .map(|t| match t {
                Token::Up => Button::Up,
                Token::Down => Button::Down,
                Token::Left => Button::Left,
                Token::Right => Button::Right,
                Token::Forward => match facing {
                    Facing::Right => Button::Right,
                    Facing::Left => Button::Left,
                },
                Token::Back => match facing {
                    Facing::Right => Button::Left,
                    Facing::Left => Button::Right,
                },
                Token::A => Button::A,
                Token::B => Button::B,
                Token::C => Button::C,
            })
            .collect()
    }
}

impl fmt::Display for ChordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.tokens().map(Token::name).collect();
        f.write_str(&names.join(" + "))
    }
}

impl fmt::Debug for ChordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// Parse failures. The messages are stable: they are written to match logs.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("empty command")]
    EmptyCommand,
    #[error("empty chord at step {index}")]
    EmptyChord { index: usize },
    #[error("unknown token {token:?} at byte {position}")]
    UnknownToken { token: String, position: usize },
    #[error("too many steps: {0} (max 5)")]
    TooManySteps(usize),
    #[error("too many buttons in step {index}: {count} (max 3)")]
    TooManyButtons { index: usize, count: usize },
    #[error("conflicting directions in step {index}")]
    ConflictingDirections { index: usize },
}

/// A parsed command. Equality ignores `raw`.
#[derive(Clone, Debug, Eq)]
pub struct Command {
    pub raw: String,
    pub normalized: String,
    pub steps: Vec<ChordSpec>,
}

impl PartialEq for Command {
    fn eq(&self, other: &Self) -> bool {
        self.steps == other.steps
    }
}

impl Command {
    /// Builds a command from already-valid steps.
    pub fn from_steps(steps: Vec<ChordSpec>) -> Result<Command, ParseError> {
        let normalized = render(&steps);
        parse(&normalized)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.normalized)
    }
}

impl Serialize for Command {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.normalized)
    }
}

impl<'de> Deserialize<'de> for Command {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        parse(&raw).map_err(serde::de::Error::custom)
    }
}

fn render(steps: &[ChordSpec]) -> String {
    let parts: Vec<String> = steps.iter().map(ChordSpec::to_string).collect();
    parts.join(", ")
}

/// Byte offset of the first non-whitespace character of `part` within the
/// original string, given the offset where `part` starts.
fn trimmed_offset(part: &str, start: usize) -> usize {
    start + (part.len() - part.trim_start().len())
}

pub fn parse(raw: &str) -> Result<Command, ParseError> {
    if raw.trim().is_empty() {
        return Err(ParseError::EmptyCommand);
    }
    let step_count = raw.split(',').count();
    if step_count > MAX_STEPS {
        return Err(ParseError::TooManySteps(step_count));
    }
    let mut steps = Vec::with_capacity(step_count);
    let mut offset = 0;
    for (index, part) in raw.split(',').enumerate() {
        let mut chord = ChordSpec::default();
        let mut count = 0;
        let mut token_offset = offset;
        for word in part.split('+') {
            let trimmed = word.trim();
            if trimmed.is_empty() {
                return Err(ParseError::EmptyChord { index });
            }
            let token = Token::from_word(trimmed).ok_or_else(|| ParseError::UnknownToken {
                token: trimmed.to_string(),
                position: trimmed_offset(word, token_offset),
            })?;
            count += 1;
            chord = ChordSpec(chord.0 | token.bit());
            token_offset += word.len() + 1;
        }
        if count > MAX_CHORD_TOKENS {
            return Err(ParseError::TooManyButtons { index, count });
        }
        if chord.has_conflict() {
            return Err(ParseError::ConflictingDirections { index });
        }
        steps.push(chord);
        offset += part.len() + 1;
    }
    Ok(Command { raw: raw.to_string(), normalized: render(&steps), steps })
}

/// The canonical text of a command; `parse(&format(c)) == c`.
pub fn format(cmd: &Command) -> String {
    render(&cmd.steps)
}

/// Press timing used when compiling commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub hold_frames: u32,
    pub gap_frames: u32,
}

impl Default for Timing {
    fn default() -> Self {
        Timing { hold_frames: DEFAULT_HOLD_FRAMES, gap_frames: DEFAULT_GAP_FRAMES }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanStep {
    pub chord: ButtonChord,
    pub hold_frames: u32,
    /// Neutral frames after this chord; zero on the last step.
    pub gap_frames: u32,
}

/// A timed button-press script with facing already applied.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionPlan {
    pub frames: Vec<PlanStep>,
}

impl ActionPlan {
    pub fn total_frames(&self) -> u32 {
        self.frames.iter().map(|s| s.hold_frames + s.gap_frames).sum()
    }

    /// One chord per engine frame.
    pub fn expand(&self) -> Vec<ButtonChord> {
        let mut out = Vec::with_capacity(self.total_frames() as usize);
        for step in &self.frames {
            out.extend(std::iter::repeat_n(step.chord, step.hold_frames as usize));
            out.extend(std::iter::repeat_n(ButtonChord::EMPTY, step.gap_frames as usize));
        }
        out
    }
}

pub fn resolve(cmd: &Command, facing: Facing) -> ActionPlan {
    resolve_with(cmd, facing, Timing::default())
}

/// Compiles a command; steps that would push the plan past
/// [`MAX_PLAN_FRAMES`] are dropped.
pub fn resolve_with(cmd: &Command, facing: Facing, timing: Timing) -> ActionPlan {
    let hold = timing.hold_frames.max(1);
    let mut frames: Vec<PlanStep> = Vec::with_capacity(cmd.steps.len());
    let mut total = 0;
    for spec in &cmd.steps {
        let gap = timing.gap_frames;
        if total + hold > MAX_PLAN_FRAMES {
            break;
        }
        total += hold + gap;
        frames.push(PlanStep { chord: spec.to_buttons(facing), hold_frames: hold, gap_frames: gap });
    }
    if let Some(last) = frames.last_mut() {
        last.gap_frames = 0;
    }
    ActionPlan { frames }
}

#[cfg(test)]
mod tests;
