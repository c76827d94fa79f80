//! Canonical per-frame text form of a [`GameState`] and the hash chain
//! built over it.
//!
//! Line layout:
//!
//! ```text
//! frame,timer,p1.health,p1.x,p1.y,p1.facing,p1.phase,p2.health,p2.x,p2.y,p2.facing,p2.phase,projectiles,inputs
//! ```
//!
//! `facing` is `R` or `L`; `projectiles` is `-` or `;`-joined
//! `owner@x:y:velocity`; `inputs` is the raw chord pair that produced the
//! frame as two hex bytes (`0000` on frame 0).

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::{Facing, FighterState, GameState, MoveTable, Phase, Player};

pub const TRACE_VERSION: &str = "lmfa-trace/1";

fn facing_code(f: Facing) -> char {
    match f {
        Facing::Right => 'R',
        Facing::Left => 'L',
    }
}

fn phase_code(phase: Phase, table: &MoveTable) -> String {
    match phase {
        Phase::Idle => "idle".into(),
        Phase::Walking => "walk".into(),
        Phase::Jumping { frame, drift, origin_x } => format!("jump:{frame}:{drift}:{origin_x}"),
        Phase::Blocking => "block".into(),
        Phase::MoveActive { move_id, frame_in_move, origin_x, connected } => format!(
            "move:{}:{frame_in_move}:{origin_x}:{}",
            table.get(move_id).id,
            u8::from(connected)
        ),
        Phase::Hitstun { frames_left } => format!("stun:{frames_left}"),
        Phase::KnockedDown { frames_left } => format!("down:{frames_left}"),
    }
}

fn push_fighter(out: &mut String, f: &FighterState, table: &MoveTable) {
    let _ = write!(
        out,
        "{},{},{},{},{},",
        f.health,
        f.x,
        f.y,
        facing_code(f.facing),
        phase_code(f.phase, table)
    );
}

/// Serializes one state as a trace line (no trailing newline).
pub fn trace_line(state: &GameState) -> String {
    let table = MoveTable::standard();
    let mut out = String::with_capacity(96);
    let _ = write!(out, "{},{},", state.frame, state.timer_frames);
    push_fighter(&mut out, &state.p1, table);
    push_fighter(&mut out, &state.p2, table);
    if state.projectiles.is_empty() {
        out.push('-');
    } else {
        let parts: Vec<String> = state
            .projectiles
            .iter()
            .map(|p| {
                let owner = match p.owner {
                    Player::P1 => 1,
                    Player::P2 => 2,
                };
                format!("{owner}@{}:{}:{}", p.x, p.y, p.velocity)
            })
            .collect();
        out.push_str(&parts.join(";"));
    }
    let (i1, i2) = if state.frame == 0 {
        (0, 0)
    } else {
        (state.p1.inputs.latest().bits(), state.p2.inputs.latest().bits())
    };
    let _ = write!(out, ",{i1:02x}{i2:02x}");
    out
}

/// Running SHA-256 chain: `h_0 = H(version | header)`,
/// `h_i = H(h_(i-1) | line_i)`.
#[derive(Clone, Debug)]
pub struct DigestChain {
    current: [u8; 32],
}

/// Hex characters kept per frame in a match log.
pub const FRAME_DIGEST_HEX: usize = 16;

impl DigestChain {
    /// `header` should identify the configuration and seed.
    pub fn new(header: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(TRACE_VERSION.as_bytes());
        hasher.update(b"\n");
        hasher.update(header.as_bytes());
        DigestChain { current: hasher.finalize().into() }
    }

    pub fn push(&mut self, line: &str) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.current);
        hasher.update(line.as_bytes());
        self.current = hasher.finalize().into();
        self.short()
    }

    /// Truncated hex form of the current link.
    pub fn short(&self) -> String {
        let mut hex = self.hex();
        hex.truncate(FRAME_DIGEST_HEX);
        hex
    }

    pub fn hex(&self) -> String {
        self.current.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

/// Header string binding a chain to its starting conditions.
pub fn chain_header(state: &GameState) -> String {
    format!(
        "width={} offset={} length={} seed={}",
        state.config.arena_width, state.config.start_offset, state.config.match_length_frames, state.rng_seed
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{new_match, step, Button, ButtonChord, EngineConfig};

    #[test]
    fn initial_line() {
        let s = new_match(EngineConfig::default(), 42).unwrap();
        assert_eq!(trace_line(&s), "0,5940,1000,120,0,R,idle,1000,280,0,L,idle,-,0000");
    }

    #[test]
    fn line_carries_raw_inputs() {
        let s = new_match(EngineConfig::default(), 42).unwrap();
        let right = ButtonChord::EMPTY.with(Button::Right);
        let start = ButtonChord::EMPTY.with(Button::Start);
        let s = step(&s, right, start).unwrap();
        assert_eq!(trace_line(&s), "1,5939,1000,123,0,R,walk,1000,280,0,L,idle,-,0880");
    }

    #[test]
    fn chain_is_order_sensitive() {
        let mut a = DigestChain::new("h");
        let mut b = DigestChain::new("h");
        a.push("x");
        a.push("y");
        b.push("y");
        b.push("x");
        assert_ne!(a.hex(), b.hex());
        assert_eq!(a.short().len(), FRAME_DIGEST_HEX);
    }
}
