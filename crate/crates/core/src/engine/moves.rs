//! The move table.
//!
//! The table lives in `data/moves.json` and is compiled into the crate, so the
//! engine, the tests and the docs read the same numbers. Schema
//! (`lmfa-moves/1`):
//!
//! ```text
//! {
//!   "schema": "lmfa-moves/1",
//!   "trigger_window_frames": <frames an input sequence may span>,
//!   "moves": [ {                      // priority order, first match wins
//!     "id": str,
//!     "trigger": [[token, ...], ...], // 1-3 chords; tokens Up Down Forward Back A B C
//!     "startup": >=1, "active": >=1, "recovery": >=0,
//!     "damage": health points on the 0-1000 scale,
//!     "reach": game units (melee),
//!     "kind": "high" | "low" | "aerial" | "projectile" | "throw_range",
//!     "knockback": game units,
//!     "advance": game units covered during startup+active (optional),
//!     "projectile_speed": game units/frame (projectiles only),
//!     "anti_air": bool (optional), "knockdown": bool (optional)
//!   } ]
//! }
//! ```

use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use super::input::{Button, ButtonChord};
use super::Facing;

pub const MOVES_JSON: &str = include_str!("../../data/moves.json");
pub const MOVES_SCHEMA: &str = "lmfa-moves/1";

static STANDARD: LazyLock<MoveTable> = LazyLock::new(|| {
    MoveTable::from_json(MOVES_JSON).expect("bundled move table is valid")
});

/// A trigger token; Forward and Back are relative to the fighter's facing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriggerToken {
    Up,
    Down,
    Forward,
    Back,
    A,
    B,
    C,
}

impl TriggerToken {
    pub fn resolve(self, facing: Facing) -> Button {
        match (self, facing) {
            (TriggerToken::Up, _) => Button::Up,
            (TriggerToken::Down, _) => Button::Down,
            (TriggerToken::Forward, Facing::Right) | (TriggerToken::Back, Facing::Left) => Button::Right,
            (TriggerToken::Forward, Facing::Left) | (TriggerToken::Back, Facing::Right) => Button::Left,
            (TriggerToken::A, _) => Button::A,
            (TriggerToken::B, _) => Button::B,
            (TriggerToken::C, _) => Button::C,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    High,
    Low,
    Aerial,
    Projectile,
    ThrowRange,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveDef {
    pub id: String,
    pub trigger: Vec<Vec<TriggerToken>>,
    pub startup: u32,
    pub active: u32,
    pub recovery: u32,
    pub damage: u16,
    pub reach: i32,
    pub kind: MoveKind,
    pub knockback: i32,
    #[serde(default)]
    pub advance: i32,
    #[serde(default)]
    pub projectile_speed: i32,
    #[serde(default)]
    pub anti_air: bool,
    #[serde(default)]
    pub knockdown: bool,
}

impl MoveDef {
    pub fn total_frames(&self) -> u32 {
        self.startup + self.active + self.recovery
    }

    /// `frame_in_move` lies inside the active window.
    pub fn is_active(&self, frame_in_move: u32) -> bool {
        frame_in_move >= self.startup && frame_in_move < self.startup + self.active
    }

    pub fn is_projectile(&self) -> bool {
        self.kind == MoveKind::Projectile
    }

    /// Trigger chords with Forward/Back resolved for `facing`.
    pub fn trigger_chords(&self, facing: Facing) -> Vec<ButtonChord> {
        self.trigger
            .iter()
            .map(|step| step.iter().map(|t| t.resolve(facing)).collect())
            .collect()
    }

    /// Horizontal distance covered by frame `k` of the move (k counted from
    /// the trigger frame), before any clamping.
    pub fn advance_at(&self, k: u32) -> i32 {
        let span = self.startup + self.active;
        if self.advance == 0 || span == 0 {
            return 0;
        }
        let k = k.min(span) as i64;
        (i64::from(self.advance) * k / i64::from(span)) as i32
    }
}

/// Index into a [`MoveTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveId(pub u8);

#[derive(Debug, thiserror::Error)]
pub enum MoveTableError {
    #[error("move table is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported move table schema {0:?}")]
    Schema(String),
    #[error("move {id}: {reason}")]
    Invalid { id: String, reason: String },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveFile {
    schema: String,
    trigger_window_frames: usize,
    moves: Vec<MoveDef>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveTable {
    trigger_window: usize,
    moves: Vec<MoveDef>,
}

impl MoveTable {
    /// The table bundled with the crate.
    pub fn standard() -> &'static MoveTable {
        &STANDARD
    }

    pub fn from_json(json: &str) -> Result<Self, MoveTableError> {
        let file: MoveFile = serde_json::from_str(json)?;
        if file.schema != MOVES_SCHEMA {
            return Err(MoveTableError::Schema(file.schema));
        }
        let table = MoveTable { trigger_window: file.trigger_window_frames, moves: file.moves };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<(), MoveTableError> {
        let invalid = |m: &MoveDef, reason: &str| MoveTableError::Invalid {
            id: m.id.clone(),
            reason: reason.to_string(),
        };
        if self.moves.len() > usize::from(u8::MAX) {
            return Err(MoveTableError::Schema("too many moves".into()));
        }
        for m in &self.moves {
            if m.startup < 1 {
                return Err(invalid(m, "startup must be >= 1"));
            }
            if m.active < 1 {
                return Err(invalid(m, "active must be >= 1"));
            }
            if m.trigger.is_empty() || m.trigger.len() > 3 {
                return Err(invalid(m, "trigger must have 1 to 3 chords"));
            }
            if m.trigger.iter().any(Vec::is_empty) {
                return Err(invalid(m, "trigger chords must not be empty"));
            }
            if m.is_projectile() && m.projectile_speed <= 0 {
                return Err(invalid(m, "projectiles need a positive speed"));
            }
            if m.reach < 0 || m.knockback < 0 || m.advance < 0 {
                return Err(invalid(m, "reach, knockback and advance must be >= 0"));
            }
        }
        let mut ids: Vec<&str> = self.moves.iter().map(|m| m.id.as_str()).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(MoveTableError::Schema("duplicate move id".into()));
        }
        Ok(())
    }

    pub fn trigger_window(&self) -> usize {
        self.trigger_window
    }

    pub fn get(&self, id: MoveId) -> &MoveDef {
        &self.moves[usize::from(id.0)]
    }

    pub fn find(&self, name: &str) -> Option<MoveId> {
        self.moves.iter().position(|m| m.id == name).map(|i| MoveId(i as u8))
    }

    /// Moves in priority order.
    pub fn iter(&self) -> impl Iterator<Item = (MoveId, &MoveDef)> {
        self.moves.iter().enumerate().map(|(i, m)| (MoveId(i as u8), m))
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table_loads() {
        let table = MoveTable::standard();
        assert_eq!(table.trigger_window(), 20);
        for name in ["punch", "kick", "uppercut", "crouch_kick", "fireball", "flying_kick"] {
            assert!(table.find(name).is_some(), "{name}");
        }
    }

    #[test]
    fn bundled_damage_values() {
        let table = MoveTable::standard();
        let dmg = |n| table.get(table.find(n).unwrap()).damage;
        assert_eq!(dmg("punch"), 60);
        assert_eq!(dmg("kick"), 80);
        assert_eq!(dmg("uppercut"), 120);
        assert_eq!(dmg("crouch_kick"), 50);
        assert_eq!(dmg("fireball"), 90);
        assert_eq!(dmg("flying_kick"), 150);
        let fk = table.get(table.find("flying_kick").unwrap());
        assert_eq!(fk.advance, 120);
        assert_eq!(table.get(table.find("fireball").unwrap()).projectile_speed, 8);
        assert_eq!(table.get(table.find("punch").unwrap()).reach, 40);
        assert_eq!(table.get(table.find("kick").unwrap()).reach, 55);
    }

    #[test]
    fn flying_kick_trigger_resolves_with_facing() {
        let table = MoveTable::standard();
        let fk = table.get(table.find("flying_kick").unwrap());
        let right = ButtonChord::EMPTY.with(Button::Right);
        let c = ButtonChord::EMPTY.with(Button::C);
        assert_eq!(fk.trigger_chords(Facing::Right), vec![right, right, c]);
        assert_eq!(fk.trigger_chords(Facing::Left), vec![right.reflected(), right.reflected(), c]);
    }

    #[test]
    fn rejects_bad_tables() {
        let bad = MOVES_JSON.replacen("\"startup\": 6", "\"startup\": 0", 1);
        assert!(matches!(MoveTable::from_json(&bad), Err(MoveTableError::Invalid { .. })));
        let bad = MOVES_JSON.replacen("lmfa-moves/1", "lmfa-moves/9", 1);
        assert!(matches!(MoveTable::from_json(&bad), Err(MoveTableError::Schema(_))));
        let bad = MOVES_JSON.replacen(
            "[[\"Forward\"], [\"Forward\"], [\"C\"]]",
            "[[\"Forward\"], [\"Forward\"], [\"Down\"], [\"C\"]]",
            1,
        );
        assert!(matches!(MoveTable::from_json(&bad), Err(MoveTableError::Invalid { .. })));
    }

    #[test]
    fn advance_is_monotone_and_reaches_total() {
        let table = MoveTable::standard();
        let fk = table.get(table.find("flying_kick").unwrap());
        let span = fk.startup + fk.active;
        let mut last = 0;
        for k in 0..=span + 5 {
            let a = fk.advance_at(k);
            assert!(a >= last);
            last = a;
        }
        assert_eq!(fk.advance_at(span), 120);
    }
}
