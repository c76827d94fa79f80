//! Frame-stepped two-player fighting engine.
//!
//! All arithmetic is integer and [`step`] is a pure function of the state
//! and the two input chords, so a seed plus an input script reproduces a
//! match exactly.

pub mod input;
pub mod moves;
pub mod trace;
pub mod trigger;

use serde::{Deserialize, Serialize};

pub use input::{Button, ButtonChord};
pub use moves::{MoveDef, MoveId, MoveKind, MoveTable};

use crate::units::{HealthFraction, HEALTH_MAX};

pub const WALK_SPEED: i32 = 3;
pub const JUMP_FRAMES: u32 = 36;
pub const JUMP_APEX: i32 = 72;
pub const JUMP_DRIFT: i32 = 90;
pub const HITSTUN_FRAMES: u32 = 18;
pub const KNOCKDOWN_FRAMES: u32 = 45;
/// Blocked hits deal `damage * CHIP_PERCENT / 100`, rounded down.
pub const CHIP_PERCENT: u32 = 10;
/// Closest an advancing move will carry its user toward the opponent.
pub const MIN_GAP: i32 = 20;
pub const PROJECTILE_RADIUS: i32 = 16;
pub const PROJECTILE_HEIGHT: i32 = 40;
pub const PROJECTILE_SPAWN_OFFSET: i32 = 20;
/// Targets higher than this clear projectiles.
pub const PROJECTILE_MAX_TARGET_Y: i32 = 30;
pub const ACTION_HISTORY: usize = 5;

pub const DEFAULT_ARENA_WIDTH: i32 = 400;
pub const DEFAULT_START_OFFSET: i32 = 80;
/// 99 seconds at 60 frames per second.
pub const DEFAULT_MATCH_LENGTH: u32 = 5940;
pub const FRAMES_PER_SECOND: u32 = 60;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("invalid configuration: {field} {reason}")]
    Config { field: &'static str, reason: String },
    #[error("the round is already over")]
    RoundOver,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Facing {
    #[serde(rename = "toward_positive_x")]
    Right,
    #[serde(rename = "toward_negative_x")]
    Left,
}

impl Facing {
    pub fn sign(self) -> i32 {
        match self {
            Facing::Right => 1,
            Facing::Left => -1,
        }
    }

    pub fn flipped(self) -> Facing {
        match self {
            Facing::Right => Facing::Left,
            Facing::Left => Facing::Right,
        }
    }

    fn toward(from: i32, to: i32, current: Facing) -> Facing {
        match to.cmp(&from) {
            std::cmp::Ordering::Greater => Facing::Right,
            std::cmp::Ordering::Less => Facing::Left,
            std::cmp::Ordering::Equal => current,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineConfig {
    pub arena_width: i32,
    pub start_offset: i32,
    pub match_length_frames: u32,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            arena_width: DEFAULT_ARENA_WIDTH,
            start_offset: DEFAULT_START_OFFSET,
            match_length_frames: DEFAULT_MATCH_LENGTH,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.arena_width <= 0 {
            return Err(EngineError::Config { field: "arena_width", reason: "must be > 0".into() });
        }
        if self.match_length_frames == 0 {
            return Err(EngineError::Config {
                field: "match_length_frames",
                reason: "must be > 0".into(),
            });
        }
        if self.start_offset < 0 || self.start_offset > self.arena_width / 2 {
            return Err(EngineError::Config {
                field: "start_offset",
                reason: format!("must be within 0..={}", self.arena_width / 2),
            });
        }
        Ok(())
    }

    fn clamp_x(&self, x: i32) -> i32 {
        x.clamp(0, self.arena_width)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "phase")]
pub enum Phase {
    Idle,
    Walking,
    Jumping { frame: u32, drift: i32, origin_x: i32 },
    Blocking,
    MoveActive { move_id: MoveId, frame_in_move: u32, origin_x: i32, connected: bool },
    Hitstun { frames_left: u32 },
    KnockedDown { frames_left: u32 },
}

impl Phase {
    /// Phases in which the fighter reads input and turns to the opponent.
    fn is_free(self) -> bool {
        matches!(self, Phase::Idle | Phase::Walking | Phase::Blocking)
    }
}

/// Per-player input window for trigger detection: raw chords, oldest
/// first, ending at the most recent frame.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InputHistory(Vec<ButtonChord>);

impl InputHistory {
    fn push(&mut self, chord: ButtonChord, capacity: usize) {
        if self.0.len() == capacity {
            self.0.remove(0);
        }
        self.0.push(chord);
    }

    pub fn raw(&self) -> &[ButtonChord] {
        &self.0
    }

    pub fn latest(&self) -> ButtonChord {
        self.0.last().copied().unwrap_or_default()
    }

    fn resolved(&self) -> Vec<ButtonChord> {
        self.0.iter().map(|c| c.resolved()).collect()
    }

    fn reflected(&self) -> InputHistory {
        InputHistory(self.0.iter().map(|c| c.reflected()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FighterState {
    pub health: u16,
    pub x: i32,
    pub y: i32,
    pub facing: Facing,
    #[serde(flatten)]
    pub phase: Phase,
    pub last_actions: Vec<String>,
    pub inputs: InputHistory,
}

impl FighterState {
    fn new(x: i32, facing: Facing) -> Self {
        FighterState {
            health: HEALTH_MAX,
            x,
            y: 0,
            facing,
            phase: Phase::Idle,
            last_actions: Vec::new(),
            inputs: InputHistory::default(),
        }
    }

    pub fn health_fraction(&self) -> HealthFraction {
        HealthFraction::from_health(self.health)
    }

    /// Appends an executed command string, keeping the newest five.
    pub fn record_action(&mut self, command: &str) {
        if self.last_actions.len() == ACTION_HISTORY {
            self.last_actions.remove(0);
        }
        self.last_actions.push(command.to_string());
    }

    fn airborne(&self) -> bool {
        matches!(self.phase, Phase::Jumping { .. }) && self.y > 0
    }

    fn reflected(&self, width: i32) -> FighterState {
        let phase = match self.phase {
            Phase::Jumping { frame, drift, origin_x } => {
                Phase::Jumping { frame, drift: -drift, origin_x: width - origin_x }
            }
            Phase::MoveActive { move_id, frame_in_move, origin_x, connected } => Phase::MoveActive {
                move_id,
                frame_in_move,
                origin_x: width - origin_x,
                connected,
            },
            other => other,
        };
        FighterState {
            health: self.health,
            x: width - self.x,
            y: self.y,
            facing: self.facing.flipped(),
            phase,
            last_actions: self.last_actions.clone(),
            inputs: self.inputs.reflected(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Projectile {
    pub owner: Player,
    pub x: i32,
    pub y: i32,
    pub velocity: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Winner {
    P1,
    P2,
    Draw,
}

impl Winner {
    pub fn swapped(self) -> Winner {
        match self {
            Winner::P1 => Winner::P2,
            Winner::P2 => Winner::P1,
            Winner::Draw => Winner::Draw,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndReason {
    Knockout,
    Timeout,
    DoubleKo,
}

impl EndReason {
    pub fn as_str(self) -> &'static str {
        match self {
            EndReason::Knockout => "knockout",
            EndReason::Timeout => "timeout",
            EndReason::DoubleKo => "double_ko",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundOutcome {
    pub winner: Winner,
    /// Absent on a draw.
    pub winner_health_fraction: Option<HealthFraction>,
    pub end_reason: EndReason,
    pub frames_elapsed: u32,
}

impl RoundOutcome {
    pub fn swapped(self) -> RoundOutcome {
        RoundOutcome { winner: self.winner.swapped(), ..self }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub config: EngineConfig,
    pub frame: u32,
    pub timer_frames: u32,
    pub p1: FighterState,
    pub p2: FighterState,
    /// Sorted by owner, P1 first.
    pub projectiles: Vec<Projectile>,
    pub rng_seed: u64,
    pub round_over: Option<RoundOutcome>,
}

impl GameState {
    pub fn fighter(&self, player: Player) -> &FighterState {
        match player {
            Player::P1 => &self.p1,
            Player::P2 => &self.p2,
        }
    }

    pub fn fighter_mut(&mut self, player: Player) -> &mut FighterState {
        match player {
            Player::P1 => &mut self.p1,
            Player::P2 => &mut self.p2,
        }
    }

    pub fn live_projectile(&self, owner: Player) -> bool {
        self.projectiles.iter().any(|p| p.owner == owner)
    }

    /// Horizontal distance between the fighters.
    pub fn distance(&self) -> i32 {
        (self.p1.x - self.p2.x).abs()
    }
}

/// Fresh round: fighters at `width/2 ± start_offset`, facing each other.
pub fn new_match(config: EngineConfig, seed: u64) -> Result<GameState, EngineError> {
    config.validate()?;
    let p1_x = config.arena_width / 2 - config.start_offset;
    let p2_x = config.arena_width - p1_x;
    Ok(GameState {
        config,
        frame: 0,
        timer_frames: config.match_length_frames,
        p1: FighterState::new(p1_x, Facing::Right),
        p2: FighterState::new(p2_x, Facing::Left),
        projectiles: Vec::new(),
        rng_seed: seed,
        round_over: None,
    })
}

pub fn outcome(state: &GameState) -> Option<RoundOutcome> {
    state.round_over
}

/// Swaps the players and reflects every horizontal quantity about the
/// arena centre.
pub fn mirror(state: &GameState) -> GameState {
    let width = state.config.arena_width;
    let mut projectiles: Vec<Projectile> = state
        .projectiles
        .iter()
        .map(|p| Projectile {
            owner: p.owner.other(),
            x: width - p.x,
            y: p.y,
            velocity: -p.velocity,
        })
        .collect();
    projectiles.sort_by_key(|p| p.owner);
    GameState {
        config: state.config,
        frame: state.frame,
        timer_frames: state.timer_frames,
        p1: state.p2.reflected(width),
        p2: state.p1.reflected(width),
        projectiles,
        rng_seed: state.rng_seed,
        round_over: state.round_over.map(RoundOutcome::swapped),
    }
}

fn jump_height(frame: u32) -> i32 {
    let k = frame.min(JUMP_FRAMES) as i32;
    let n = JUMP_FRAMES as i32;
    4 * JUMP_APEX * k * (n - k) / (n * n)
}

struct Spawn {
    x: i32,
    velocity: i32,
}

/// Advances one fighter by a frame against the opponent's pre-step state.
fn advance_fighter(
    me: &FighterState,
    opponent: &FighterState,
    raw: ButtonChord,
    has_projectile: bool,
    config: &EngineConfig,
    table: &MoveTable,
) -> (FighterState, Option<Spawn>) {
    let mut f = me.clone();
    f.inputs.push(raw, table.trigger_window());
    let chord = raw.resolved();
    let mut spawn = None;

    let free = match f.phase {
        Phase::Idle | Phase::Walking | Phase::Blocking => true,
        Phase::Hitstun { frames_left } => {
            if frames_left <= 1 {
                f.phase = Phase::Idle;
                true
            } else {
                f.phase = Phase::Hitstun { frames_left: frames_left - 1 };
                false
            }
        }
        Phase::KnockedDown { frames_left } => {
            if frames_left <= 1 {
                f.phase = Phase::Idle;
                true
            } else {
                f.phase = Phase::KnockedDown { frames_left: frames_left - 1 };
                false
            }
        }
        Phase::Jumping { frame, drift, origin_x } => {
            let k = frame + 1;
            let dx = JUMP_DRIFT * k.min(JUMP_FRAMES) as i32 / JUMP_FRAMES as i32;
            f.x = config.clamp_x(origin_x + drift * dx);
            if k >= JUMP_FRAMES {
                f.y = 0;
                f.phase = Phase::Idle;
            } else {
                f.y = jump_height(k);
                f.phase = Phase::Jumping { frame: k, drift, origin_x };
            }
            false
        }
        Phase::MoveActive { move_id, frame_in_move, origin_x, connected } => {
            let def = table.get(move_id);
            let k = frame_in_move + 1;
            if k >= def.total_frames() {
                f.phase = Phase::Idle;
                true
            } else {
                f.phase = Phase::MoveActive { move_id, frame_in_move: k, origin_x, connected };
                let sign = f.facing.sign();
                if def.advance > 0 && !connected {
                    let desired = origin_x + sign * def.advance_at(k);
                    let mut x = desired;
                    if (opponent.x - f.x) * sign >= 0 {
                        let limit = opponent.x - sign * MIN_GAP;
                        x = if sign > 0 { x.min(limit).max(f.x) } else { x.max(limit).min(f.x) };
                    }
                    f.x = config.clamp_x(x);
                }
                if def.is_projectile() && k == def.startup {
                    spawn = Some(Spawn {
                        x: f.x + sign * PROJECTILE_SPAWN_OFFSET,
                        velocity: sign * def.projectile_speed,
                    });
                }
                false
            }
        }
    };

    if free {
        let window = f.inputs.resolved();
        let triggered = table.iter().find(|(_, def)| {
            if def.is_projectile() && has_projectile {
                return false;
            }
            trigger::matches(&window, &def.trigger_chords(f.facing))
        });
        if let Some((move_id, _)) = triggered {
            f.phase = Phase::MoveActive { move_id, frame_in_move: 0, origin_x: f.x, connected: false };
        } else if chord.contains(Button::Up) {
            f.phase = Phase::Jumping { frame: 0, drift: chord.horizontal(), origin_x: f.x };
        } else if chord.contains(Button::C) {
            f.phase = Phase::Blocking;
        } else if chord.horizontal() != 0 {
            f.x = config.clamp_x(f.x + chord.horizontal() * WALK_SPEED);
            f.phase = Phase::Walking;
        } else {
            f.phase = Phase::Idle;
        }
    }
    (f, spawn)
}

struct Hit {
    damage: u16,
    knockback: i32,
    direction: i32,
    knockdown: bool,
}

fn melee_hit(attacker: &FighterState, defender: &FighterState, table: &MoveTable) -> Option<Hit> {
    let Phase::MoveActive { move_id, frame_in_move, connected: false, .. } = attacker.phase else {
        return None;
    };
    let def = table.get(move_id);
    if def.is_projectile() || !def.is_active(frame_in_move) {
        return None;
    }
    if matches!(defender.phase, Phase::KnockedDown { .. }) {
        return None;
    }
    if defender.airborne() && !(def.anti_air || def.kind == MoveKind::Aerial) {
        return None;
    }
    let sign = attacker.facing.sign();
    let dx = defender.x - attacker.x;
    if dx * sign < 0 || dx.abs() > def.reach {
        return None;
    }
    Some(Hit { damage: def.damage, knockback: def.knockback, direction: sign, knockdown: def.knockdown })
}

fn apply_hits(f: &mut FighterState, hits: &[Hit], config: &EngineConfig) {
    for hit in hits {
        if f.phase == Phase::Blocking {
            let chip = (u32::from(hit.damage) * CHIP_PERCENT / 100) as u16;
            f.health = f.health.saturating_sub(chip);
        } else {
            f.health = f.health.saturating_sub(hit.damage);
            f.y = 0;
            f.phase = if hit.knockdown || matches!(f.phase, Phase::KnockedDown { .. }) {
                Phase::KnockedDown { frames_left: KNOCKDOWN_FRAMES }
            } else {
                Phase::Hitstun { frames_left: HITSTUN_FRAMES }
            };
        }
        f.x = config.clamp_x(f.x + hit.direction * hit.knockback);
    }
}

/// Advances the match by exactly one frame.
pub fn step(state: &GameState, input_p1: ButtonChord, input_p2: ButtonChord) -> Result<GameState, EngineError> {
    step_with(state, input_p1, input_p2, MoveTable::standard())
}

pub fn step_with(
    state: &GameState,
    input_p1: ButtonChord,
    input_p2: ButtonChord,
    table: &MoveTable,
) -> Result<GameState, EngineError> {
    if state.round_over.is_some() {
        return Err(EngineError::RoundOver);
    }
    let config = state.config;
    let (mut p1, spawn1) =
        advance_fighter(&state.p1, &state.p2, input_p1, state.live_projectile(Player::P1), &config, table);
    let (mut p2, spawn2) =
        advance_fighter(&state.p2, &state.p1, input_p2, state.live_projectile(Player::P2), &config, table);

    // Projectiles: move, spawn, drop out-of-bounds, cancel head-on pairs.
    let mut moved: Vec<(Projectile, i32)> = state
        .projectiles
        .iter()
        .map(|p| (Projectile { x: p.x + p.velocity, ..*p }, p.x))
        .collect();
    for (owner, spawn) in [(Player::P1, spawn1), (Player::P2, spawn2)] {
        if let Some(s) = spawn {
            let p = Projectile { owner, x: s.x, y: PROJECTILE_HEIGHT, velocity: s.velocity };
            moved.push((p, s.x));
        }
    }
    moved.retain(|(p, _)| (0..=config.arena_width).contains(&p.x));
    moved.sort_by_key(|(p, _)| p.owner);
    let mut projectiles: Vec<Projectile> = moved.iter().map(|(p, _)| *p).collect();
    if let [(a, a_prev), (b, b_prev)] = moved.as_slice() {
        let crossed = (a_prev - b_prev).signum() != (a.x - b.x).signum();
        if a.owner != b.owner && (crossed || (a.x - b.x).abs() <= 2 * PROJECTILE_RADIUS) {
            projectiles.clear();
        }
    }

    // Hits are gathered against this frame's positions, then applied
    // together so neither player is processed first.
    let mut hits_p1: Vec<Hit> = melee_hit(&p2, &p1, table).into_iter().collect();
    let mut hits_p2: Vec<Hit> = melee_hit(&p1, &p2, table).into_iter().collect();
    let p1_connected = !hits_p2.is_empty();
    let p2_connected = !hits_p1.is_empty();
    let mut remaining = Vec::with_capacity(projectiles.len());
    let projectile_def = table.iter().map(|(_, d)| d).find(|d| d.is_projectile());
    for proj in projectiles {
        let target = match proj.owner {
            Player::P1 => &p2,
            Player::P2 => &p1,
        };
        let in_range = (proj.x - target.x).abs() <= PROJECTILE_RADIUS
            && target.y <= PROJECTILE_MAX_TARGET_Y
            && !matches!(target.phase, Phase::KnockedDown { .. });
        if let (true, Some(def)) = (in_range, projectile_def) {
            let hit = Hit {
                damage: def.damage,
                knockback: def.knockback,
                direction: proj.velocity.signum(),
                knockdown: def.knockdown,
            };
            match proj.owner {
                Player::P1 => hits_p2.push(hit),
                Player::P2 => hits_p1.push(hit),
            }
        } else {
            remaining.push(proj);
        }
    }
    if p1_connected {
        mark_connected(&mut p1);
    }
    if p2_connected {
        mark_connected(&mut p2);
    }
    apply_hits(&mut p1, &hits_p1, &config);
    apply_hits(&mut p2, &hits_p2, &config);

    let (x1, x2) = (p1.x, p2.x);
    for (me, other_x) in [(&mut p1, x2), (&mut p2, x1)] {
        if me.phase.is_free() && me.y == 0 {
            me.facing = Facing::toward(me.x, other_x, me.facing);
        }
    }

    let mut next = GameState {
        config,
        frame: state.frame + 1,
        timer_frames: state.timer_frames.saturating_sub(1),
        p1,
        p2,
        projectiles: remaining,
        rng_seed: state.rng_seed,
        round_over: None,
    };
    next.round_over = check_round_over(&next);
    Ok(next)
}

fn mark_connected(f: &mut FighterState) {
    if let Phase::MoveActive { connected, .. } = &mut f.phase {
        *connected = true;
    }
}

fn check_round_over(state: &GameState) -> Option<RoundOutcome> {
    let (h1, h2) = (state.p1.health, state.p2.health);
    let decided = |winner: Winner, health: u16, end_reason| RoundOutcome {
        winner,
        winner_health_fraction: Some(HealthFraction::from_health(health)),
        end_reason,
        frames_elapsed: state.frame,
    };
    let draw = |end_reason| RoundOutcome {
        winner: Winner::Draw,
        winner_health_fraction: None,
        end_reason,
        frames_elapsed: state.frame,
    };
    match (h1, h2) {
        (0, 0) => Some(draw(EndReason::DoubleKo)),
        (0, _) => Some(decided(Winner::P2, h2, EndReason::Knockout)),
        (_, 0) => Some(decided(Winner::P1, h1, EndReason::Knockout)),
        _ if state.timer_frames == 0 => Some(match h1.cmp(&h2) {
            std::cmp::Ordering::Greater => decided(Winner::P1, h1, EndReason::Timeout),
            std::cmp::Ordering::Less => decided(Winner::P2, h2, EndReason::Timeout),
            std::cmp::Ordering::Equal => draw(EndReason::Timeout),
        }),
        _ => None,
    }
}

#[cfg(test)]
mod tests;
