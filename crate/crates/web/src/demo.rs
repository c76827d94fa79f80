//! Plain-Rust side of the browser demo, usable without a JS runtime.

use lmfa_core::action;
use lmfa_core::engine::{new_match, step, ButtonChord, Facing, GameState, Player};
use lmfa_core::gateway::{AgentSpec, BotPolicy};
use lmfa_core::observation::{annotate, describe_state, render};
use lmfa_core::reporting::{build_heatmap, build_matrix, build_win_rates};
use lmfa_core::tournament::{run_match, run_round_robin, MatchConfig, MatchLog};
use serde_json::json;

pub const POLICIES: [&str; 4] = ["idle", "random", "rushdown", "zoner"];

pub fn policy(name: &str) -> Result<BotPolicy, String> {
    match name {
        "idle" => Ok(BotPolicy::Idle),
        "random" => Ok(BotPolicy::Random),
        "rushdown" => Ok(BotPolicy::Rushdown),
        "zoner" => Ok(BotPolicy::Zoner),
        other => Err(format!("unknown bot {other:?}; expected one of {}", POLICIES.join(", "))),
    }
}

/// A finished bot match with every engine state kept for scrubbing.
pub struct Replay {
    pub log: MatchLog,
    pub states: Vec<GameState>,
}

impl Replay {
    /// Ids are suffixed with the side so a bot can face itself.
    pub fn simulate(p1: &str, p2: &str, seed: u64) -> Result<Replay, String> {
        let a = AgentSpec::scripted(&format!("{p1}-p1"), policy(p1)?);
        let b = AgentSpec::scripted(&format!("{p2}-p2"), policy(p2)?);
        let config = MatchConfig::default().with_seed(seed);
        let log = run_match(&a, &b, &config).map_err(|e| e.to_string())?;
        let mut state = new_match(config.engine(), seed).map_err(|e| e.to_string())?;
        let mut states = Vec::with_capacity(log.input_trace.len() + 1);
        states.push(state.clone());
        for inputs in &log.input_trace {
            state = step(&state, ButtonChord::from_bits(inputs[0]), ButtonChord::from_bits(inputs[1]))
                .map_err(|e| e.to_string())?;
            states.push(state.clone());
        }
        Ok(Replay { log, states })
    }

    pub fn frame_count(&self) -> usize {
        self.states.len()
    }

    /// RGBA pixels of frame `i` (clamped), with fighter markers if asked.
    pub fn rgba(&self, i: usize, markers: bool) -> Vec<u8> {
        let state = &self.states[i.min(self.states.len() - 1)];
        let image = render(state);
        let image = if markers { annotate(&image, state).unwrap_or(image) } else { image };
        image.to_rgba()
    }

    /// The text observation P1 would receive at frame `i`.
    pub fn state_text(&self, i: usize) -> String {
        let state = &self.states[i.min(self.states.len() - 1)];
        describe_state(state, Player::P1).state_text
    }

    pub fn summary_json(&self) -> String {
        let r = &self.log.result;
        json!({
            "p1": self.log.agents[0].id,
            "p2": self.log.agents[1].id,
            "winner": self.log.winner_id(),
            "winner_health_fraction": r.winner_health_fraction.map(|h| h.to_string()),
            "end_reason": r.end_reason.as_str(),
            "frames_elapsed": r.frames_elapsed,
            "final_digest": self.log.final_digest,
            "decisions": self.log.decisions.iter().map(|d| json!({
                "frame": d.decision.frame_issued,
                "player": if d.player == Player::P1 { "P1" } else { "P2" },
                "command": d.decision.command.to_string(),
            })).collect::<Vec<_>>(),
        })
        .to_string()
    }
}

/// Parses a command and compiles it for a fighter facing right or left.
pub fn plan_json(text: &str, facing_right: bool) -> Result<String, String> {
    let command = action::parse(text).map_err(|e| e.to_string())?;
    let facing = if facing_right { Facing::Right } else { Facing::Left };
    let plan = action::resolve(&command, facing);
    let steps: Vec<_> = command
        .steps
        .iter()
        .zip(&plan.frames)
        .map(|(spec, s)| {
            json!({
                "tokens": spec.tokens().map(|t| t.name()).collect::<Vec<_>>(),
                "buttons": s.chord.to_string(),
                "hold_frames": s.hold_frames,
                "gap_frames": s.gap_frames,
            })
        })
        .collect();
    let timeline: Vec<String> = plan.expand().iter().map(ButtonChord::to_string).collect();
    Ok(json!({
        "normalized": command.normalized,
        "steps": steps,
        "total_frames": plan.total_frames(),
        "timeline": timeline,
    })
    .to_string())
}

/// Round robin among the four stock bots.
pub fn tournament_json(seed: u64, matches_per_pair: u32) -> Result<String, String> {
    let agents: Vec<AgentSpec> = POLICIES.iter().map(|p| AgentSpec::scripted(p, policy(p).expect("stock bot"))).collect();
    let config = MatchConfig::default().with_seed(seed);
    let t = run_round_robin(&agents, &config, matches_per_pair, 1).map_err(|e| e.to_string())?;
    let matrix = build_matrix(&t.result).map_err(|e| e.to_string())?;
    let n = matrix.agents.len();
    let grid: Vec<Vec<String>> = (0..n).map(|i| (0..n).map(|j| matrix.display(i, j)).collect()).collect();
    let heatmap = build_heatmap(&t.logs);
    Ok(json!({
        "agents": matrix.agents,
        "matrix": grid,
        "win_rates": build_win_rates(&t.result),
        "heatmap": {
            "buttons": lmfa_core::engine::Button::ALL.iter().map(|b| b.name()).collect::<Vec<_>>(),
            "agents": heatmap.agents,
            "counts": heatmap.counts.iter().map(|c| c.0.to_vec()).collect::<Vec<_>>(),
            "normalized": heatmap.normalized,
        },
    })
    .to_string())
}
