use super::{
    ButtonCounts, LoggedDecision, MatchConfig, MatchLog, PairInfo, PlayerCounts, TournamentError, LOG_SCHEMA,
};
use crate::action::{self, ActionPlan};
use crate::engine::trace::{chain_header, trace_line, DigestChain, TRACE_VERSION};
use crate::engine::{new_match, step, ButtonChord, GameState, Player};
use crate::gateway::{build_system_prompt, resolve_agent, Agent, AgentSpec, PromptConfig, PROMPT_VERSION};
use crate::observation::{self, annotate, encode_base64, observe, render, FrameHistory};

/// Tournament bookkeeping attached to a match log.
#[derive(Clone, Debug)]
pub struct MatchContext {
    pub roster: Vec<String>,
    pub pair: PairInfo,
}

impl MatchContext {
    /// A lone match: roster is the two agents in side order.
    pub fn single(p1: &AgentSpec, p2: &AgentSpec) -> MatchContext {
        MatchContext {
            roster: vec![p1.id.clone(), p2.id.clone()],
            pair: PairInfo { index: 0, repeat: 0, row_agent: p1.id.clone(), col_agent: p2.id.clone() },
        }
    }
}

pub fn run_match(p1: &AgentSpec, p2: &AgentSpec, config: &MatchConfig) -> Result<MatchLog, TournamentError> {
    run_match_in(p1, p2, config, MatchContext::single(p1, p2))
}

fn next_tick(frame: u32, interval: u32) -> u32 {
    frame.div_ceil(interval) * interval
}

fn encoded_window(history: &FrameHistory, now: u32) -> Vec<String> {
    observation::sample_window(history, now).iter().map(encode_base64).collect()
}

/// Observe, query, compile and step until the round ends.
pub fn run_match_in(
    p1: &AgentSpec,
    p2: &AgentSpec,
    config: &MatchConfig,
    context: MatchContext,
) -> Result<MatchLog, TournamentError> {
    config.validate()?;
    if p1.id == p2.id {
        return Err(TournamentError::Setup(crate::gateway::GatewayError::DuplicateId(p1.id.clone())));
    }
    let mut agents: [Box<dyn Agent>; 2] = [resolve_agent(p1, config.seed)?, resolve_agent(p2, config.seed)?];
    let interval = config.decision_interval_frames;
    let needs_frames = agents.iter().any(|a| a.wants_frames());
    let prompt = build_system_prompt(&PromptConfig {
        match_length_frames: config.match_length_frames,
        decision_interval_frames: interval,
    });

    let mut state = new_match(config.engine(), config.seed)?;
    let mut chain = DigestChain::new(&chain_header(&state));
    let mut digests = vec![chain.push(&trace_line(&state))];
    let mut history = FrameHistory::default();
    let mut input_trace: Vec<[u8; 2]> = Vec::with_capacity(config.match_length_frames as usize);
    let mut decisions = Vec::new();
    let mut plans: [Vec<ButtonChord>; 2] = [Vec::new(), Vec::new()];
    let mut tick_frame = 0;
    let mut tick = 0;

    let keep_frame = |state: &GameState, history: &mut FrameHistory| {
        if needs_frames && observation::is_sampled_for(state.frame, next_tick(state.frame, interval)) {
            let image = annotate(&render(state), state).expect("fresh render is unannotated");
            history.push(state.frame, image);
        }
    };
    keep_frame(&state, &mut history);

    while state.round_over.is_none() {
        if state.frame % interval == 0 {
            let frames = if needs_frames { encoded_window(&history, state.frame) } else { Vec::new() };
            let observations = [Player::P1, Player::P2].map(|p| {
                let own = if agents[p as usize].wants_frames() { frames.clone() } else { Vec::new() };
                observe(&state, p, own, tick)
            });
            for (slot, player) in [Player::P1, Player::P2].into_iter().enumerate() {
                let decision = agents[slot].act(&observations[slot], &prompt);
                let plan: ActionPlan = action::resolve(&decision.command, state.fighter(player).facing);
                plans[slot] = plan.expand();
                decisions.push(LoggedDecision { tick, player, decision, plan });
            }
            let n = decisions.len();
            for d in &decisions[n - 2..] {
                state.fighter_mut(d.player).record_action(&d.decision.command.normalized);
            }
            tick_frame = state.frame;
            tick += 1;
        }
        let k = (state.frame - tick_frame) as usize;
        let input = [0, 1].map(|slot| plans[slot].get(k).copied().unwrap_or(ButtonChord::EMPTY));
        state = step(&state, input[0], input[1])?;
        input_trace.push([input[0].bits(), input[1].bits()]);
        digests.push(chain.push(&trace_line(&state)));
        keep_frame(&state, &mut history);
    }

    let result = state.round_over.expect("loop ends on round over");
    let button_counts = PlayerCounts {
        p1: ButtonCounts::from_trace(&input_trace, 0, config.count_mode),
        p2: ButtonCounts::from_trace(&input_trace, 1, config.count_mode),
    };
    Ok(MatchLog {
        schema: LOG_SCHEMA.to_string(),
        trace_version: TRACE_VERSION.to_string(),
        prompt_version: PROMPT_VERSION.to_string(),
        config: *config,
        roster: context.roster,
        pair: context.pair,
        agents: [p1.clone(), p2.clone()],
        seed: config.seed,
        decisions,
        input_trace,
        state_digests: digests,
        final_digest: chain.hex(),
        result,
        button_counts,
    })
}
