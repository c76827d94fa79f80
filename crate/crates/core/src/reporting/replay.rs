use serde::{Deserialize, Serialize};

use crate::engine::trace::{chain_header, trace_line, DigestChain, TRACE_VERSION};
use crate::engine::{new_match, step, ButtonChord, EngineError, RoundOutcome};
use crate::tournament::{ButtonCounts, MatchLog, PlayerCounts, LOG_SCHEMA};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Match,
    /// First engine frame whose step no longer reproduces the logged digest.
    Diverged { frame: u32 },
    /// The trace replays cleanly but the recorded result differs.
    ResultMismatch { logged: RoundOutcome, replayed: RoundOutcome },
    /// The trace and result agree but the recorded button counts do not.
    CountsMismatch,
}

#[derive(Debug, thiserror::Error)]
pub enum ReplayError {
    #[error("unsupported log version {found:?} (expected {expected:?})")]
    UnsupportedVersion { found: String, expected: &'static str },
    #[error("log config is invalid: {0}")]
    Config(#[from] EngineError),
}

/// Replays the input trace from the logged config and seed and compares
/// digests frame by frame, then the result and counts.
pub fn verify_replay(log: &MatchLog) -> Result<Verdict, ReplayError> {
    if log.schema != LOG_SCHEMA {
        return Err(ReplayError::UnsupportedVersion { found: log.schema.clone(), expected: LOG_SCHEMA });
    }
    if log.trace_version != TRACE_VERSION {
        return Err(ReplayError::UnsupportedVersion { found: log.trace_version.clone(), expected: TRACE_VERSION });
    }
    let mut state = new_match(log.config.engine(), log.seed)?;
    let mut chain = DigestChain::new(&chain_header(&state));
    let digest_at = |i: usize| log.state_digests.get(i).map(String::as_str);
    if digest_at(0) != Some(chain.push(&trace_line(&state)).as_str()) {
        return Ok(Verdict::Diverged { frame: 0 });
    }
    for (i, inputs) in log.input_trace.iter().enumerate() {
        if state.round_over.is_some() {
            return Ok(Verdict::Diverged { frame: i as u32 });
        }
        state = step(&state, ButtonChord::from_bits(inputs[0]), ButtonChord::from_bits(inputs[1]))
            .expect("round is live");
        if digest_at(i + 1) != Some(chain.push(&trace_line(&state)).as_str()) {
            return Ok(Verdict::Diverged { frame: i as u32 });
        }
    }
    let frames = log.input_trace.len() as u32;
    if log.state_digests.len() != log.input_trace.len() + 1 || chain.hex() != log.final_digest {
        return Ok(Verdict::Diverged { frame: frames });
    }
    let Some(replayed) = state.round_over else {
        return Ok(Verdict::Diverged { frame: frames });
    };
    if replayed != log.result {
        return Ok(Verdict::ResultMismatch { logged: log.result, replayed });
    }
    let counts = PlayerCounts {
        p1: ButtonCounts::from_trace(&log.input_trace, 0, log.config.count_mode),
        p2: ButtonCounts::from_trace(&log.input_trace, 1, log.config.count_mode),
    };
    if counts != log.button_counts {
        return Ok(Verdict::CountsMismatch);
    }
    Ok(Verdict::Match)
}
