use serde::{Deserialize, Serialize};

use crate::action::{Token, MAX_CHORD_TOKENS, MAX_STEPS};
use crate::engine::FRAMES_PER_SECOND;
use crate::observation::{SAMPLE_INTERVAL, WINDOW_FRAMES};

pub const PROMPT_VERSION: &str = "lmfa-prompt/1";

/// The match parameters the prompt mentions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptConfig {
    pub match_length_frames: u32,
    pub decision_interval_frames: u32,
}

/// The system prompt shared by every remote agent in a run.
pub fn build_system_prompt(config: &PromptConfig) -> String {
    let seconds = config.match_length_frames / FRAMES_PER_SECOND;
    let vocabulary = Token::VOCABULARY.join(", ");
    format!(
        "[{PROMPT_VERSION}]
You control one fighter in a one-on-one 2D fighting game. Both fighters use the same character.

OBJECTIVE
Reduce your opponent's health to 0 before the {seconds}-second timer runs out. If time expires, the fighter with more health wins.

WHAT YOU RECEIVE
Every {interval} frames ({fps} frames per second) you get:
- Up to {window} screenshots taken {sample} frames apart, oldest first. A red box labelled P1 and a blue box labelled P2 mark the fighters.
- A text summary in this exact format:
  TIMER: <seconds> seconds
  YOU: health <0.000-1.000>, position (<x>,<y>), facing <right|left>
  OPPONENT: health <0.000-1.000>, position (<x>,<y>), facing <right|left>
  YOUR LAST 5 ACTIONS: <command>; <command>; ...
  OPPONENT LAST 5 ACTIONS: <command>; <command>; ...
x grows to the right; y is height above the floor.

COMMANDS
Tokens: {vocabulary}.
Block is the same as C, Jump the same as Up, Crouch the same as Down.
Forward and Back are relative to the way you face; Left and Right are absolute.
Join up to {chord} tokens with + to press them together, for example: Left + A
Separate up to {steps} presses with commas to press them in order, for example: Down, Forward, A
A, B and C are the punch, kick and block buttons. Known special inputs:
- Down, Forward, A: fireball
- Forward, Forward, C: flying kick
- Down + A: uppercut
- Down + B: low kick
Your command runs until the next update, then the world waits for your next reply.

REPLY
Think briefly if you like, then end your reply with exactly one command on its own final line.",
        interval = config.decision_interval_frames,
        fps = FRAMES_PER_SECOND,
        window = WINDOW_FRAMES,
        sample = SAMPLE_INTERVAL,
        chord = MAX_CHORD_TOKENS,
        steps = MAX_STEPS,
    )
}
