//! Chord-sequence matching over a player's recent inputs.
//!
//! A trigger `[s1, ..., sn]` matches on the current frame when
//! - the current chord holds every button of `sn` and at least one of them
//!   was not held on the previous frame (a fresh press), and
//! - the earlier frames in the window, collapsed into runs of identical
//!   chords, contain distinct runs holding `s1 .. s(n-1)` in order.
//!
//! Any other runs may sit between matched steps.

use super::input::ButtonChord;

/// Collapses consecutive identical chords.
fn runs(frames: &[ButtonChord]) -> Vec<ButtonChord> {
    let mut out: Vec<ButtonChord> = Vec::with_capacity(frames.len());
    for &chord in frames {
        if out.last() != Some(&chord) {
            out.push(chord);
        }
    }
    out
}

/// `window` holds resolved chords, oldest first, ending with the current
/// frame. `trigger` holds absolute chords (facing already applied).
pub fn matches(window: &[ButtonChord], trigger: &[ButtonChord]) -> bool {
    let Some((&current, earlier)) = window.split_last() else {
        return false;
    };
    let Some((&last_step, prior_steps)) = trigger.split_last() else {
        return false;
    };
    let previous = earlier.last().copied().unwrap_or(ButtonChord::EMPTY);
    if !current.contains_all(last_step) || previous.contains_all(last_step) {
        return false;
    }
    let runs = runs(earlier);
    let mut upper = runs.len();
    for &step in prior_steps.iter().rev() {
        match runs[..upper].iter().rposition(|run| run.contains_all(step)) {
            Some(i) => upper = i,
            None => return false,
        }
    }
    true
}
