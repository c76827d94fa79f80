//! Deterministic fighting-game arena for benchmarking agents in mirror
//! matches.
//!
//! Agents read an observation (sampled frames plus a text description of
//! the game state), answer with a natural-language command such as
//! `"Down, Forward, A"`, and the command is compiled to timed button presses
//! and injected into a frame-stepped engine. Matches are grouped into a
//! round-robin tournament and summarized as a matchup matrix, win rates
//! and a button-press heatmap.

pub mod action;
pub mod engine;
pub mod gateway;
pub mod observation;
pub mod reporting;
pub mod tournament;
pub mod units;

pub use units::HealthFraction;
