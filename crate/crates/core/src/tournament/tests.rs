use super::*;
use crate::engine::{EndReason, Winner};
use crate::gateway::BotPolicy;
use crate::units::HealthFraction;

fn bot(id: &str, policy: BotPolicy) -> AgentSpec {
    AgentSpec::scripted(id, policy)
}

fn short_config() -> MatchConfig {
    MatchConfig { match_length_frames: 600, ..MatchConfig::default() }
}

#[test]
fn rushdown_beats_idle_untouched() {
    let log = run_match(&bot("rush", BotPolicy::Rushdown), &bot("idle", BotPolicy::Idle), &MatchConfig::default().with_seed(1))
        .unwrap();
    assert_eq!(log.result.winner, Winner::P1);
    assert_eq!(log.result.end_reason, EndReason::Knockout);
    assert_eq!(log.result.winner_health_fraction, Some(HealthFraction::FULL));
    assert_eq!(log.winner_id(), Some("rush"));

    let swapped = run_match(&bot("idle", BotPolicy::Idle), &bot("rush", BotPolicy::Rushdown), &MatchConfig::default().with_seed(1))
        .unwrap();
    assert_eq!(swapped.winner_id(), Some("rush"));
    assert_eq!(swapped.result.winner_health_fraction, Some(HealthFraction::FULL));
}

#[test]
fn idle_vs_idle_is_a_timeout_draw() {
    let log = run_match(&bot("a", BotPolicy::Idle), &bot("b", BotPolicy::Idle), &short_config()).unwrap();
    assert_eq!(log.result.winner, Winner::Draw);
    assert_eq!(log.result.end_reason, EndReason::Timeout);
    assert_eq!(log.result.winner_health_fraction, None);
    assert_eq!(log.result.frames_elapsed, 600);
}

#[test]
fn decision_ticks_and_trace_lengths() {
    for interval in [1, 7, 40, 41, 600, 1000] {
        let config = MatchConfig { decision_interval_frames: interval, ..short_config() };
        let log = run_match(&bot("a", BotPolicy::Random), &bot("b", BotPolicy::Zoner), &config).unwrap();
        let frames = log.result.frames_elapsed;
        let ticks = frames.div_ceil(interval) as usize;
        assert_eq!(log.decisions.len(), 2 * ticks, "interval {interval}");
        for (i, pair) in log.decisions.chunks(2).enumerate() {
            assert_eq!(pair[0].player, crate::engine::Player::P1);
            assert_eq!(pair[1].player, crate::engine::Player::P2);
            assert_eq!(pair[0].tick as usize, i);
            assert_eq!(pair[0].decision.frame_issued, i as u32 * interval);
        }
        assert_eq!(log.input_trace.len(), frames as usize);
        assert_eq!(log.state_digests.len(), frames as usize + 1);
    }
}

#[test]
fn plans_truncate_at_the_next_tick() {
    // A 13-frame motion with a 5-frame interval: only 5 frames run per tick.
    let config = MatchConfig { decision_interval_frames: 5, ..short_config() };
    let script = BotPolicy::Script(vec!["Down, Forward, A".into()]);
    let log = run_match(&bot("a", script), &bot("b", BotPolicy::Idle), &config).unwrap();
    let down = crate::engine::Button::Down.bit();
    let right = crate::engine::Button::Right.bit();
    let first: Vec<u8> = log.input_trace[..10].iter().map(|f| f[0]).collect();
    assert_eq!(first, [down, down, down, 0, 0, down, down, down, 0, 0]);
    assert!(log.input_trace.iter().all(|f| f[0] & crate::engine::Button::A.bit() == 0));
    assert!(log.input_trace.iter().all(|f| f[0] & right == 0));
}

#[test]
fn button_counts_fold_the_trace() {
    let log = run_match(&bot("a", BotPolicy::Random), &bot("b", BotPolicy::Rushdown), &short_config()).unwrap();
    for (slot, counts) in [(0, log.button_counts.p1), (1, log.button_counts.p2)] {
        let mut manual = [0u64; 8];
        for frame in &log.input_trace {
            for (bit, total) in manual.iter_mut().enumerate() {
                *total += u64::from(frame[slot] >> bit & 1);
            }
        }
        assert_eq!(counts.0, manual);
    }
}

#[test]
fn press_counting_counts_edges() {
    let trace = [[1u8, 0], [1, 0], [0, 0], [1, 0], [3, 0]];
    assert_eq!(ButtonCounts::from_trace(&trace, 0, CountMode::Frames).0[..2], [4, 1]);
    assert_eq!(ButtonCounts::from_trace(&trace, 0, CountMode::Presses).0[..2], [2, 1]);
}

#[test]
fn log_json_round_trips() {
    let log = run_match(&bot("a", BotPolicy::Random), &bot("b", BotPolicy::Zoner), &short_config()).unwrap();
    let text = log.to_json();
    let back: MatchLog = serde_json::from_str(&text).unwrap();
    assert_eq!(back, log);
    assert_eq!(back.to_json(), text);
    assert!(text.starts_with("{\"schema\":\"lmfa-log/1\""));
}

#[test]
fn config_errors() {
    let a = bot("a", BotPolicy::Idle);
    let b = bot("b", BotPolicy::Idle);
    let bad = MatchConfig { decision_interval_frames: 0, ..MatchConfig::default() };
    assert!(matches!(run_match(&a, &b, &bad), Err(TournamentError::Config(_))));
    let bad = MatchConfig { best_of: 3, ..MatchConfig::default() };
    assert!(matches!(run_match(&a, &b, &bad), Err(TournamentError::Config(_))));
    let bad = MatchConfig { arena_width: 0, ..MatchConfig::default() };
    assert!(matches!(run_match(&a, &b, &bad), Err(TournamentError::Engine(_))));
    assert!(matches!(run_match(&a, &a, &MatchConfig::default()), Err(TournamentError::Setup(_))));
    let json = r#"{"arena_width": 400, "sede": 3}"#;
    assert!(serde_json::from_str::<MatchConfig>(json).is_err());
}

#[test]
fn schedule_shape() {
    assert_eq!(schedule(6, 0, 1).len(), 15);
    assert_eq!(schedule(2, 0, 1).len(), 1);
    let s = schedule(4, 42, 3);
    assert_eq!(s.len(), 18);
    assert_eq!(s[0].seed, 42);
    assert_eq!(s[4].seed, 42 + 1000 + 1);
    for pair in s.chunks(3) {
        let row_as_p1 = pair.iter().filter(|m| m.p1 == m.row).count();
        assert!((1..=2).contains(&row_as_p1));
        assert!(pair.windows(2).all(|w| w[0].p1 != w[1].p1));
    }
    assert_eq!(log_file_name(3, 1, "x", "y"), "match_3_1_x_vs_y.json");
}

fn four_bots() -> Vec<AgentSpec> {
    vec![
        bot("idle", BotPolicy::Idle),
        bot("random", BotPolicy::Random),
        bot("rushdown", BotPolicy::Rushdown),
        bot("zoner", BotPolicy::Zoner),
    ]
}

#[test]
fn round_robin_is_parallel_invariant() {
    let config = short_config().with_seed(42);
    let serial = run_round_robin(&four_bots(), &config, 2, 1).unwrap();
    let parallel = run_round_robin(&four_bots(), &config, 2, 4).unwrap();
    assert_eq!(serial.result, parallel.result);
    assert_eq!(serial.logs, parallel.logs);
    assert_eq!(serial.logs.len(), 12);
    assert_eq!(serial.result.matrix.len(), 6);

    let mut shuffled = serial.logs.clone();
    shuffled.reverse();
    assert_eq!(TournamentResult::from_logs(&serial.result.agents, &shuffled).unwrap(), serial.result);
}

#[test]
fn win_accounting_balances() {
    let t = run_round_robin(&four_bots(), &short_config().with_seed(7), 1, 2).unwrap();
    let matches = t.logs.len() as f64;
    let credit: f64 = t.result.standings.iter().map(|s| f64::from(s.wins) + 0.5 * f64::from(s.draws)).sum();
    assert_eq!(credit, matches);
    let n = t.result.agents.len() as f64;
    let rates: f64 = t.result.standings.iter().map(|s| s.win_rate).sum();
    assert!((rates - n / 2.0).abs() < 1e-12);
    for cell in &t.result.matrix {
        match cell.outcome {
            CellOutcome::Draw => assert_eq!(cell.winner_health_fraction, None),
            _ => assert!(cell.winner_health_fraction.unwrap() > HealthFraction::ZERO),
        }
    }
}

#[test]
fn round_robin_setup_errors() {
    let one = vec![bot("a", BotPolicy::Idle)];
    assert!(matches!(run_round_robin(&one, &short_config(), 1, 1), Err(TournamentError::TooFewAgents(1))));
    let dup = vec![bot("a", BotPolicy::Idle), bot("a", BotPolicy::Random)];
    assert!(matches!(run_round_robin(&dup, &short_config(), 1, 1), Err(TournamentError::Setup(_))));
    let bad_script = vec![bot("a", BotPolicy::Idle), bot("b", BotPolicy::Script(vec!["Punch".into()]))];
    assert!(matches!(run_round_robin(&bad_script, &short_config(), 1, 1), Err(TournamentError::Setup(_))));
}

#[test]
fn missing_pair_is_an_integrity_error() {
    let t = run_round_robin(&four_bots(), &short_config(), 1, 1).unwrap();
    let partial = &t.logs[1..];
    assert!(matches!(TournamentResult::from_logs(&t.result.agents, partial), Err(TournamentError::Integrity(_))));
}
