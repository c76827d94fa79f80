use proptest::prelude::*;

use super::*;

fn chord(buttons: &[Button]) -> ButtonChord {
    buttons.iter().copied().collect()
}

fn fresh() -> GameState {
    new_match(EngineConfig::default(), 42).unwrap()
}

fn run(mut state: GameState, script: &[(ButtonChord, ButtonChord)]) -> Vec<GameState> {
    let mut out = vec![state.clone()];
    for &(a, b) in script {
        if state.round_over.is_some() {
            break;
        }
        state = step(&state, a, b).unwrap();
        out.push(state.clone());
    }
    out
}

#[test]
fn default_start_positions() {
    let s = fresh();
    assert_eq!((s.p1.x, s.p2.x), (120, 280));
    assert_eq!((s.p1.health, s.p2.health), (1000, 1000));
    assert_eq!((s.p1.facing, s.p2.facing), (Facing::Right, Facing::Left));
    assert_eq!(s.timer_frames, 5940);
    assert_eq!(s.frame, 0);
}

#[test]
fn start_is_symmetric() {
    for seed in [0, 1, 42, u64::MAX] {
        let s = new_match(EngineConfig::default(), seed).unwrap();
        assert_eq!(s.p1.reflected(400), s.p2);
        assert_eq!(mirror(&s), s);
    }
}

#[test]
fn invalid_configs_name_the_field() {
    let bad = EngineConfig { arena_width: 0, ..EngineConfig::default() };
    assert!(matches!(new_match(bad, 1), Err(EngineError::Config { field: "arena_width", .. })));
    let bad = EngineConfig { match_length_frames: 0, ..EngineConfig::default() };
    assert!(matches!(new_match(bad, 1), Err(EngineError::Config { field: "match_length_frames", .. })));
    let bad = EngineConfig { start_offset: 300, ..EngineConfig::default() };
    assert!(matches!(new_match(bad, 1), Err(EngineError::Config { field: "start_offset", .. })));
}

#[test]
fn idle_step_only_ticks_timer() {
    let s = fresh();
    let next = step(&s, ButtonChord::EMPTY, ButtonChord::EMPTY).unwrap();
    assert_eq!((next.p1.x, next.p2.x), (s.p1.x, s.p2.x));
    assert_eq!(next.timer_frames, s.timer_frames - 1);
    assert_eq!(next.frame, 1);
}

#[test]
fn walking_right_ten_frames() {
    let right = chord(&[Button::Right]);
    let states = run(fresh(), &[(right, ButtonChord::EMPTY); 10]);
    assert_eq!(states[10].p1.x, 150);
    assert_eq!(states[10].p1.phase, Phase::Walking);
}

#[test]
fn punch_lands_after_startup() {
    let mut s = fresh();
    s.p2.x = 150;
    let a = chord(&[Button::A]);
    let script = [(a, ButtonChord::EMPTY), (ButtonChord::EMPTY, ButtonChord::EMPTY)]
        .into_iter()
        .chain(std::iter::repeat_n((ButtonChord::EMPTY, ButtonChord::EMPTY), 8))
        .collect::<Vec<_>>();
    let states = run(s, &script);
    // Trigger on step 0, startup 4: the hit resolves on step 4.
    for st in &states[..5] {
        assert_eq!(st.p2.health, 1000);
    }
    assert_eq!(states[5].p2.health, 940);
    assert_eq!(states[5].p2.phase, Phase::Hitstun { frames_left: HITSTUN_FRAMES });
    // Single hit per move.
    assert_eq!(states[10].p2.health, 940);
}

#[test]
fn blocked_kick_deals_chip_only() {
    let mut s = fresh();
    s.p2.x = 170;
    let b = chord(&[Button::B]);
    let c = chord(&[Button::C]);
    let mut script = vec![(b, c)];
    script.extend(std::iter::repeat_n((ButtonChord::EMPTY, c), 10));
    let states = run(s, &script);
    let hit = states.iter().position(|st| st.p2.health < 1000).unwrap();
    assert_eq!(hit, 7);
    assert_eq!(states[hit].p2.health, 1000 - 8);
    assert_eq!(states[hit].p2.phase, Phase::Blocking);
    assert_eq!(states.last().unwrap().p2.health, 992);
}

/// Independent frame-by-frame hand trace of the flying kick: walking adds
/// 3 per held frame, the kick adds floor(120 * k / 18) from its origin over
/// k = 1..18 and lands on the first active frame (k >= 6) with distance
/// <= 30.
fn flying_kick_contact_oracle(start_x: i32, target_x: i32, script: &[ButtonChord]) -> Option<usize> {
    let mut x = start_x;
    let mut kick: Option<(usize, i32)> = None;
    for (t, chord) in script.iter().enumerate() {
        match kick {
            None => {
                if chord.contains(Button::C) {
                    kick = Some((t, x));
                } else if chord.contains(Button::Right) {
                    x += 3;
                }
            }
            Some((t0, origin)) => {
                let k = (t - t0) as i32;
                if k <= 18 {
                    x = (origin + 120 * k / 18).min(target_x - 20);
                }
                if (6..18).contains(&k) && target_x - x <= 30 {
                    return Some(t);
                }
            }
        }
    }
    None
}

#[test]
fn flying_kick_contact_frame_matches_hand_trace() {
    let r = chord(&[Button::Right]);
    let c = chord(&[Button::C]);
    let e = ButtonChord::EMPTY;
    let mut p1_script = vec![r, r, r, e, e, r, r, r, e, e, c, c, c];
    p1_script.extend(std::iter::repeat_n(e, 40));

    let expected = flying_kick_contact_oracle(120, 270, &p1_script).expect("oracle finds contact");
    assert_eq!(expected, 26);

    let mut s = fresh();
    s.p2.x = 270;
    let script: Vec<_> = p1_script.iter().map(|&a| (a, e)).collect();
    let states = run(s, &script);
    let contact = states.iter().position(|st| st.p2.health < 1000).unwrap() - 1;
    assert_eq!(contact, expected);
    assert_eq!(states[contact + 1].p2.health, 850);
    assert!(matches!(states[contact + 1].p2.phase, Phase::KnockedDown { .. }));
}

#[test]
fn flying_kick_needs_window() {
    let r = chord(&[Button::Right]);
    let c = chord(&[Button::C]);
    let e = ButtonChord::EMPTY;
    // Second tap outside the 20-frame window from the first: no kick.
    let mut script = vec![r];
    script.extend(std::iter::repeat_n(e, 20));
    script.extend([r, e, c]);
    let s = fresh();
    let states = run(s, &script.iter().map(|&a| (a, e)).collect::<Vec<_>>());
    assert_eq!(states.last().unwrap().p1.phase, Phase::Blocking);
}

#[test]
fn outcome_of_fresh_match_is_absent() {
    assert_eq!(outcome(&fresh()), None);
}

#[test]
fn knockout_reports_winner_health() {
    let mut s = fresh();
    s.p1.health = 250;
    s.p2.health = 0;
    let next = step(&s, ButtonChord::EMPTY, ButtonChord::EMPTY).unwrap();
    let o = outcome(&next).unwrap();
    assert_eq!(o.winner, Winner::P1);
    assert_eq!(o.winner_health_fraction, Some(HealthFraction::from_milli(250)));
    assert_eq!(o.end_reason, EndReason::Knockout);
    assert_eq!(o.winner_health_fraction.unwrap().to_string(), "0.250");
}

#[test]
fn timeout_with_equal_health_is_a_draw() {
    let mut s = fresh();
    s.p1.health = 400;
    s.p2.health = 400;
    s.timer_frames = 1;
    let next = step(&s, ButtonChord::EMPTY, ButtonChord::EMPTY).unwrap();
    let o = outcome(&next).unwrap();
    assert_eq!((o.winner, o.end_reason, o.winner_health_fraction), (Winner::Draw, EndReason::Timeout, None));
}

#[test]
fn timeout_goes_to_higher_health() {
    let mut s = fresh();
    s.p1.health = 400;
    s.p2.health = 401;
    s.timer_frames = 1;
    let o = outcome(&step(&s, ButtonChord::EMPTY, ButtonChord::EMPTY).unwrap()).unwrap();
    assert_eq!(o.winner, Winner::P2);
    assert_eq!(o.winner_health_fraction.unwrap().milli(), 401);
}

#[test]
fn stepping_a_finished_round_fails() {
    let mut s = fresh();
    s.timer_frames = 1;
    let done = step(&s, ButtonChord::EMPTY, ButtonChord::EMPTY).unwrap();
    assert_eq!(step(&done, ButtonChord::EMPTY, ButtonChord::EMPTY), Err(EngineError::RoundOver));
}

#[test]
fn simultaneous_knockout_is_double_ko() {
    let mut s = fresh();
    s.p1.health = 60;
    s.p2.health = 60;
    s.p1.x = 185;
    s.p2.x = 215;
    let a = chord(&[Button::A]);
    let e = ButtonChord::EMPTY;
    let states = run(s, &[(a, a), (e, e), (e, e), (e, e), (e, e), (e, e)]);
    let o = outcome(states.last().unwrap()).unwrap();
    assert_eq!(o.end_reason, EndReason::DoubleKo);
    assert_eq!(o.winner, Winner::Draw);
}

#[test]
fn one_projectile_per_player() {
    let mut s = fresh();
    s.p1.x = 20;
    s.p2.x = 380;
    let d = chord(&[Button::Down]);
    let r = chord(&[Button::Right]);
    let a = chord(&[Button::A]);
    let e = ButtonChord::EMPTY;
    let motion = [d, d, e, r, r, e, a, a];
    let mut script: Vec<_> = motion.iter().map(|&c| (c, e)).collect();
    script.extend(std::iter::repeat_n((e, e), 32));
    script.extend(motion.iter().map(|&c| (c, e)));
    script.extend(std::iter::repeat_n((e, e), 10));
    let states = run(s, &script);
    assert!(states.iter().all(|st| st.projectiles.len() <= 1));
    let fired_at = states.iter().position(|st| !st.projectiles.is_empty()).unwrap();
    // Trigger on step 6, spawn on the first active frame.
    assert_eq!(fired_at, 6 + 10 + 1);
    // The second motion, issued while the fireball is live, falls through to a punch.
    let second = &states[8 + 32 + 7];
    assert!(
        matches!(second.p1.phase, Phase::MoveActive { move_id, .. } if MoveTable::standard().get(move_id).id == "punch"),
        "{:?}",
        second.p1.phase
    );
}

#[test]
fn fireball_hits_at_range() {
    let mut s = fresh();
    let d = chord(&[Button::Down]);
    let r = chord(&[Button::Right]);
    let a = chord(&[Button::A]);
    let e = ButtonChord::EMPTY;
    let mut script: Vec<_> = [d, e, r, e, a].iter().map(|&c| (c, e)).collect();
    script.extend(std::iter::repeat_n((e, e), 40));
    s.p2.x = 280;
    let states = run(s, &script);
    let last = states.last().unwrap();
    assert_eq!(last.p2.health, 910);
    assert!(last.projectiles.is_empty());
}

#[test]
fn jump_is_a_fixed_arc() {
    let up_fwd = chord(&[Button::Up, Button::Right]);
    let e = ButtonChord::EMPTY;
    let mut script = vec![(up_fwd, e)];
    script.extend(std::iter::repeat_n((e, e), 40));
    let states = run(fresh(), &script);
    let apex = states.iter().map(|s| s.p1.y).max().unwrap();
    assert_eq!(apex, JUMP_APEX);
    assert_eq!(states[1 + JUMP_FRAMES as usize].p1.y, 0);
    assert_eq!(states[1 + JUMP_FRAMES as usize].p1.x, 120 + JUMP_DRIFT);
    assert_eq!(states[1 + JUMP_FRAMES as usize].p1.phase, Phase::Idle);
}

#[test]
fn trigger_matcher_agrees_with_brute_force() {
    // Alphabet: Right, C, neutral. The flying kick fires exactly on strings
    // with two separated Right runs followed later by a fresh C press.
    let pattern = regex::Regex::new(r"R[^R]+R(?:.*[^C])?C$").unwrap();
    let letters = ['R', 'C', 'N'];
    let to_chord = |ch: char| match ch {
        'R' => chord(&[Button::Right]),
        'C' => chord(&[Button::C]),
        _ => ButtonChord::EMPTY,
    };
    let table = MoveTable::standard();
    let fk = table.get(table.find("flying_kick").unwrap()).trigger_chords(Facing::Right);
    let mut checked = 0;
    for len in 1..=5u32 {
        for code in 0..3usize.pow(len) {
            let mut n = code;
            let s: String = (0..len)
                .map(|_| {
                    let c = letters[n % 3];
                    n /= 3;
                    c
                })
                .collect();
            let window: Vec<ButtonChord> = s.chars().map(to_chord).collect();
            assert_eq!(trigger::matches(&window, &fk), pattern.is_match(&s), "{s}");
            checked += 1;
        }
    }
    assert_eq!(checked, 3 + 9 + 27 + 81 + 243);
}

fn arb_chord() -> impl Strategy<Value = ButtonChord> {
    any::<u8>().prop_map(ButtonChord::from_bits)
}

/// Input scripts as runs of held chord pairs, which reach special moves far
/// more often than per-frame noise.
fn arb_script() -> impl Strategy<Value = Vec<(ButtonChord, ButtonChord)>> {
    proptest::collection::vec((arb_chord(), arb_chord(), 1usize..8), 1..120).prop_map(|runs| {
        runs.into_iter().flat_map(|(a, b, n)| std::iter::repeat_n((a, b), n)).collect()
    })
}

fn short_config() -> EngineConfig {
    EngineConfig { match_length_frames: 600, ..EngineConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn health_never_increases_and_positions_stay_in_bounds(script in arb_script()) {
        let s0 = new_match(short_config(), 3).unwrap();
        let states = run(s0, &script);
        for w in states.windows(2) {
            prop_assert!(w[1].p1.health <= w[0].p1.health);
            prop_assert!(w[1].p2.health <= w[0].p2.health);
            prop_assert_eq!(w[1].timer_frames + 1, w[0].timer_frames);
        }
        for s in &states {
            for f in [&s.p1, &s.p2] {
                prop_assert!((0..=400).contains(&f.x));
                prop_assert!(f.y >= 0);
                if !matches!(f.phase, Phase::Jumping { .. } | Phase::KnockedDown { .. }) {
                    prop_assert_eq!(f.y, 0);
                }
                prop_assert!(f.last_actions.len() <= ACTION_HISTORY);
            }
            prop_assert!(s.timer_frames <= 600);
        }
    }

    #[test]
    fn step_commutes_with_mirror(script in arb_script()) {
        let s0 = new_match(short_config(), 9).unwrap();
        let states = run(s0.clone(), &script);
        let mirrored_script: Vec<_> = script.iter().map(|&(a, b)| (b.reflected(), a.reflected())).collect();
        let mirrored = run(mirror(&s0), &mirrored_script);
        prop_assert_eq!(states.len(), mirrored.len());
        for (s, m) in states.iter().zip(&mirrored) {
            prop_assert_eq!(&mirror(s), m);
        }
    }

    #[test]
    fn mirror_is_an_involution(script in arb_script()) {
        let states = run(new_match(short_config(), 5).unwrap(), &script);
        for s in &states {
            prop_assert_eq!(&mirror(&mirror(s)), s);
        }
    }

    #[test]
    fn stepping_is_deterministic(script in arb_script()) {
        let a = run(new_match(short_config(), 11).unwrap(), &script);
        let b = run(new_match(short_config(), 11).unwrap(), &script);
        let ta: Vec<String> = a.iter().map(trace::trace_line).collect();
        let tb: Vec<String> = b.iter().map(trace::trace_line).collect();
        prop_assert_eq!(ta, tb);
    }
}
