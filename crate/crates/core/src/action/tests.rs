use proptest::prelude::*;

use super::*;

fn chord(tokens: &[Token]) -> ChordSpec {
    ChordSpec::new(tokens)
}

#[test]
fn reference_command_strings() {
    assert_eq!(parse("Left + A").unwrap().steps, vec![chord(&[Token::Left, Token::A])]);
    assert_eq!(
        parse("Down, Forward, A").unwrap().steps,
        vec![chord(&[Token::Down]), chord(&[Token::Forward]), chord(&[Token::A])]
    );
    assert_eq!(
        parse("Forward, Forward, C").unwrap().steps,
        vec![chord(&[Token::Forward]), chord(&[Token::Forward]), chord(&[Token::C])]
    );
}

#[test]
fn normalization() {
    let cmd = parse("forward , forward ,c").unwrap();
    assert_eq!(cmd.normalized, "Forward, Forward, C");
    assert_eq!(cmd.raw, "forward , forward ,c");
    assert_eq!(parse("a+LEFT").unwrap().normalized, "Left + A");
}

#[test]
fn aliases() {
    assert_eq!(parse("Block").unwrap().normalized, "C");
    assert_eq!(parse("jump + forward").unwrap().normalized, "Up + Forward");
    assert_eq!(parse("Crouch + B").unwrap().normalized, "Down + B");
}

#[test]
fn error_cases() {
    assert_eq!(parse(""), Err(ParseError::EmptyCommand));
    assert_eq!(parse("   "), Err(ParseError::EmptyCommand));
    assert_eq!(parse("Left + Right"), Err(ParseError::ConflictingDirections { index: 0 }));
    assert_eq!(parse("A, Jump + Crouch"), Err(ParseError::ConflictingDirections { index: 1 }));
    assert_eq!(parse("Forward + Left"), Err(ParseError::ConflictingDirections { index: 0 }));
    assert_eq!(parse("A, A, A, A, A, A"), Err(ParseError::TooManySteps(6)));
    assert_eq!(parse("A + B + C + Up"), Err(ParseError::TooManyButtons { index: 0, count: 4 }));
    assert_eq!(parse("A, , B"), Err(ParseError::EmptyChord { index: 1 }));
    assert_eq!(parse("A +"), Err(ParseError::EmptyChord { index: 0 }));
    assert_eq!(
        parse("Down, Fwd, A"),
        Err(ParseError::UnknownToken { token: "Fwd".into(), position: 6 })
    );
}

#[test]
fn error_messages_are_stable() {
    assert_eq!(ParseError::EmptyCommand.to_string(), "empty command");
    assert_eq!(parse("Left + Right").unwrap_err().to_string(), "conflicting directions in step 0");
    assert_eq!(parse("A, X").unwrap_err().to_string(), "unknown token \"X\" at byte 3");
    assert_eq!(parse("A,A,A,A,A,A").unwrap_err().to_string(), "too many steps: 6 (max 5)");
}

#[test]
fn resolve_forward_follows_facing() {
    let cmd = parse("Forward").unwrap();
    let right = ButtonChord::EMPTY.with(Button::Right);
    let left = ButtonChord::EMPTY.with(Button::Left);
    assert_eq!(
        resolve(&cmd, Facing::Right).frames,
        vec![PlanStep { chord: right, hold_frames: 3, gap_frames: 0 }]
    );
    assert_eq!(
        resolve(&cmd, Facing::Left).frames,
        vec![PlanStep { chord: left, hold_frames: 3, gap_frames: 0 }]
    );
}

#[test]
fn resolve_motion_timing() {
    let plan = resolve(&parse("Down, Forward, A").unwrap(), Facing::Right);
    assert_eq!(plan.total_frames(), 13);
    let d = ButtonChord::EMPTY.with(Button::Down);
    let r = ButtonChord::EMPTY.with(Button::Right);
    let a = ButtonChord::EMPTY.with(Button::A);
    let e = ButtonChord::EMPTY;
    assert_eq!(plan.expand(), vec![d, d, d, e, e, r, r, r, e, e, a, a, a]);
}

#[test]
fn plan_cap_drops_trailing_steps() {
    let cmd = parse("A, B, C").unwrap();
    let plan = resolve_with(&cmd, Facing::Right, Timing { hold_frames: 50, gap_frames: 10 });
    assert!(plan.total_frames() <= MAX_PLAN_FRAMES);
    assert_eq!(plan.frames.len(), 2);
    assert_eq!(plan.frames[1].gap_frames, 0);
}

#[test]
fn format_examples() {
    let cmd = Command::from_steps(vec![chord(&[Token::Left, Token::A])]).unwrap();
    assert_eq!(format(&cmd), "Left + A");
    let cmd = Command::from_steps(vec![chord(&[Token::Down]), chord(&[Token::Right]), chord(&[Token::A])]).unwrap();
    assert_eq!(format(&cmd), "Down, Right, A");
}

fn arb_chord_spec() -> impl Strategy<Value = ChordSpec> {
    let vertical = prop_oneof![Just(None), Just(Some(Token::Up)), Just(Some(Token::Down))];
    let horizontal = prop_oneof![
        Just(None),
        Just(Some(Token::Left)),
        Just(Some(Token::Right)),
        Just(Some(Token::Forward)),
        Just(Some(Token::Back)),
    ];
    let buttons = proptest::sample::subsequence(vec![Token::A, Token::B, Token::C], 0..=3);
    (vertical, horizontal, buttons).prop_filter_map("1 to 3 tokens", |(v, h, b)| {
        let tokens: Vec<Token> = v.into_iter().chain(h).chain(b).collect();
        (1..=MAX_CHORD_TOKENS).contains(&tokens.len()).then(|| ChordSpec::new(&tokens))
    })
}

fn arb_command() -> impl Strategy<Value = Command> {
    proptest::collection::vec(arb_chord_spec(), 1..=MAX_STEPS)
        .prop_map(|steps| Command::from_steps(steps).expect("generated steps are valid"))
}

fn relative_only(cmd: &Command) -> bool {
    cmd.steps.iter().all(|s| !s.contains(Token::Left) && !s.contains(Token::Right))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn format_round_trips(cmd in arb_command()) {
        let text = format(&cmd);
        prop_assert_eq!(parse(&text).unwrap(), cmd.clone());
        prop_assert_eq!(text, cmd.normalized.clone());
    }

    #[test]
    fn parse_is_total(bytes in proptest::collection::vec(any::<u8>(), 0..4096)) {
        let text = String::from_utf8_lossy(&bytes);
        let _ = parse(&text);
        let _ = extract_command(&text);
    }

    #[test]
    fn plans_are_bounded(cmd in arb_command(), right in any::<bool>()) {
        let facing = if right { Facing::Right } else { Facing::Left };
        let plan = resolve(&cmd, facing);
        prop_assert!(plan.total_frames() >= 1);
        prop_assert!(plan.total_frames() <= MAX_PLAN_FRAMES);
        prop_assert!(plan.frames.iter().all(|s| s.hold_frames >= 1));
    }

    #[test]
    fn facing_antisymmetry(cmd in arb_command()) {
        let r = resolve(&cmd, Facing::Right);
        let l = resolve(&cmd, Facing::Left);
        if relative_only(&cmd) {
            let swapped: Vec<ButtonChord> = l.expand().iter().map(|c| c.reflected()).collect();
            prop_assert_eq!(r.expand(), swapped);
        } else {
            // Absolute directions ignore facing; relative ones still flip.
            prop_assert_eq!(r.frames.len(), l.frames.len());
        }
    }
}
