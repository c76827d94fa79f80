use lmfa_web::demo::{plan_json, policy, tournament_json, Replay};
use serde_json::Value;

#[test]
fn replay_scrubs_every_frame() {
    let replay = Replay::simulate("rushdown", "idle", 42).unwrap();
    let summary: Value = serde_json::from_str(&replay.summary_json()).unwrap();
    assert_eq!(summary["winner"], "rushdown-p1");
    assert_eq!(summary["winner_health_fraction"], "1.000");
    assert_eq!(summary["end_reason"], "knockout");
    let frames = summary["frames_elapsed"].as_u64().unwrap() as usize;
    assert_eq!(replay.frame_count(), frames + 1);

    let rgba = replay.rgba(0, false);
    assert_eq!(rgba.len(), 320 * 224 * 4);
    assert!(rgba.chunks(4).all(|p| p[3] == 255));
    assert_ne!(replay.rgba(0, true), rgba);
    assert_eq!(replay.rgba(usize::MAX, false), replay.rgba(frames, false));
    assert!(replay.state_text(0).starts_with("TIMER: 99 seconds\nYOU: health 1.000"));
}

#[test]
fn bots_can_face_themselves() {
    let replay = Replay::simulate("random", "random", 1).unwrap();
    assert!(replay.frame_count() > 1);
    assert!(Replay::simulate("boxer", "idle", 1).is_err());
    assert!(policy("zoner").is_ok());
}

#[test]
fn plan_follows_facing() {
    let right: Value = serde_json::from_str(&plan_json("Down, Forward, A", true).unwrap()).unwrap();
    assert_eq!(right["normalized"], "Down, Forward, A");
    assert_eq!(right["steps"][1]["buttons"], "Right");
    assert_eq!(right["steps"][2]["gap_frames"], 0);
    assert_eq!(right["total_frames"], 13);
    assert_eq!(right["timeline"].as_array().unwrap().len(), 13);

    let left: Value = serde_json::from_str(&plan_json("down,forward,a", false).unwrap()).unwrap();
    assert_eq!(left["steps"][1]["buttons"], "Left");
    assert_eq!(left["steps"][1]["tokens"][0], "Forward");

    assert!(plan_json("Punch", true).unwrap_err().contains("Punch"));
    assert!(plan_json("", true).is_err());
}

#[test]
fn tournament_is_deterministic() {
    let a = tournament_json(7, 1).unwrap();
    assert_eq!(a, tournament_json(7, 1).unwrap());
    let t: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(t["agents"].as_array().unwrap().len(), 4);
    assert_eq!(t["matrix"][0][0], "-");
    let rates: f64 = t["win_rates"].as_array().unwrap().iter().map(|r| r["win_rate"].as_f64().unwrap()).sum();
    assert!((rates - 2.0).abs() < 1e-9);
    let idle = t["heatmap"]["agents"].as_array().unwrap().iter().position(|a| a == "idle").unwrap();
    let row = &t["heatmap"]["normalized"][idle];
    assert_eq!(row[6], 1.0, "idle only blocks: {row}");
    assert!(tournament_json(7, 0).is_err());
}
