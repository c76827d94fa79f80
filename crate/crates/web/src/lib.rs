//! WebAssembly bindings for the browser demo in `www/`.

pub mod demo;

use wasm_bindgen::prelude::*;

/// A simulated bot match the page can scrub through.
#[wasm_bindgen]
pub struct MatchReplay(demo::Replay);

#[wasm_bindgen]
impl MatchReplay {
    #[wasm_bindgen(constructor)]
    pub fn new(p1: &str, p2: &str, seed: u32) -> Result<MatchReplay, JsError> {
        demo::Replay::simulate(p1, p2, u64::from(seed)).map(MatchReplay).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = frameCount)]
    pub fn frame_count(&self) -> usize {
        self.0.frame_count()
    }

    pub fn width() -> u32 {
        lmfa_core::observation::render::WIDTH as u32
    }

    pub fn height() -> u32 {
        lmfa_core::observation::render::HEIGHT as u32
    }

    pub fn rgba(&self, frame: usize, markers: bool) -> Vec<u8> {
        self.0.rgba(frame, markers)
    }

    #[wasm_bindgen(js_name = stateText)]
    pub fn state_text(&self, frame: usize) -> String {
        self.0.state_text(frame)
    }

    pub fn summary(&self) -> String {
        self.0.summary_json()
    }
}

#[wasm_bindgen(js_name = parseCommand)]
pub fn parse_command(text: &str, facing_right: bool) -> Result<String, JsError> {
    demo::plan_json(text, facing_right).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = runTournament)]
pub fn run_tournament(seed: u32, matches_per_pair: u32) -> Result<String, JsError> {
    demo::tournament_json(u64::from(seed), matches_per_pair).map_err(|e| JsError::new(&e))
}
