//! Flat-colour rasterizer standing in for the emulator's video output.

use crate::engine::{GameState, MoveTable, Phase, Player, JUMP_APEX};
use crate::units::HEALTH_MAX;

use super::ObservationError;

pub const WIDTH: usize = 320;
pub const HEIGHT: usize = 224;
pub const GROUND_ROW: i32 = 200;
pub const FIGHTER_HEIGHT: i32 = 56;
/// Half-width of a standing fighter in game units.
pub const FIGHTER_HALF_WIDTH: i32 = 12;
const DOWNED_HALF_WIDTH: i32 = 24;
const DOWNED_HEIGHT: i32 = 14;
const PROJECTILE_HALF: i32 = 6;

pub const BAR_WIDTH: usize = 128;
pub const BAR_TOP: usize = 6;
pub const BAR_BOTTOM: usize = 14;
pub const P1_BAR_LEFT: usize = 8;
pub const P2_BAR_LEFT: usize = WIDTH - 8 - BAR_WIDTH;

/// Region holding the timer digits: (left, top, right, bottom), exclusive.
pub const TIMER_BOX: (usize, usize, usize, usize) = (148, 4, 172, 16);

pub const MARKER_WIDTH: i32 = 17;
pub const MARKER_HEIGHT: i32 = 9;
const MARKER_GAP: i32 = 3;

type Rgb = [u8; 3];

const SKY: Rgb = [36, 40, 64];
const FLOOR: Rgb = [92, 70, 48];
const BAR_EMPTY: Rgb = [140, 10, 10];
const BAR_FULL: Rgb = [230, 210, 0];
const TIMER: Rgb = [250, 250, 250];
const PROJECTILE: Rgb = [80, 240, 120];
const P1_MARKER: Rgb = [255, 70, 70];
const P2_MARKER: Rgb = [70, 160, 255];
const GLYPH: Rgb = [255, 255, 255];

/// A row-major RGB image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
    annotated: bool,
}

impl FrameImage {
    pub fn filled(width: usize, height: usize, color: Rgb) -> Self {
        let pixels = color.iter().copied().cycle().take(width * height * 3).collect();
        FrameImage { width, height, pixels, annotated: false }
    }

    pub fn is_annotated(&self) -> bool {
        self.annotated
    }

    pub fn pixel(&self, x: usize, y: usize) -> Rgb {
        let i = (y * self.width + x) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    fn put(&mut self, x: i32, y: i32, color: Rgb) {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            return;
        }
        let i = (y as usize * self.width + x as usize) * 3;
        self.pixels[i..i + 3].copy_from_slice(&color);
    }

    fn fill_rect(&mut self, left: i32, top: i32, right: i32, bottom: i32, color: Rgb) {
        for y in top.max(0)..bottom.min(self.height as i32) {
            for x in left.max(0)..right.min(self.width as i32) {
                self.put(x, y, color);
            }
        }
    }

    /// Binary portable pixmap (P6).
    pub fn to_ppm(&self) -> Vec<u8> {
        let header = format!("P6\n{} {}\n255\n", self.width, self.height);
        let mut out = Vec::with_capacity(header.len() + self.pixels.len());
        out.extend_from_slice(header.as_bytes());
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn from_ppm(bytes: &[u8]) -> Option<FrameImage> {
        let mut fields = Vec::with_capacity(4);
        let mut pos = 0;
        while fields.len() < 4 {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return None;
            }
            fields.push(std::str::from_utf8(&bytes[start..pos]).ok()?);
        }
        pos += 1;
        if fields[0] != "P6" || fields[3] != "255" {
            return None;
        }
        let width: usize = fields[1].parse().ok()?;
        let height: usize = fields[2].parse().ok()?;
        let pixels = bytes.get(pos..)?.to_vec();
        if pixels.len() != width * height * 3 {
            return None;
        }
        Some(FrameImage { width, height, pixels, annotated: false })
    }

    /// RGBA bytes, for canvas `ImageData`.
    pub fn to_rgba(&self) -> Vec<u8> {
        self.pixels.chunks_exact(3).flat_map(|p| [p[0], p[1], p[2], 255]).collect()
    }

    #[cfg(feature = "remote")]
    pub fn to_png(&self) -> Vec<u8> {
        let mut out = Vec::new();
        {
            let mut encoder = png::Encoder::new(&mut out, self.width as u32, self.height as u32);
            encoder.set_color(png::ColorType::Rgb);
            encoder.set_depth(png::BitDepth::Eight);
            let mut writer = encoder.write_header().expect("png header to memory");
            writer.write_image_data(&self.pixels).expect("png data to memory");
        }
        out
    }
}

/// Columns whose pixel centres fall within `[x - half, x + half]` game
/// units. Symmetric under `x -> width - x`.
fn column_span(x: i32, half: i32, arena_width: i32) -> (i32, i32) {
    let w = i64::from(arena_width);
    let scale = 2 * WIDTH as i64;
    let lo = scale * i64::from(x - half);
    let hi = scale * i64::from(x + half);
    // Pixel c is covered when lo <= (2c + 1) * w <= hi.
    let first = (lo - w).div_euclid(2 * w) + i64::from((lo - w).rem_euclid(2 * w) != 0);
    let last = (hi - w).div_euclid(2 * w);
    (first as i32, last as i32 + 1)
}

/// Screen-space x centre of a game x coordinate.
pub fn screen_x(x: i32, arena_width: i32) -> f64 {
    f64::from(x) * WIDTH as f64 / f64::from(arena_width)
}

fn fighter_rect(x: i32, y: i32, phase: Phase, arena_width: i32) -> Rect {
    let (half, height) = match phase {
        Phase::KnockedDown { .. } => (DOWNED_HALF_WIDTH, DOWNED_HEIGHT),
        _ => (FIGHTER_HALF_WIDTH, FIGHTER_HEIGHT),
    };
    let (left, right) = column_span(x, half, arena_width);
    let bottom = GROUND_ROW - y;
    (left, bottom - height, right, bottom)
}

fn phase_color(phase: Phase, table: &MoveTable) -> Rgb {
    match phase {
        Phase::Idle => [200, 180, 60],
        Phase::Walking => [220, 200, 90],
        Phase::Jumping { .. } => [110, 200, 240],
        Phase::Blocking => [80, 120, 220],
        Phase::MoveActive { move_id, frame_in_move, .. } => {
            if table.get(move_id).is_active(frame_in_move) {
                [240, 60, 40]
            } else {
                [230, 140, 40]
            }
        }
        Phase::Hitstun { .. } => [250, 250, 250],
        Phase::KnockedDown { .. } => [120, 120, 120],
    }
}

const FONT: [(char, [u8; 5]); 11] = [
    ('0', [0b111, 0b101, 0b101, 0b101, 0b111]),
    ('1', [0b010, 0b110, 0b010, 0b010, 0b111]),
    ('2', [0b111, 0b001, 0b111, 0b100, 0b111]),
    ('3', [0b111, 0b001, 0b111, 0b001, 0b111]),
    ('4', [0b101, 0b101, 0b111, 0b001, 0b001]),
    ('5', [0b111, 0b100, 0b111, 0b001, 0b111]),
    ('6', [0b111, 0b100, 0b111, 0b101, 0b111]),
    ('7', [0b111, 0b001, 0b010, 0b010, 0b010]),
    ('8', [0b111, 0b101, 0b111, 0b101, 0b111]),
    ('9', [0b111, 0b101, 0b111, 0b001, 0b111]),
    ('P', [0b111, 0b101, 0b111, 0b100, 0b100]),
];

fn draw_text(img: &mut FrameImage, text: &str, left: i32, top: i32, scale: i32, color: Rgb) {
    let mut x0 = left;
    for ch in text.chars() {
        if let Some((_, rows)) = FONT.iter().find(|(c, _)| *c == ch) {
            for (r, bits) in rows.iter().enumerate() {
                for col in 0..3 {
                    if bits & (0b100 >> col) != 0 {
                        let px = x0 + col * scale;
                        let py = top + r as i32 * scale;
                        img.fill_rect(px, py, px + scale, py + scale, color);
                    }
                }
            }
        }
        x0 += 4 * scale;
    }
}

/// Rasterizes a state: background, fighters coloured by phase, health bars,
/// timer digits and projectiles.
/// Left, top, right, bottom in pixels.
type Rect = (i32, i32, i32, i32);

pub fn render(state: &GameState) -> FrameImage {
    let table = MoveTable::standard();
    let width = state.config.arena_width;
    let mut img = FrameImage::filled(WIDTH, HEIGHT, SKY);
    img.fill_rect(0, GROUND_ROW, WIDTH as i32, HEIGHT as i32, FLOOR);

    // Overlaps are painted in an order that depends on what is drawn, not
    // on which player it is, so mirrored states render mirrored.
    let mut bodies: Vec<(i32, Rgb, Rect)> = [&state.p1, &state.p2]
        .iter()
        .map(|f| (f.y, phase_color(f.phase, table), fighter_rect(f.x, f.y, f.phase, width)))
        .collect();
    bodies.sort_by_key(|&(y, color, _)| (y, color));
    for (_, color, (l, t, r, b)) in bodies {
        img.fill_rect(l, t, r, b, color);
    }
    for p in &state.projectiles {
        let (l, r) = column_span(p.x, PROJECTILE_HALF, width);
        let centre = GROUND_ROW - p.y;
        img.fill_rect(l, centre - PROJECTILE_HALF, r, centre + PROJECTILE_HALF, PROJECTILE);
    }

    let fill = |health: u16| BAR_WIDTH * usize::from(health) / usize::from(HEALTH_MAX);
    let (top, bottom) = (BAR_TOP as i32, BAR_BOTTOM as i32);
    let p1_left = P1_BAR_LEFT as i32;
    let p2_left = P2_BAR_LEFT as i32;
    let bar = BAR_WIDTH as i32;
    img.fill_rect(p1_left, top, p1_left + bar, bottom, BAR_EMPTY);
    img.fill_rect(p1_left, top, p1_left + fill(state.p1.health) as i32, bottom, BAR_FULL);
    img.fill_rect(p2_left, top, p2_left + bar, bottom, BAR_EMPTY);
    img.fill_rect(p2_left + bar - fill(state.p2.health) as i32, top, p2_left + bar, bottom, BAR_FULL);

    let seconds = (state.timer_frames / crate::engine::FRAMES_PER_SECOND).min(99);
    draw_text(&mut img, &format!("{seconds:02}"), TIMER_BOX.0 as i32 + 1, TIMER_BOX.1 as i32, 2, TIMER);
    img
}

/// Marker box for `player`: (left, top, right, bottom), exclusive, possibly
/// partly off-canvas at the arena edges.
pub fn marker_rect(state: &GameState, player: Player) -> (i32, i32, i32, i32) {
    let f = state.fighter(player);
    let (_, fighter_top, _, _) = fighter_rect(f.x, f.y, f.phase, state.config.arena_width);
    let centre = screen_x(f.x, state.config.arena_width).floor() as i32;
    let left = centre - MARKER_WIDTH / 2;
    let bottom = fighter_top - MARKER_GAP;
    (left, bottom - MARKER_HEIGHT, left + MARKER_WIDTH, bottom)
}

/// Topmost row a marker can reach (fighter at the jump apex).
pub fn highest_marker_top() -> i32 {
    GROUND_ROW - JUMP_APEX - FIGHTER_HEIGHT - MARKER_GAP - MARKER_HEIGHT
}

/// Draws "P1"/"P2" boxes above the fighters. An image can be annotated once.
pub fn annotate(image: &FrameImage, state: &GameState) -> Result<FrameImage, ObservationError> {
    if image.annotated {
        return Err(ObservationError::AlreadyAnnotated);
    }
    let mut out = image.clone();
    for (player, color, label) in [(Player::P1, P1_MARKER, "P1"), (Player::P2, P2_MARKER, "P2")] {
        let (l, t, r, b) = marker_rect(state, player);
        out.fill_rect(l, t, r, b, color);
        // Two 3x5 glyphs with a one-column gap: 7 columns, centred.
        draw_text(&mut out, label, l + (MARKER_WIDTH - 7) / 2, t + 2, 1, GLYPH);
    }
    out.annotated = true;
    Ok(out)
}
