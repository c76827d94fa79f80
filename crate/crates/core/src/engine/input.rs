//! Controller buttons and chords.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One of the eight controller buttons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Button {
    Up,
    Down,
    Left,
    Right,
    A,
    B,
    C,
    Start,
}

impl Button {
    pub const ALL: [Button; 8] = [
        Button::Up,
        Button::Down,
        Button::Left,
        Button::Right,
        Button::A,
        Button::B,
        Button::C,
        Button::Start,
    ];

    pub const fn bit(self) -> u8 {
        1 << (self as u8)
    }

    pub const fn name(self) -> &'static str {
        match self {
            Button::Up => "Up",
            Button::Down => "Down",
            Button::Left => "Left",
            Button::Right => "Right",
            Button::A => "A",
            Button::B => "B",
            Button::C => "C",
            Button::Start => "Start",
        }
    }

    pub fn from_name(name: &str) -> Option<Button> {
        Button::ALL.into_iter().find(|b| b.name() == name)
    }

    /// Column index in heatmaps and count arrays.
    pub const fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Button {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of buttons held on one frame, stored as a bitmask
/// (bit 0 = Up ... bit 7 = Start).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ButtonChord(u8);

impl ButtonChord {
    pub const EMPTY: ButtonChord = ButtonChord(0);

    pub const fn from_bits(bits: u8) -> Self {
        ButtonChord(bits)
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, button: Button) -> bool {
        self.0 & button.bit() != 0
    }

    /// True when every button of `other` is held in `self`.
    pub const fn contains_all(self, other: ButtonChord) -> bool {
        self.0 & other.0 == other.0
    }

    pub const fn with(self, button: Button) -> Self {
        ButtonChord(self.0 | button.bit())
    }

    pub const fn without(self, button: Button) -> Self {
        ButtonChord(self.0 & !button.bit())
    }

    pub fn iter(self) -> impl Iterator<Item = Button> {
        Button::ALL.into_iter().filter(move |b| self.contains(*b))
    }

    /// The chord as the engine sees it: opposing directions cancel on
    /// their axis and Start is dropped.
    pub fn resolved(self) -> Self {
        let mut chord = self.without(Button::Start);
        if chord.contains(Button::Left) && chord.contains(Button::Right) {
            chord = chord.without(Button::Left).without(Button::Right);
        }
        if chord.contains(Button::Up) && chord.contains(Button::Down) {
            chord = chord.without(Button::Up).without(Button::Down);
        }
        chord
    }

    /// Swaps Left and Right.
    pub fn reflected(self) -> Self {
        let mut chord = self.without(Button::Left).without(Button::Right);
        if self.contains(Button::Left) {
            chord = chord.with(Button::Right);
        }
        if self.contains(Button::Right) {
            chord = chord.with(Button::Left);
        }
        chord
    }

    /// Horizontal direction after conflict resolution: -1, 0 or +1.
    pub fn horizontal(self) -> i32 {
        let chord = self.resolved();
        if chord.contains(Button::Right) {
            1
        } else if chord.contains(Button::Left) {
            -1
        } else {
            0
        }
    }
}

impl FromIterator<Button> for ButtonChord {
    fn from_iter<I: IntoIterator<Item = Button>>(iter: I) -> Self {
        iter.into_iter().fold(ButtonChord::EMPTY, ButtonChord::with)
    }
}

impl fmt::Debug for ButtonChord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl fmt::Display for ButtonChord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        let names: Vec<&str> = self.iter().map(Button::name).collect();
        f.write_str(&names.join("+"))
    }
}
