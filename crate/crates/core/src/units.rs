//! Fixed-point health values.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Full health on the internal integer scale.
pub const HEALTH_MAX: u16 = 1000;

/// A health fraction stored as thousandths, so values such as `0.025` or
/// `0.758` are exact. Serialized as a JSON number with at most 3 decimals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HealthFraction(u16);

impl HealthFraction {
    pub const ZERO: HealthFraction = HealthFraction(0);
    pub const FULL: HealthFraction = HealthFraction(HEALTH_MAX);

    /// Builds a fraction from thousandths, saturating at `1.000`.
    pub fn from_milli(milli: u16) -> Self {
        HealthFraction(milli.min(HEALTH_MAX))
    }

    /// Internal health points map one-to-one onto thousandths.
    pub fn from_health(health: u16) -> Self {
        Self::from_milli(health)
    }

    /// Rounds a decimal in `[0, 1]` to the nearest thousandth.
    pub fn from_f64(value: f64) -> Option<Self> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return None;
        }
        Some(HealthFraction((value * 1000.0).round() as u16))
    }

    pub fn milli(self) -> u16 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 1000.0
    }
}

impl fmt::Display for HealthFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:03}", self.0 / 1000, self.0 % 1000)
    }
}

impl Serialize for HealthFraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_f64())
    }
}

impl<'de> Deserialize<'de> for HealthFraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = f64::deserialize(deserializer)?;
        HealthFraction::from_f64(value)
            .ok_or_else(|| serde::de::Error::custom(format!("health fraction out of range: {value}")))
    }
}
