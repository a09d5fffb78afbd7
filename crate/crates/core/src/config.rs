//! Tunable thresholds, read from TOML.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::SizeRules;
use crate::spatial::DEFAULT_DEPTH;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// `*tiny*` in grid units; default `max(h/2, 2 finest cells)`.
    pub tiny: Option<f64>,
    /// `*very-long*` in grid units; default `W/2`.
    pub very_long: Option<f64>,
    pub short_mult: f64,
    pub long_mult: f64,
    pub long_width_frac: f64,
    pub small_mult: f64,
    pub angle_tol_deg: f64,
    /// Pyramid level used by alignment and `near`.
    pub align_level: usize,
    /// Pyramid depth (number of levels).
    pub depth: usize,
    /// `touch` additionally requires intersecting bounding boxes.
    pub strict_touch: bool,
    /// Maximum tuples examined in one parse.
    pub tuple_cap: u64,
}

impl Default for Config {
    fn default() -> Self {
        let r = SizeRules::default();
        Self {
            tiny: None,
            very_long: None,
            short_mult: r.short_mult,
            long_mult: r.long_mult,
            long_width_frac: r.long_width_frac,
            small_mult: r.small_mult,
            angle_tol_deg: r.angle_tol_deg,
            align_level: DEFAULT_DEPTH - 1,
            depth: DEFAULT_DEPTH,
            strict_touch: false,
            tuple_cap: 1_000_000,
        }
    }
}

impl Config {
    pub fn from_toml(src: &str) -> Result<Self, ConfigError> {
        let c: Config = toml::from_str(src)?;
        c.check()?;
        Ok(c)
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        if self.depth == 0 || self.depth > 14 {
            return Err(ConfigError::Invalid(format!(
                "depth must be 1..=14, got {}",
                self.depth
            )));
        }
        if self.align_level >= self.depth {
            return Err(ConfigError::Invalid(format!(
                "align_level {} exceeds the finest level {}",
                self.align_level,
                self.depth - 1
            )));
        }
        if !(0.0..90.0).contains(&self.angle_tol_deg) {
            return Err(ConfigError::Invalid("angle_tol_deg must be in [0, 90)".into()));
        }
        for (name, v) in [("tiny", self.tiny), ("very_long", self.very_long)] {
            if v.is_some_and(|v| !(v.is_finite() && v >= 0.0)) {
                return Err(ConfigError::Invalid(format!("{name} must be a non-negative number")));
            }
        }
        Ok(())
    }

    pub fn size_rules(&self) -> SizeRules {
        SizeRules {
            short_mult: self.short_mult,
            long_mult: self.long_mult,
            long_width_frac: self.long_width_frac,
            small_mult: self.small_mult,
            angle_tol_deg: self.angle_tol_deg,
        }
    }
}
