//! Run configuration from a TOML file. Command-line flags take precedence
//! over anything set here.
//!
//! ```toml
//! seed = 1
//! count = 500
//! size = "256x256"        # or a single integer for square images
//! stroke_radius = 3.0
//! threshold = 0.9
//! tolerance = 10
//! workers = 8
//! out = "data/synth"
//! backgrounds = "data/bg"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::{Error, Result};

/// Smallest accepted image side.
pub const MIN_SIDE: u32 = 16;
pub const DEFAULT_SIZE: Size = Size {
    width: 256,
    height: 256,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Size {
    pub width: u32,
    pub height: u32,
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

impl Size {
    pub fn new(width: u32, height: u32) -> Result<Self, String> {
        if width < MIN_SIDE || height < MIN_SIDE {
            return Err(format!("size {width}x{height} is below the {MIN_SIDE}px minimum"));
        }
        Ok(Size { width, height })
    }
}

impl FromStr for Size {
    type Err = String;

    /// `"256"` or `"320x240"`.
    fn from_str(s: &str) -> Result<Self, String> {
        let side = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("invalid size {s:?}, expected N or WxH"))
        };
        match s.split_once(['x', 'X']) {
            Some((w, h)) => Size::new(side(w)?, side(h)?),
            None => {
                let n = side(s)?;
                Size::new(n, n)
            }
        }
    }
}

impl<'de> Deserialize<'de> for Size {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Side(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Side(n) => Size::new(n, n),
            Raw::Text(s) => s.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub size: Option<Size>,
    pub stroke_radius: Option<f64>,
    pub threshold: Option<f64>,
    pub tolerance: Option<u8>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub backgrounds: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
#[error("config {path}: {message}")]
pub struct ConfigError {
    pub path: PathBuf,
    pub message: String,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    /// Loads a config file. Relative `out` and `backgrounds` paths are kept
    /// as written, i.e. relative to the working directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        Self::from_toml(&text).map_err(|e| {
            ConfigError {
                path: path.to_path_buf(),
                message: e.message().to_string(),
            }
            .into()
        })
    }
}
