//! JSON spec files.
//!
//! ```json
//! {
//!   "q": {"num": "2", "den": "1"},
//!   "P": ["0", "1"],
//!   "points": [{"alpha": "1", "s": 1}],
//!   "precision_bits": 256,
//!   "caps": {"precision_cap": 16384, "retry_cap": 8}
//! }
//! ```
//!
//! Rationals are base-10 strings such as `"-3/7"`; plain JSON integers are
//! accepted as well.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use qforms_core::arith::rational::{parse_integer, parse_rational};
use qforms_core::session::PrecisionPolicy;
use qforms_core::spec::{Point, RawSpec};

pub const PRECISION_CAP_ENV: &str = "QFORMS_PRECISION_CAP";

/// A JSON string or integer, kept as its text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Text(String),
    Int(i64),
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Text(s) => f.write_str(s),
            Number::Int(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QJson {
    pub num: Number,
    pub den: Number,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub alpha: Number,
    pub s: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    #[serde(default = "default_precision_cap")]
    pub precision_cap: u32,
    #[serde(default = "default_retry_cap")]
    pub retry_cap: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            precision_cap: default_precision_cap(),
            retry_cap: default_retry_cap(),
        }
    }
}

fn default_precision_cap() -> u32 {
    PrecisionPolicy::default().cap_bits
}

fn default_retry_cap() -> u32 {
    8
}

fn default_precision_bits() -> u32 {
    256
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub q: QJson,
    #[serde(rename = "P")]
    pub poly: Vec<Number>,
    pub points: Vec<PointJson>,
    #[serde(default = "default_precision_bits")]
    pub precision_bits: u32,
    #[serde(default)]
    pub caps: Caps,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<SpecFile, String> {
        serde_json::from_str(text).map_err(|e| format!("spec file: {e}"))
    }

    pub fn load(path: &Path) -> Result<SpecFile, LoadError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LoadError::Io(format!("cannot read {}: {e}", path.display())))?;
        SpecFile::parse(&text).map_err(LoadError::Parse)
    }

    /// Converts the textual fields; semantic checks are left to
    /// `validate_spec`.
    pub fn to_raw(&self) -> qforms_core::Result<RawSpec> {
        let poly = self
            .poly
            .iter()
            .map(|c| parse_rational(&c.to_string()))
            .collect::<qforms_core::Result<Vec<_>>>()?;
        let points = self
            .points
            .iter()
            .map(|p| Ok(Point::new(parse_rational(&p.alpha.to_string())?, p.s)))
            .collect::<qforms_core::Result<Vec<_>>>()?;
        Ok(RawSpec {
            q_num: parse_integer(&self.q.num.to_string())?,
            q_den: parse_integer(&self.q.den.to_string())?,
            poly,
            points,
        })
    }

    /// Precision policy from the file, with the cap overridden by
    /// `QFORMS_PRECISION_CAP` when set.
    pub fn policy(&self) -> Result<PrecisionPolicy, String> {
        let cap = match std::env::var(PRECISION_CAP_ENV) {
            Ok(v) => v
                .trim()
                .parse::<u32>()
                .map_err(|e| format!("{PRECISION_CAP_ENV}={v:?}: {e}"))?,
            Err(_) => self.caps.precision_cap,
        };
        if self.precision_bits == 0 || cap < self.precision_bits {
            return Err(format!(
                "need 0 < precision_bits <= precision cap, got {} and {cap}",
                self.precision_bits
            ));
        }
        Ok(PrecisionPolicy {
            initial_bits: self.precision_bits,
            cap_bits: cap,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoadError {
    Io(String),
    Parse(String),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io(s) | LoadError::Parse(s) => f.write_str(s),
        }
    }
}
